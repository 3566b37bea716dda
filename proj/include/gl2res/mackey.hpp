#ifndef GL2RES_MACKEY_HPP
#define GL2RES_MACKEY_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "gl2res/character.hpp"
#include "gl2res/common.hpp"
#include "gl2res/ffield.hpp"
#include "gl2res/grp.hpp"
#include "gl2res/projline.hpp"

/**
 * @file mackey.hpp
 * @brief Coset representatives of G_q/B_q and G_q/T_q identified with points,
 * double coset representatives from G_p-orbits, conjugated intersections.
 */

namespace gl2res {

/// Left coset representatives of a subgroup H of G_q, each attached to the
/// point rep . base; H is the stabilizer of base.
struct CosetSystem {
  SubgroupSpec small;
  std::vector<Mat2> reps;
  std::vector<Mat2> rep_inverses;
  std::vector<ProjPoint> points;
  ProjPoint base;
  Level space = Level::Q;
  /// coset index per point id of the line at `space`, -1 off the orbit
  std::vector<std::int32_t> index_of_point;

  std::size_t size() const { return reps.size(); }

  std::vector<std::uint32_t> point_ids(const FieldTower& t) const
  {
    std::vector<std::uint32_t> out;
    out.reserve(points.size());
    for (const auto& pt : points)
      out.push_back(point_id(t, pt));
    return out;
  }
};

/// g_x = [[1,0],[x,1]]
inline Mat2 g_x(const FieldTower& t, Elem x)
{
  const Elem one = t.field(Level::Q).one();
  return {Level::Q, one, 0, x, one};
}

/// w = [[0,1],[1,0]]
inline Mat2 w_matrix(const FieldTower& t)
{
  const Elem one = t.field(Level::Q).one();
  return {Level::Q, 0, one, one, 0};
}

/// g_{a,b} = [[1,0],[a,b]]
inline Mat2 g_ab(const FieldTower& t, Elem a, Elem b)
{
  return {Level::Q, t.field(Level::Q).one(), 0, a, b};
}

/// {g_x} ∪ {w} for B_q with base 0^; {g_{a,b} : b != 0} for T_q with base eps^.
/// Representatives are ordered by the id of their point.
inline CosetSystem coset_reps(const FieldTower& t, const SubgroupSpec& small)
{
  if (small.level != Level::Q ||
      (small.kind != SubgroupKind::Borel && small.kind != SubgroupKind::AnisoTorus))
    throw InvalidParameters("coset systems exist for B_q and T_q only");
  CosetSystem sys;
  sys.small = small;
  const Field& Fq = t.field(Level::Q);
  if (small.kind == SubgroupKind::Borel) {
    sys.space = Level::Q;
    sys.base = finite_point(Level::Q, 0);
    for (Elem x = 0; x < Fq.size(); ++x) {
      sys.reps.push_back(g_x(t, x));
      sys.points.push_back(finite_point(Level::Q, x));
    }
    sys.reps.push_back(w_matrix(t));
    sys.points.push_back(infinity_point(Level::Q));
  } else {
    sys.space = Level::Q2;
    sys.base = finite_point(Level::Q2, t.epsilon());
    const Field& F = t.field(Level::Q2);
    std::vector<std::pair<Elem, Mat2>> items;
    for (Elem a = 0; a < Fq.size(); ++a)
      for (Elem b = 1; b < Fq.size(); ++b) {
        const Elem x = F.add(t.embed(a, Level::Q, Level::Q2), F.mul(t.embed(b, Level::Q, Level::Q2), t.epsilon()));
        items.emplace_back(x, g_ab(t, a, b));
      }
    std::sort(items.begin(), items.end(), [](const auto& u, const auto& v) { return u.first < v.first; });
    for (const auto& [x, m] : items) {
      sys.reps.push_back(m);
      sys.points.push_back(finite_point(Level::Q2, x));
    }
  }
  sys.index_of_point.assign(line_size(t, sys.space), -1);
  for (std::size_t i = 0; i < sys.points.size(); ++i) {
    auto& slot = sys.index_of_point[point_id(t, sys.points[i])];
    if (slot >= 0)
      throw std::logic_error("two coset representatives map to the same point");
    slot = static_cast<std::int32_t>(i);
  }
  for (const auto& m : sys.reps)
    sys.rep_inverses.push_back(inverse(t, m));
  return sys;
}

struct Factorization {
  std::size_t index = 0;
  Mat2 rep;
  Mat2 h;
};

/// g = rep . h with h in the small group; rep is found through g . base.
inline Factorization factor(const FieldTower& t, const CosetSystem& sys, const Mat2& g)
{
  const ProjPoint pt = act(t, g, sys.base);
  const std::int32_t idx = sys.index_of_point.at(point_id(t, lift(t, pt, sys.space)));
  if (idx < 0)
    throw std::logic_error("g . base left the coset orbit");
  Factorization out;
  out.index = static_cast<std::size_t>(idx);
  out.rep = sys.reps[out.index];
  out.h = mul(t, sys.rep_inverses[out.index], g);
  if (!contains(t, sys.small, out.h))
    throw std::logic_error("coset factorization produced h outside " + sys.small.name());
  return out;
}

/// gamma H gamma^{-1} ∩ G_p, listed from G_p.
inline GpIntersection conjugated_intersection(const FieldTower& t, const Mat2& gamma, const SubgroupSpec& small,
                                              const std::vector<Mat2>& gp)
{
  GpIntersection out;
  for (const auto& g : gp)
    if (contains(t, small, conjugate_by(t, g, gamma)))
      out.elements.push_back(g);
  out.classified = classify(t, out.elements, Level::P);
  return out;
}

/// chi^gamma(h) = chi(gamma^{-1} h gamma) on `domain` (an intersection
/// returned by conjugated_intersection).
inline CharacterSpec twist_character(const FieldTower& t, const CharacterSpec& chi, const Mat2& gamma,
                                     const GpIntersection& domain)
{
  for (const auto& h : domain.elements)
    if (!contains(t, chi.domain, conjugate_by(t, h, gamma)))
      throw std::logic_error("twisted character is not defined on the intersection");
  CharacterSpec c;
  c.kind = CharKind::Twisted;
  c.base = std::make_shared<const CharacterSpec>(chi);
  c.gamma = gamma;
  c.domain = domain.classified;
  return c;
}

struct GammaData {
  Mat2 gamma;
  std::size_t coset_index = 0;
  ProjPoint point;
  std::size_t orbit_size = 0;
  GpIntersection intersection;
  GpIntersection point_stabilizer;
  bool equals_stabilizer = false;
};

struct DoubleCosetData {
  CosetSystem sys;
  OrbitDecomposition orbits;
  std::vector<GammaData> gammas;
};

/// One gamma per G_p-orbit on the coset points: the coset representative of
/// the orbit's representative point.
inline DoubleCosetData double_coset_reps(const FieldTower& t, const SubgroupSpec& small, const std::vector<Mat2>& gp)
{
  DoubleCosetData out;
  out.sys = coset_reps(t, small);
  const auto ids = out.sys.point_ids(t);
  OrbitOptions opts;
  opts.elements = &gp;
  out.orbits = orbit_decomposition(t, full(Level::P), out.sys.space, &ids, opts);
  for (const auto& o : out.orbits.orbits) {
    GammaData gd;
    gd.coset_index = static_cast<std::size_t>(out.sys.index_of_point.at(point_id(t, o.rep)));
    gd.gamma = out.sys.reps[gd.coset_index];
    gd.point = o.rep;
    gd.orbit_size = o.size;
    gd.intersection = conjugated_intersection(t, gd.gamma, small, gp);
    gd.point_stabilizer.elements = stabilizer_elements(t, gp, o.rep);
    gd.point_stabilizer.classified = classify(t, gd.point_stabilizer.elements, Level::P);
    gd.equals_stabilizer = same_set(t, gd.intersection.elements, gd.point_stabilizer.elements, Level::P);
    out.gammas.push_back(std::move(gd));
  }
  return out;
}

/// Partition of G_q into the sets G_p x H, by listing every element.
struct BruteDoubleCosets {
  std::vector<Mat2> group;
  std::vector<std::int32_t> label;
  std::vector<std::size_t> sizes;
  std::unordered_map<std::uint64_t, std::size_t> index;

  std::int32_t label_of(const FieldTower& t, const Mat2& g) const
  {
    return label[index.at(key_at(t, g, Level::Q))];
  }
};

inline BruteDoubleCosets brute_force_double_cosets(const FieldTower& t, const SubgroupSpec& small,
                                                   const std::vector<Mat2>& gp,
                                                   std::uint64_t budget = Budgets{}.enumeration)
{
  BruteDoubleCosets out;
  out.group = enumerate(t, full(Level::Q), budget);
  out.index.reserve(out.group.size() * 2);
  for (std::size_t i = 0; i < out.group.size(); ++i)
    out.index.emplace(key(t, out.group[i]), i);
  out.label.assign(out.group.size(), -1);
  const auto H = enumerate(t, small, budget);
  std::vector<Mat2> gpq;
  for (const auto& g : gp)
    gpq.push_back(lift(t, g, Level::Q));
  for (std::size_t i = 0; i < out.group.size(); ++i) {
    if (out.label[i] >= 0)
      continue;
    const auto lab = static_cast<std::int32_t>(out.sizes.size());
    std::size_t count = 0;
    for (const auto& g : gpq) {
      const Mat2 gx = mul(t, g, out.group[i]);
      for (const auto& h : H) {
        const std::size_t j = out.index.at(key(t, mul(t, gx, h)));
        if (out.label[j] < 0) {
          out.label[j] = lab;
          ++count;
        } else if (out.label[j] != lab) {
          throw std::logic_error("double cosets overlap");
        }
      }
    }
    out.sizes.push_back(count);
  }
  return out;
}

} // namespace gl2res

#endif // GL2RES_MACKEY_HPP
