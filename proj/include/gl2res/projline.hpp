#ifndef GL2RES_PROJLINE_HPP
#define GL2RES_PROJLINE_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "gl2res/common.hpp"
#include "gl2res/ffield.hpp"
#include "gl2res/grp.hpp"

/**
 * @file projline.hpp
 * @brief P^1 over a tower level, the action [x:y] -> [ax+by : cx+dy],
 * orbits and stabilizers.
 */

namespace gl2res {

/// x^ = [1:x] or inf^ = [0:1].
struct ProjPoint {
  Level level = Level::P;
  bool infinite = false;
  Elem x = 0;
};

inline ProjPoint finite_point(Level level, Elem x) { return {level, false, x}; }
inline ProjPoint infinity_point(Level level) { return {level, true, 0}; }

/// Normalizes [u:v].
inline ProjPoint make_point(const FieldTower& t, Level level, Elem u, Elem v)
{
  if (u == 0) {
    if (v == 0)
      throw InvalidParameters("[0:0] is not a point");
    return infinity_point(level);
  }
  return finite_point(level, t.field(level).div(v, u));
}

inline std::uint32_t line_size(const FieldTower& t, Level level) { return t.field(level).size() + 1; }

/// x for x^, |F| for inf^; ordering by id is the lexicographic point order.
inline std::uint32_t point_id(const FieldTower& t, const ProjPoint& pt)
{
  return pt.infinite ? t.field(pt.level).size() : pt.x;
}

inline ProjPoint point_from_id(const FieldTower& t, Level level, std::uint32_t id)
{
  if (id == t.field(level).size())
    return infinity_point(level);
  if (id > t.field(level).size())
    throw InvalidParameters("point id out of range");
  return finite_point(level, id);
}

inline ProjPoint lift(const FieldTower& t, const ProjPoint& pt, Level to)
{
  if (pt.infinite)
    return infinity_point(to);
  return finite_point(to, t.embed(pt.x, pt.level, to));
}

inline bool equal(const FieldTower& t, const ProjPoint& x, const ProjPoint& y)
{
  const Level L = t.join(x.level, y.level);
  const ProjPoint u = lift(t, x, L), v = lift(t, y, L);
  return u.infinite == v.infinite && u.x == v.x;
}

/// g . [x:y] = [ax+by : cx+dy], computed at the larger of the two levels.
inline ProjPoint act(const FieldTower& t, const Mat2& g0, const ProjPoint& pt0)
{
  const Level L = t.join(g0.level, pt0.level);
  const Mat2 g = lift(t, g0, L);
  const ProjPoint pt = lift(t, pt0, L);
  const Field& F = t.field(L);
  if (pt.infinite) {
    if (g.b == 0)
      return infinity_point(L);
    return finite_point(L, F.div(g.d, g.b));
  }
  const Elem u = F.add(g.a, F.mul(g.b, pt.x));
  if (u == 0)
    return infinity_point(L);
  return finite_point(L, F.div(F.add(g.c, F.mul(g.d, pt.x)), u));
}

/// Action on point ids of the line at `level`, g already lifted to `level`.
inline std::uint32_t act_id(const FieldTower& t, const Mat2& g, Level level, std::uint32_t id)
{
  const Field& F = t.field(level);
  if (id == F.size())
    return g.b == 0 ? F.size() : F.div(g.d, g.b);
  const Elem u = F.add(g.a, F.mul(g.b, id));
  if (u == 0)
    return F.size();
  return F.div(F.add(g.c, F.mul(g.d, id)), u);
}

struct Orbit {
  ProjPoint rep;
  std::size_t size = 0;
  /// Named subgroup when the stabilizer was listed and matched one.
  SubgroupSpec stab;
  std::uint64_t stab_order = 0;
  /// False when the order was inferred from orbit-stabilizer only.
  bool stab_listed = false;
  std::vector<std::uint32_t> members;
};

struct OrbitDecomposition {
  SubgroupSpec acting;
  Level space = Level::P;
  std::vector<Orbit> orbits;
  /// Orbit index per point id; -1 for points outside the decomposed subset.
  std::vector<std::int32_t> orbit_of;
  std::size_t subset_size = 0;
};

struct OrbitOptions {
  std::uint64_t budget = Budgets{}.enumeration;
  bool preferred = true;
  bool exhaustive_check = true;
  /// Pre-enumerated acting group, to avoid listing it repeatedly.
  const std::vector<Mat2>* elements = nullptr;
};

/// 0^, eta^ and eps^ where they exist on the line at `space`.
inline std::vector<std::uint32_t> preferred_points(const FieldTower& t, Level space)
{
  std::vector<std::uint32_t> out{0};
  const int d = t.degree(space);
  if (d % 2 == 0)
    out.push_back(t.embed(t.eta(), Level::P2, space));
  if (d % t.degree(Level::Q2) == 0)
    out.push_back(t.embed(t.epsilon(), Level::Q2, space));
  return out;
}

inline std::vector<Mat2> stabilizer_elements(const FieldTower& t, const std::vector<Mat2>& group,
                                             const ProjPoint& pt)
{
  std::vector<Mat2> out;
  const std::uint32_t id = point_id(t, pt);
  for (const auto& g : group)
    if (act_id(t, lift(t, g, pt.level), pt.level, id) == id)
      out.push_back(g);
  return out;
}

/// Stabilizer as an element list and as a classified subgroup.
inline GpIntersection stabilizer(const FieldTower& t, const SubgroupSpec& spec, const ProjPoint& pt,
                                 std::uint64_t budget = Budgets{}.enumeration)
{
  GpIntersection out;
  out.elements = stabilizer_elements(t, enumerate(t, spec, budget), pt);
  out.classified = classify(t, out.elements, spec.level);
  return out;
}

/// Orbits of `acting` on the points of P^1 at `space` (or a subset of ids).
/// Orbits come from a breadth-first search over generators; when the group
/// can be listed, each orbit is recomputed from all elements as a cross-check
/// and stabilizers are listed and classified.
inline OrbitDecomposition orbit_decomposition(const FieldTower& t, const SubgroupSpec& acting, Level space,
                                              const std::vector<std::uint32_t>* subset = nullptr,
                                              const OrbitOptions& opts = {})
{
  if (t.degree(space) % t.degree(acting.level) != 0)
    throw InvalidParameters("acting group does not act on this line");
  const std::uint32_t n = line_size(t, space);
  OrbitDecomposition out;
  out.acting = acting;
  out.space = space;
  out.orbit_of.assign(n, -1);

  std::vector<char> in_subset(n, subset ? 0 : 1);
  if (subset)
    for (auto id : *subset)
      in_subset.at(id) = 1;
  out.subset_size = static_cast<std::size_t>(std::count(in_subset.begin(), in_subset.end(), 1));

  std::vector<Mat2> gens;
  for (const auto& g : subgroup_generators(t, acting, opts.budget))
    gens.push_back(lift(t, g, space));

  std::vector<std::vector<std::uint32_t>> orbits;
  for (std::uint32_t start = 0; start < n; ++start) {
    if (!in_subset[start] || out.orbit_of[start] >= 0)
      continue;
    const auto idx = static_cast<std::int32_t>(orbits.size());
    std::vector<std::uint32_t> members{start};
    out.orbit_of[start] = idx;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (const auto& g : gens) {
        const std::uint32_t y = act_id(t, g, space, members[i]);
        if (!in_subset[y])
          throw std::logic_error("decomposed subset is not stable under the acting group");
        if (out.orbit_of[y] < 0) {
          out.orbit_of[y] = idx;
          members.push_back(y);
        }
      }
    }
    std::sort(members.begin(), members.end());
    orbits.push_back(std::move(members));
  }

  const auto pref = opts.preferred ? preferred_points(t, space) : std::vector<std::uint32_t>{};
  std::vector<std::pair<std::uint64_t, std::size_t>> order;
  std::vector<std::uint32_t> rep_ids(orbits.size());
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    std::uint64_t rank = 0;
    bool found = false;
    for (std::size_t i = 0; i < pref.size() && !found; ++i) {
      if (in_subset[pref[i]] && out.orbit_of[pref[i]] == static_cast<std::int32_t>(k)) {
        rep_ids[k] = pref[i];
        rank = i;
        found = true;
      }
    }
    if (!found) {
      rep_ids[k] = orbits[k].front();
      rank = pref.size() + orbits[k].front();
    }
    order.emplace_back(rank, k);
  }
  std::sort(order.begin(), order.end());

  const std::uint64_t group_order = subgroup_order(t, acting);
  const bool listable = opts.elements != nullptr || group_order <= opts.budget;
  std::vector<Mat2> listed;
  const std::vector<Mat2>* elems = opts.elements;
  if (!elems && listable) {
    listed = enumerate(t, acting, opts.budget);
    elems = &listed;
  }
  std::vector<Mat2> lifted;
  if (elems) {
    lifted.reserve(elems->size());
    for (const auto& g : *elems)
      lifted.push_back(lift(t, g, space));
  }

  std::vector<std::int32_t> remap(orbits.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t k = order[pos].second;
    remap[k] = static_cast<std::int32_t>(pos);
    Orbit o;
    o.rep = point_from_id(t, space, rep_ids[k]);
    o.size = orbits[k].size();
    o.members = orbits[k];
    if (elems) {
      std::vector<Mat2> stab;
      std::vector<std::uint32_t> image;
      if (opts.exhaustive_check)
        image.reserve(lifted.size());
      for (std::size_t i = 0; i < lifted.size(); ++i) {
        const std::uint32_t y = act_id(t, lifted[i], space, rep_ids[k]);
        if (y == rep_ids[k])
          stab.push_back((*elems)[i]);
        if (opts.exhaustive_check)
          image.push_back(y);
      }
      if (opts.exhaustive_check) {
        std::sort(image.begin(), image.end());
        image.erase(std::unique(image.begin(), image.end()), image.end());
        if (image != o.members)
          throw std::logic_error("generator orbit disagrees with the exhaustive orbit");
      }
      o.stab_order = stab.size();
      o.stab = classify(t, stab, acting.level);
      o.stab_listed = true;
    } else {
      o.stab_order = group_order / o.size;
      o.stab = SubgroupSpec::named(SubgroupKind::Explicit, acting.level);
      o.stab.label = "inferred";
    }
    out.orbits.push_back(std::move(o));
  }
  for (auto& v : out.orbit_of)
    if (v >= 0)
      v = remap[v];
  return out;
}

/// Ids of the G_q-orbit of eps^ in P^1(F_{q^2}), by search from eps^.
inline std::vector<std::uint32_t> epsilon_orbit_ids(const FieldTower& t)
{
  const Level L = Level::Q2;
  const std::uint32_t n = line_size(t, L);
  std::vector<char> seen(n, 0);
  std::vector<Mat2> gens;
  for (const auto& g : standard_generators(t, Level::Q))
    gens.push_back(lift(t, g, L));
  std::vector<std::uint32_t> out{t.epsilon()};
  seen[t.epsilon()] = 1;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& g : gens) {
      const std::uint32_t y = act_id(t, g, L, out[i]);
      if (!seen[y]) {
        seen[y] = 1;
        out.push_back(y);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// G_p-orbits inside the G_q-orbit of eps^.
inline OrbitDecomposition split_epsilon_orbit(const FieldTower& t, const OrbitOptions& opts = {})
{
  const auto ids = epsilon_orbit_ids(t);
  return orbit_decomposition(t, full(Level::P), Level::Q2, &ids, opts);
}

} // namespace gl2res

#endif // GL2RES_PROJLINE_HPP
