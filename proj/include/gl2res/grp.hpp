#ifndef GL2RES_GRP_HPP
#define GL2RES_GRP_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gl2res/common.hpp"
#include "gl2res/ffield.hpp"

/**
 * @file grp.hpp
 * @brief GL_2 over the levels of a field tower, and the named subgroups
 * B (upper triangular), T (anisotropic torus), S (split torus), Z (centre).
 */

namespace gl2res {

/// The matrix [[a, b], [c, d]] with entries in the field at `level`.
struct Mat2 {
  Level level = Level::P;
  Elem a = 0, b = 0, c = 0, d = 0;
};

inline Mat2 identity(const FieldTower& t, Level level)
{
  const Elem one = t.field(level).one();
  return {level, one, 0, 0, one};
}

inline Elem det(const FieldTower& t, const Mat2& m)
{
  const Field& F = t.field(m.level);
  return F.sub(F.mul(m.a, m.d), F.mul(m.b, m.c));
}

/// Entries embedded into a larger level.
inline Mat2 lift(const FieldTower& t, const Mat2& m, Level to)
{
  if (t.same_field(m.level, to))
    return {to, m.a, m.b, m.c, m.d};
  return {to, t.embed(m.a, m.level, to), t.embed(m.b, m.level, to), t.embed(m.c, m.level, to),
          t.embed(m.d, m.level, to)};
}

/// The same matrix over a subfield, if all entries lie there.
inline std::optional<Mat2> descend(const FieldTower& t, const Mat2& m, Level to)
{
  if (t.same_field(m.level, to))
    return Mat2{to, m.a, m.b, m.c, m.d};
  auto a = t.descend(m.a, m.level, to);
  auto b = t.descend(m.b, m.level, to);
  auto c = t.descend(m.c, m.level, to);
  auto d = t.descend(m.d, m.level, to);
  if (!a || !b || !c || !d)
    return std::nullopt;
  return Mat2{to, *a, *b, *c, *d};
}

/// Product; operands over different levels are lifted to the larger one.
inline Mat2 mul(const FieldTower& t, const Mat2& x0, const Mat2& y0)
{
  const Level L = t.join(x0.level, y0.level);
  const Mat2 x = lift(t, x0, L), y = lift(t, y0, L);
  const Field& F = t.field(L);
  return {L, F.add(F.mul(x.a, y.a), F.mul(x.b, y.c)), F.add(F.mul(x.a, y.b), F.mul(x.b, y.d)),
          F.add(F.mul(x.c, y.a), F.mul(x.d, y.c)), F.add(F.mul(x.c, y.b), F.mul(x.d, y.d))};
}

inline Mat2 inverse(const FieldTower& t, const Mat2& m)
{
  const Field& F = t.field(m.level);
  const Elem di = F.inv(det(t, m));
  return {m.level, F.mul(m.d, di), F.neg(F.mul(m.b, di)), F.neg(F.mul(m.c, di)), F.mul(m.a, di)};
}

/// g^{-1} x g
inline Mat2 conjugate_by(const FieldTower& t, const Mat2& x, const Mat2& g)
{
  return mul(t, mul(t, inverse(t, g), x), g);
}

inline bool equal(const FieldTower& t, const Mat2& x, const Mat2& y)
{
  const Level L = t.join(x.level, y.level);
  const Mat2 u = lift(t, x, L), v = lift(t, y, L);
  return u.a == v.a && u.b == v.b && u.c == v.c && u.d == v.d;
}

inline bool is_identity(const FieldTower& t, const Mat2& m)
{
  const Elem one = t.field(m.level).one();
  return m.a == one && m.d == one && m.b == 0 && m.c == 0;
}

/// Injective key for matrices over fields of size < 2^16.
inline std::uint64_t key(const FieldTower& t, const Mat2& m)
{
  const std::uint64_t s = t.field(m.level).size();
  if (s >= (1u << 16))
    throw InvalidParameters("matrix keys need a field of size < 65536");
  return ((static_cast<std::uint64_t>(m.a) * s + m.b) * s + m.c) * s + m.d;
}

inline std::uint64_t key_at(const FieldTower& t, const Mat2& m, Level level)
{
  return key(t, lift(t, m, level));
}

inline std::uint64_t gl2_order(std::uint64_t s) { return (s * s - 1) * (s * s - s); }

enum class SubgroupKind { Borel, AnisoTorus, SplitTorus, Center, Full, Explicit };

inline const char* kind_name(SubgroupKind k)
{
  switch (k) {
  case SubgroupKind::Borel: return "Borel";
  case SubgroupKind::AnisoTorus: return "AnisoTorus";
  case SubgroupKind::SplitTorus: return "SplitTorus";
  case SubgroupKind::Center: return "Center";
  case SubgroupKind::Full: return "Full";
  case SubgroupKind::Explicit: return "Explicit";
  }
  return "?";
}

/// A subgroup of GL_2 at a tower level: one of the named families, or an
/// explicit element list.
struct SubgroupSpec {
  SubgroupKind kind = SubgroupKind::Full;
  Level level = Level::P;
  std::shared_ptr<const std::vector<Mat2>> elements;
  std::shared_ptr<const std::unordered_set<std::uint64_t>> keys;
  std::string label;

  static SubgroupSpec named(SubgroupKind k, Level level)
  {
    SubgroupSpec s;
    s.kind = k;
    s.level = level;
    return s;
  }

  std::string name() const
  {
    if (!label.empty())
      return label;
    std::string n;
    switch (kind) {
    case SubgroupKind::Borel: n = "B"; break;
    case SubgroupKind::AnisoTorus: n = "T"; break;
    case SubgroupKind::SplitTorus: n = "S"; break;
    case SubgroupKind::Center: n = "Z"; break;
    case SubgroupKind::Full: n = "G"; break;
    case SubgroupKind::Explicit: n = "H"; break;
    }
    switch (level) {
    case Level::P: return n + "_p";
    case Level::P2: return n + "_p2";
    case Level::Q: return n + "_q";
    case Level::Q2: return n + "_q2";
    }
    return n;
  }
};

inline SubgroupSpec borel(Level l) { return SubgroupSpec::named(SubgroupKind::Borel, l); }
inline SubgroupSpec aniso_torus(Level l) { return SubgroupSpec::named(SubgroupKind::AnisoTorus, l); }
inline SubgroupSpec split_torus(Level l) { return SubgroupSpec::named(SubgroupKind::SplitTorus, l); }
inline SubgroupSpec center(Level l) { return SubgroupSpec::named(SubgroupKind::Center, l); }
inline SubgroupSpec full(Level l) { return SubgroupSpec::named(SubgroupKind::Full, l); }

inline SubgroupSpec explicit_group(const FieldTower& t, Level level, std::vector<Mat2> elems,
                                   std::string label = {})
{
  auto keys = std::make_shared<std::unordered_set<std::uint64_t>>();
  for (auto& m : elems) {
    m = lift(t, m, level);
    keys->insert(key(t, m));
  }
  SubgroupSpec s;
  s.kind = SubgroupKind::Explicit;
  s.level = level;
  s.elements = std::make_shared<const std::vector<Mat2>>(std::move(elems));
  s.keys = std::move(keys);
  s.label = std::move(label);
  return s;
}

/// The square of the torus parameter: eta^2 at F_p, eps^2 at F_q.
inline Elem torus_parameter(const FieldTower& t, Level level)
{
  if (level == Level::P)
    return t.eta_squared();
  if (level == Level::Q)
    return t.epsilon_squared();
  throw InvalidParameters("the anisotropic torus is defined at levels F_p and F_q only");
}

inline std::uint64_t subgroup_order(const FieldTower& t, const SubgroupSpec& spec)
{
  const std::uint64_t s = t.field(spec.level).size();
  switch (spec.kind) {
  case SubgroupKind::Full: return gl2_order(s);
  case SubgroupKind::Borel: return s * (s - 1) * (s - 1);
  case SubgroupKind::AnisoTorus: return s * s - 1;
  case SubgroupKind::SplitTorus: return (s - 1) * (s - 1);
  case SubgroupKind::Center: return s - 1;
  case SubgroupKind::Explicit: return spec.elements->size();
  }
  return 0;
}

/// Membership of g (at any level comparable with the spec's level).
inline bool contains(const FieldTower& t, const SubgroupSpec& spec, const Mat2& g0)
{
  const int dg = t.degree(g0.level), ds = t.degree(spec.level);
  Mat2 g;
  if (ds % dg == 0) {
    g = lift(t, g0, spec.level);
  } else if (dg % ds == 0) {
    auto d = descend(t, g0, spec.level);
    if (!d)
      return false;
    g = *d;
  } else {
    throw InvalidParameters(std::string("no common field for ") + level_name(g0.level) + " and " +
                            level_name(spec.level));
  }
  if (det(t, g) == 0)
    return false;
  switch (spec.kind) {
  case SubgroupKind::Full: return true;
  case SubgroupKind::Borel: return g.c == 0;
  case SubgroupKind::SplitTorus: return g.b == 0 && g.c == 0;
  case SubgroupKind::Center: return g.b == 0 && g.c == 0 && g.a == g.d;
  case SubgroupKind::AnisoTorus: {
    const Field& F = t.field(spec.level);
    return g.a == g.d && g.c == F.mul(g.b, torus_parameter(t, spec.level));
  }
  case SubgroupKind::Explicit: return spec.keys->count(key(t, g)) > 0;
  }
  return false;
}

/// All elements, in lexicographic order of (a, b, c, d).
inline std::vector<Mat2> enumerate(const FieldTower& t, const SubgroupSpec& spec,
                                   std::uint64_t budget = Budgets{}.enumeration)
{
  const std::uint64_t n = subgroup_order(t, spec);
  if (n > budget)
    throw BudgetExceeded("enumerating " + spec.name(), n, budget);
  if (spec.kind == SubgroupKind::Explicit)
    return *spec.elements;

  const Field& F = t.field(spec.level);
  const Elem s = F.size();
  std::vector<Mat2> out;
  out.reserve(n);
  const Level L = spec.level;
  switch (spec.kind) {
  case SubgroupKind::Full:
    for (Elem a = 0; a < s; ++a)
      for (Elem b = 0; b < s; ++b)
        for (Elem c = 0; c < s; ++c)
          for (Elem d = 0; d < s; ++d)
            if (F.mul(a, d) != F.mul(b, c))
              out.push_back({L, a, b, c, d});
    break;
  case SubgroupKind::Borel:
    for (Elem a = 1; a < s; ++a)
      for (Elem b = 0; b < s; ++b)
        for (Elem d = 1; d < s; ++d)
          out.push_back({L, a, b, 0, d});
    break;
  case SubgroupKind::AnisoTorus: {
    const Elem e2 = torus_parameter(t, L);
    for (Elem a = 0; a < s; ++a)
      for (Elem b = 0; b < s; ++b)
        if (a != 0 || b != 0)
          out.push_back({L, a, b, F.mul(b, e2), a});
    break;
  }
  case SubgroupKind::SplitTorus:
    for (Elem a = 1; a < s; ++a)
      for (Elem d = 1; d < s; ++d)
        out.push_back({L, a, 0, 0, d});
    break;
  case SubgroupKind::Center:
    for (Elem a = 1; a < s; ++a)
      out.push_back({L, a, 0, 0, a});
    break;
  case SubgroupKind::Explicit: break;
  }
  return out;
}

inline std::unordered_set<std::uint64_t> key_set(const FieldTower& t, const std::vector<Mat2>& elems,
                                                 Level level)
{
  std::unordered_set<std::uint64_t> out;
  out.reserve(elems.size() * 2);
  for (const auto& m : elems)
    out.insert(key_at(t, m, level));
  return out;
}

inline bool same_set(const FieldTower& t, const std::vector<Mat2>& x, const std::vector<Mat2>& y,
                     Level level)
{
  if (x.size() != y.size())
    return false;
  const auto kx = key_set(t, x, level);
  if (kx.size() != x.size())
    return false;
  for (const auto& m : y)
    if (!kx.count(key_at(t, m, level)))
      return false;
  return true;
}

/// Matches an explicit element list (at `level`) against the named subgroups
/// of that level; returns the named spec on set equality, else an explicit one.
inline SubgroupSpec classify(const FieldTower& t, const std::vector<Mat2>& elems, Level level)
{
  std::vector<SubgroupSpec> candidates{center(level), split_torus(level), borel(level), full(level)};
  if (level == Level::P || level == Level::Q)
    candidates.insert(candidates.begin() + 2, aniso_torus(level));
  for (const auto& c : candidates) {
    if (subgroup_order(t, c) != elems.size())
      continue;
    bool all = true;
    for (const auto& m : elems)
      if (!contains(t, c, m)) {
        all = false;
        break;
      }
    if (all && key_set(t, elems, level).size() == elems.size())
      return c;
  }
  return explicit_group(t, level, elems);
}

/// Closure of a generating set under multiplication.
inline std::vector<Mat2> closure(const FieldTower& t, const std::vector<Mat2>& gens, Level level,
                                 std::uint64_t budget = Budgets{}.enumeration)
{
  std::vector<Mat2> out{identity(t, level)};
  std::unordered_set<std::uint64_t> seen{key(t, out[0])};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& g : gens) {
      const Mat2 h = lift(t, mul(t, out[i], g), level);
      if (seen.insert(key(t, h)).second) {
        out.push_back(h);
        if (out.size() > budget)
          throw BudgetExceeded("closure", out.size(), budget);
      }
    }
  }
  return out;
}

/// A small generating set, chosen greedily in the given element order.
inline std::vector<Mat2> generating_set(const FieldTower& t, const std::vector<Mat2>& elems, Level level)
{
  std::vector<Mat2> gens;
  std::unordered_set<std::uint64_t> span{key_at(t, identity(t, level), level)};
  for (const auto& m : elems) {
    if (span.count(key_at(t, m, level)))
      continue;
    gens.push_back(lift(t, m, level));
    span = key_set(t, closure(t, gens, level), level);
  }
  return gens;
}

inline std::uint64_t element_order(const FieldTower& t, const Mat2& g)
{
  Mat2 x = g;
  std::uint64_t k = 1;
  while (!is_identity(t, x)) {
    x = mul(t, x, g);
    ++k;
  }
  return k;
}

/// [[1,1],[0,1]], [[1,0],[1,1]], diag(u,1) with u the primitive element.
inline std::vector<Mat2> standard_generators(const FieldTower& t, Level level)
{
  const Field& F = t.field(level);
  const Elem one = F.one();
  return {{level, one, one, 0, one}, {level, one, 0, one, one}, {level, F.primitive(), 0, 0, one}};
}

/// Generators of GL_2(F_p); closure is checked against the group order.
inline std::vector<Mat2> generators(const FieldTower& t, Level level = Level::P)
{
  auto gens = standard_generators(t, level);
  const std::uint64_t expected = gl2_order(t.field(level).size());
  if (expected <= Budgets{}.enumeration) {
    const auto span = closure(t, gens, level);
    if (span.size() != expected)
      throw std::logic_error("standard generators do not generate GL_2");
  }
  return gens;
}

/// Generators of any subgroup: standard ones for the full group, greedy otherwise.
inline std::vector<Mat2> subgroup_generators(const FieldTower& t, const SubgroupSpec& spec,
                                             std::uint64_t budget = Budgets{}.enumeration)
{
  if (spec.kind == SubgroupKind::Full)
    return standard_generators(t, spec.level);
  return generating_set(t, enumerate(t, spec, budget), spec.level);
}

struct ConjugacyClass {
  Mat2 rep;
  std::size_t size = 0;
  std::uint64_t order = 0;
};

/// Conjugacy classes by orbits of conjugation; representatives are the least
/// element of each class in enumeration order.
inline std::vector<ConjugacyClass> conjugacy_classes(const FieldTower& t, Level level = Level::P,
                                                     std::uint64_t budget = Budgets{}.enumeration)
{
  const auto G = enumerate(t, full(level), budget);
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (std::size_t i = 0; i < G.size(); ++i)
    index.emplace(key(t, G[i]), i);
  std::vector<char> done(G.size(), 0);
  std::vector<ConjugacyClass> out;
  for (std::size_t i = 0; i < G.size(); ++i) {
    if (done[i])
      continue;
    ConjugacyClass cls{G[i], 0, element_order(t, G[i])};
    for (const auto& x : G) {
      const std::size_t j = index.at(key(t, conjugate_by(t, G[i], x)));
      if (!done[j]) {
        done[j] = 1;
        ++cls.size;
      }
    }
    out.push_back(cls);
  }
  return out;
}

inline std::vector<Mat2> p_regular_class_reps(const FieldTower& t)
{
  std::vector<Mat2> out;
  for (const auto& c : conjugacy_classes(t, Level::P))
    if (c.order % static_cast<std::uint64_t>(t.p()) != 0)
      out.push_back(c.rep);
  return out;
}

struct GpIntersection {
  SubgroupSpec classified;
  std::vector<Mat2> elements;
};

/// H ∩ GL_2(F_p) for a subgroup H at level F_q, as elements over F_p.
inline GpIntersection intersect_with_gp(const FieldTower& t, const SubgroupSpec& spec,
                                        std::uint64_t budget = Budgets{}.enumeration)
{
  if (spec.level != Level::Q)
    throw InvalidParameters("intersect_with_gp expects a subgroup at level F_q");
  if (spec.kind == SubgroupKind::Explicit)
    throw InvalidParameters("intersect_with_gp expects a named subgroup");
  GpIntersection out;
  for (const auto& m : enumerate(t, spec, budget))
    if (auto d = descend(t, m, Level::P))
      out.elements.push_back(*d);
  out.classified = classify(t, out.elements, Level::P);
  return out;
}

} // namespace gl2res

#endif // GL2RES_GRP_HPP
