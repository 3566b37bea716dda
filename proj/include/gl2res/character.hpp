#ifndef GL2RES_CHARACTER_HPP
#define GL2RES_CHARACTER_HPP

#include <cstdint>
#include <memory>
#include <string>

#include "gl2res/common.hpp"
#include "gl2res/ffield.hpp"
#include "gl2res/grp.hpp"

/**
 * @file character.hpp
 * @brief Mod p characters of B, T and their restrictions and twists.
 * All values are returned in the top field F_{q^2}.
 */

namespace gl2res {

enum class CharKind {
  /// a^r d^s on upper triangular matrices
  ChiRS,
  /// (a + b eps)^r on [[a,b],[b eps^2,a]]
  Omega,
  /// (a + b eta)^r on [[a,b],[b eta^2,a]]
  OmegaP,
  /// h -> base(gamma^{-1} h gamma)
  Twisted
};

struct CharacterSpec {
  CharKind kind = CharKind::ChiRS;
  std::int64_t r = 0;
  std::int64_t s = 0;
  SubgroupSpec domain;
  std::shared_ptr<const CharacterSpec> base;
  Mat2 gamma;
  std::string label;

  std::string name() const
  {
    if (!label.empty())
      return label;
    switch (kind) {
    case CharKind::ChiRS:
      return "chi_{" + std::to_string(r) + "," + std::to_string(s) + "}|" + domain.name();
    case CharKind::Omega: return "omega_2f^" + std::to_string(r) + "|" + domain.name();
    case CharKind::OmegaP: return "omega_2^" + std::to_string(r) + "|" + domain.name();
    case CharKind::Twisted: return "(" + base->name() + ")^gamma|" + domain.name();
    }
    return "?";
  }
};

inline CharacterSpec chi_rs(std::int64_t r, std::int64_t s, Level level)
{
  CharacterSpec c;
  c.kind = CharKind::ChiRS;
  c.r = r;
  c.s = s;
  c.domain = borel(level);
  return c;
}

inline CharacterSpec chi_r(std::int64_t r, Level level) { return chi_rs(r, 0, level); }

/// omega_{2f}^r on T_q
inline CharacterSpec omega(std::int64_t r)
{
  CharacterSpec c;
  c.kind = CharKind::Omega;
  c.r = r;
  c.domain = aniso_torus(Level::Q);
  return c;
}

/// omega_2^r on T_p
inline CharacterSpec omega_p(std::int64_t r)
{
  CharacterSpec c;
  c.kind = CharKind::OmegaP;
  c.r = r;
  c.domain = aniso_torus(Level::P);
  return c;
}

/// chi_{a,d} on the split torus S_p
inline CharacterSpec split_character(std::int64_t a, std::int64_t d)
{
  CharacterSpec c = chi_rs(a, d, Level::P);
  c.domain = split_torus(Level::P);
  return c;
}

/// True when every element of `sub` lies in `super` (checked on generators).
inline bool is_subgroup_of(const FieldTower& t, const SubgroupSpec& sub, const SubgroupSpec& super,
                           std::uint64_t budget = Budgets{}.enumeration)
{
  if (sub.kind == SubgroupKind::Full && super.kind == SubgroupKind::Full)
    return t.degree(super.level) % t.degree(sub.level) == 0;
  for (const auto& g : subgroup_generators(t, sub, budget))
    if (!contains(t, super, g))
      return false;
  return true;
}

inline CharacterSpec restrict_character(const FieldTower& t, const CharacterSpec& chi, const SubgroupSpec& sub)
{
  if (!is_subgroup_of(t, sub, chi.domain))
    throw InvalidParameters(sub.name() + " is not contained in the domain " + chi.domain.name());
  CharacterSpec c = chi;
  c.domain = sub;
  c.label.clear();
  return c;
}

/// Value of chi at g, in F_{q^2}.
inline Elem eval_character(const FieldTower& t, const CharacterSpec& chi, const Mat2& g0)
{
  if (!contains(t, chi.domain, g0))
    throw InvalidParameters("element outside the domain of " + chi.name());
  const Field& F = t.field(Level::Q2);
  const Mat2 g = lift(t, g0, Level::Q2);
  switch (chi.kind) {
  case CharKind::ChiRS: return F.mul(F.pow(g.a, chi.r), F.pow(g.d, chi.s));
  case CharKind::Omega:
    return F.pow(F.add(g.a, F.mul(g.b, t.epsilon())), chi.r);
  case CharKind::OmegaP:
    return F.pow(F.add(g.a, F.mul(g.b, t.embed(t.eta(), Level::P2, Level::Q2))), chi.r);
  case CharKind::Twisted: return eval_character(t, *chi.base, conjugate_by(t, g0, chi.gamma));
  }
  return 0;
}

} // namespace gl2res

#endif // GL2RES_CHARACTER_HPP
