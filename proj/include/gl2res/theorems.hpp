#ifndef GL2RES_THEOREMS_HPP
#define GL2RES_THEOREMS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "gl2res/character.hpp"
#include "gl2res/common.hpp"
#include "gl2res/ffield.hpp"
#include "gl2res/grp.hpp"
#include "gl2res/mackey.hpp"
#include "gl2res/reps.hpp"

/**
 * @file theorems.hpp
 * @brief Orbit-count closed forms and both sides of the restriction
 * isomorphisms for principal series and torus inductions.
 */

namespace gl2res {

/// num / den, kept unreduced so that divisibility can be reported.
struct ClosedForm {
  std::int64_t num = 0;
  std::int64_t den = 1;

  bool integral() const { return den != 0 && num % den == 0; }
  std::int64_t value() const
  {
    if (!integral())
      throw std::logic_error("closed form is not an integer");
    return num / den;
  }
};

namespace counts {

inline std::int64_t pw(int p, int e)
{
  if (e < 0)
    throw InvalidParameters("negative exponent in an orbit count");
  return static_cast<std::int64_t>(ipow(static_cast<std::uint64_t>(p), static_cast<unsigned>(e)));
}

/// G_p-orbits of size p(p^2-1) on P^1(F_q), f odd.
inline ClosedForm I1(int p, int f) { return {pw(p, f - 1) - 1, pw(p, 2) - 1}; }

/// G_p-orbits of size p(p^2-1) on P^1(F_q), f even.
inline ClosedForm I2(int p, int f) { return {p * (pw(p, f - 2) - 1), pw(p, 2) - 1}; }

/// G_p-orbits in the G_q-orbit of eps^, f even.
inline ClosedForm J(int p, int f) { return {pw(p, f - 1) * (pw(p, f) - 1), pw(p, 2) - 1}; }

/// G_p-orbits of size p(p^2-1) in the G_q-orbit of eps^, f odd.
inline ClosedForm Jprime(int p, int f) { return {(pw(p, f - 1) - 1) * (pw(p, f) + p - 1), pw(p, 2) - 1}; }

/// Multiplicity of the Z_p-induced block in the B_q case.
inline std::uint64_t borel_mult(int p, int f)
{
  return static_cast<std::uint64_t>(f % 2 ? I1(p, f).value() : I2(p, f).value());
}

/// Multiplicity of the Z_p-induced block in the T_q case.
inline std::uint64_t torus_mult(int p, int f)
{
  return static_cast<std::uint64_t>(f % 2 ? Jprime(p, f).value() : J(p, f).value());
}

} // namespace counts

/// Both sides of one restriction isomorphism.
struct Sides {
  Rep lhs;
  Rep rhs;
  /// Dimension predicted by the closed forms for the right-hand side.
  std::uint64_t predicted_dim = 0;
};

inline Rep principal_series_restricted(const FieldTower& t, const CharacterSpec& chi)
{
  return restrict(t, induce(t, borel(Level::Q), chi, full(Level::Q)), full(Level::P));
}

inline Rep torus_induced_restricted(const FieldTower& t, std::int64_t r)
{
  return restrict(t, induce(t, aniso_torus(Level::Q), omega(r), full(Level::Q)), full(Level::P));
}

/// g_eta, the coset representative of the point eta^ when f is even.
inline Mat2 g_eta(const FieldTower& t) { return g_x(t, t.embed(t.eta(), Level::P2, Level::Q)); }

/// ind_{B_p} chi|_{B_p} (+ ind_{T_p} chi^{g_eta} if f even) + m ind_{Z_p} chi|_{Z_p}.
inline Sides borel_mackey_sides(const FieldTower& t, const CharacterSpec& chi, const std::vector<Mat2>& gp)
{
  const int p = t.p(), f = t.f();
  const auto G = full(Level::P);
  std::vector<std::pair<Rep, std::uint64_t>> parts;
  parts.emplace_back(induce(t, borel(Level::P), restrict_character(t, chi, borel(Level::P)), G), 1);
  if (f % 2 == 0) {
    const Mat2 g = g_eta(t);
    const auto inter = conjugated_intersection(t, g, borel(Level::Q), gp);
    const auto tw = twist_character(t, chi, g, inter);
    parts.emplace_back(induce(t, inter.classified, tw, G), 1);
  }
  const std::uint64_t m = counts::borel_mult(p, f);
  parts.emplace_back(induce(t, center(Level::P), restrict_character(t, chi, center(Level::P)), G), m);
  const std::uint64_t pp = static_cast<std::uint64_t>(p);
  Sides s{principal_series_restricted(t, chi), direct_sum(t, G, parts), 0};
  s.predicted_dim = (pp + 1) + (f % 2 == 0 ? pp * (pp - 1) : 0) + m * pp * (pp * pp - 1);
  return s;
}

/// m ind_{Z_p} chi|_{Z_p} (f even) or ind_{T_p} chi|_{T_p} + m ind_{Z_p} chi|_{Z_p} (f odd).
inline Sides torus_mackey_sides(const FieldTower& t, std::int64_t r)
{
  const int p = t.p(), f = t.f();
  const auto G = full(Level::P);
  const auto chi = omega(r);
  std::vector<std::pair<Rep, std::uint64_t>> parts;
  if (f % 2 == 1)
    parts.emplace_back(induce(t, aniso_torus(Level::P), restrict_character(t, chi, aniso_torus(Level::P)), G), 1);
  const std::uint64_t m = counts::torus_mult(p, f);
  parts.emplace_back(induce(t, center(Level::P), restrict_character(t, chi, center(Level::P)), G), m);
  const std::uint64_t pp = static_cast<std::uint64_t>(p);
  Sides s{torus_induced_restricted(t, r), direct_sum(t, G, parts), 0};
  s.predicted_dim = (f % 2 == 1 ? pp * (pp - 1) : 0) + m * pp * (pp * pp - 1);
  return s;
}

/// The block replacing ind_{Z_p}^{G_p} of z -> z^r: for part 1 the p - 1
/// twisted Steinberg blocks, for part 2 the p + 1 torus inductions.
inline std::vector<Rep> central_blocks(const FieldTower& t, std::int64_t r, int part, const Rep& steinberg)
{
  const int p = t.p();
  const auto G = full(Level::P);
  std::vector<Rep> out;
  if (part == 1) {
    for (int i = 1; i <= p - 1; ++i)
      out.push_back(tensor(t, induce(t, borel(Level::P), chi_rs(i, r - i, Level::P), G), steinberg));
  } else if (part == 2) {
    for (int i = 0; i <= p; ++i)
      out.push_back(induce(t, aniso_torus(Level::P), omega_p(r + static_cast<std::int64_t>(i) * (p - 1)), G));
  } else {
    throw InvalidParameters("part must be 1 or 2");
  }
  return out;
}

/// Principal series: ind_{B_p} chi_r (+ ind_{T_p} omega_2^r if f even) + m (blocks).
inline Sides principal_series_sides(const FieldTower& t, std::int64_t r, int part, const Rep& steinberg)
{
  const int p = t.p(), f = t.f();
  if (r < 0 || static_cast<std::uint64_t>(r) >= t.q() - 1)
    throw InvalidParameters("r must satisfy 0 <= r < q - 1");
  const auto G = full(Level::P);
  std::vector<std::pair<Rep, std::uint64_t>> parts;
  parts.emplace_back(induce(t, borel(Level::P), chi_r(r, Level::P), G), 1);
  if (f % 2 == 0)
    parts.emplace_back(induce(t, aniso_torus(Level::P), omega_p(r), G), 1);
  const std::uint64_t m = counts::borel_mult(p, f);
  for (const auto& b : central_blocks(t, r, part, steinberg))
    parts.emplace_back(b, m);
  const std::uint64_t pp = static_cast<std::uint64_t>(p);
  Sides s{principal_series_restricted(t, chi_r(r, Level::Q)), direct_sum(t, G, parts), 0};
  s.predicted_dim = (pp + 1) + (f % 2 == 0 ? pp * (pp - 1) : 0) + m * pp * (pp * pp - 1);
  return s;
}

/// Torus induction: (ind_{T_p} omega_2^r if f odd) + m (blocks).
inline Sides torus_sides(const FieldTower& t, std::int64_t r, int part, const Rep& steinberg)
{
  const int p = t.p(), f = t.f();
  if (r < 0 || static_cast<std::uint64_t>(r) >= t.q() * t.q() - 1)
    throw InvalidParameters("r must satisfy 0 <= r < q^2 - 1");
  const auto G = full(Level::P);
  std::vector<std::pair<Rep, std::uint64_t>> parts;
  if (f % 2 == 1)
    parts.emplace_back(induce(t, aniso_torus(Level::P), omega_p(r), G), 1);
  const std::uint64_t m = counts::torus_mult(p, f);
  for (const auto& b : central_blocks(t, r, part, steinberg))
    parts.emplace_back(b, m);
  const std::uint64_t pp = static_cast<std::uint64_t>(p);
  Sides s{torus_induced_restricted(t, r), direct_sum(t, G, parts), 0};
  s.predicted_dim = (f % 2 == 1 ? pp * (pp - 1) : 0) + m * pp * (pp * pp - 1);
  return s;
}

} // namespace gl2res

#endif // GL2RES_THEOREMS_HPP
