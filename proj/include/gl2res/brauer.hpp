#ifndef GL2RES_BRAUER_HPP
#define GL2RES_BRAUER_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "gl2res/common.hpp"
#include "gl2res/grp.hpp"
#include "gl2res/linalg.hpp"
#include "gl2res/reps.hpp"

/**
 * @file brauer.hpp
 * @brief Brauer character fingerprints (characteristic polynomials on the
 * p-regular classes of G_p), intertwiner spaces and isomorphism testing.
 */

namespace gl2res {

struct BrauerFingerprint {
  std::vector<Mat2> class_reps;
  std::vector<FPoly> polys;
  std::size_t dim = 0;
};

/// Monomial cycle products for monomial parts, dense reduction otherwise;
/// direct sums multiply the polynomials of their parts.
inline BrauerFingerprint fingerprint(const Rep& rep, const std::vector<Mat2>& class_reps)
{
  BrauerFingerprint fp;
  fp.class_reps = class_reps;
  fp.dim = rep.dim();
  for (const auto& g : class_reps)
    fp.polys.push_back(rep.impl->charpoly_at(g));
  return fp;
}

/// Dense characteristic polynomials of the full matrices.
inline BrauerFingerprint fingerprint_dense(const Rep& rep, const std::vector<Mat2>& class_reps)
{
  BrauerFingerprint fp;
  fp.class_reps = class_reps;
  fp.dim = rep.dim();
  for (const auto& g : class_reps)
    fp.polys.push_back(charpoly(rep.impl->field(), rep.impl->matrix(g)));
  return fp;
}

inline BrauerFingerprint fingerprint_product(const Field& F, const BrauerFingerprint& a, const BrauerFingerprint& b)
{
  BrauerFingerprint out;
  out.class_reps = a.class_reps;
  out.dim = a.dim + b.dim;
  for (std::size_t i = 0; i < a.polys.size(); ++i)
    out.polys.push_back(poly_mul(F, a.polys[i], b.polys[i]));
  return out;
}

struct FingerprintComparison {
  bool equal = false;
  std::string reason;
  std::optional<std::size_t> class_index;
  FPoly lhs, rhs;
};

inline FingerprintComparison compare(const BrauerFingerprint& a, const BrauerFingerprint& b)
{
  FingerprintComparison c;
  if (a.dim != b.dim) {
    c.reason = "dimension " + std::to_string(a.dim) + " != " + std::to_string(b.dim);
    return c;
  }
  if (a.polys.size() != b.polys.size()) {
    c.reason = "different class lists";
    return c;
  }
  for (std::size_t i = 0; i < a.polys.size(); ++i) {
    if (a.polys[i] != b.polys[i]) {
      c.reason = "characteristic polynomials differ at class " + std::to_string(i);
      c.class_index = i;
      c.lhs = a.polys[i];
      c.rhs = b.polys[i];
      return c;
    }
  }
  c.equal = true;
  return c;
}

/// A basis of Hom_G(a, b), each map a dim(b) x dim(a) matrix.
struct HomSpace {
  std::vector<Matrix> basis;
  std::string method;
  std::size_t dim() const { return basis.size(); }
};

namespace detail {

/// Solutions of v_{y} = lambda v_{x} constraints, by union-find with ratios.
class RatioSystem {
 public:
  RatioSystem(const Field& F, std::size_t n) : F_(&F), parent_(n), factor_(n, F.one()), dead_(n, 0)
  {
    for (std::size_t i = 0; i < n; ++i)
      parent_[i] = i;
  }

  /// v_y = lambda v_x; lambda == 0 forces v_y = 0.
  void relate(std::size_t x, std::size_t y, Elem lambda)
  {
    const Field& F = *F_;
    auto [rx, fx] = find(x);
    auto [ry, fy] = find(y);
    if (lambda == 0) {
      dead_[ry] = 1;
      return;
    }
    // fy v_ry = lambda fx v_rx
    if (rx == ry) {
      if (fy != F.mul(lambda, fx))
        dead_[rx] = 1;
      return;
    }
    parent_[ry] = rx;
    factor_[ry] = F.div(F.mul(lambda, fx), fy);
    if (dead_[ry])
      dead_[rx] = 1;
  }

  std::vector<std::vector<Elem>> basis()
  {
    const std::size_t n = parent_.size();
    std::unordered_map<std::size_t, std::size_t> slot;
    std::vector<std::vector<Elem>> out;
    for (std::size_t i = 0; i < n; ++i) {
      auto [r, f] = find(i);
      if (dead_[r])
        continue;
      auto it = slot.find(r);
      if (it == slot.end()) {
        it = slot.emplace(r, out.size()).first;
        out.emplace_back(n, 0);
      }
      out[it->second][i] = f;
    }
    return out;
  }

 private:
  std::pair<std::size_t, Elem> find(std::size_t x)
  {
    const Field& F = *F_;
    std::vector<std::size_t> path;
    while (parent_[x] != x) {
      path.push_back(x);
      x = parent_[x];
    }
    // compress: factor relative to root
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      const std::size_t node = *it;
      const std::size_t par = parent_[node];
      if (par != x) {
        factor_[node] = F.mul(factor_[node], factor_[par]);
        parent_[node] = x;
      }
    }
    return {x, path.empty() ? F.one() : factor_[path.front()]};
  }

  const Field* F_;
  std::vector<std::size_t> parent_;
  std::vector<Elem> factor_;
  std::vector<char> dead_;
};

/// {v : rho_b(h) v = psi_h v for every (h, psi_h)}
inline std::vector<std::vector<Elem>> eigen_solutions(const Rep& b, const std::vector<std::pair<Mat2, Elem>>& conditions)
{
  const Field& F = b.impl->field();
  const std::size_t n = b.dim();
  if (b.monomial()) {
    RatioSystem sys(F, n);
    for (const auto& [h, psi] : conditions) {
      const auto m = b.impl->monomial_action(h);
      // (rho v)_{perm j} = s_j v_j = psi v_{perm j}
      const Elem inv = F.inv(psi);
      for (std::size_t j = 0; j < n; ++j)
        sys.relate(j, m.perm[j], F.mul(m.scalar[j], inv));
    }
    return sys.basis();
  }
  NullspaceSolver solver(F, n);
  for (const auto& [h, psi] : conditions) {
    Matrix A = b.impl->matrix(h);
    for (std::size_t i = 0; i < n; ++i)
      A(i, i) = F.sub(A(i, i), psi);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Elem> row(A.data.begin() + static_cast<std::ptrdiff_t>(i * n),
                            A.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
      solver.add_dense(std::move(row));
    }
  }
  return solver.basis();
}

/// Frobenius reciprocity: on each orbit of basis lines of a monomial
/// representation a, maps out of a are determined by the image v of the base
/// vector, which must be an eigenvector for the line stabilizer.
inline void hom_from_monomial(const Rep& a, const Rep& b, std::size_t col_offset, std::size_t total_cols,
                              std::vector<Matrix>& out)
{
  const FieldTower& t = a.impl->tower();
  const Field& F = a.impl->field();
  const std::size_t n = a.dim();
  const auto gens = subgroup_generators(t, a.group);
  std::vector<MonomialAction> gen_actions;
  for (const auto& g : gens)
    gen_actions.push_back(a.impl->monomial_action(g));

  std::vector<char> seen(n, 0);
  for (std::size_t j0 = 0; j0 < n; ++j0) {
    if (seen[j0])
      continue;
    // transporters t_j with t_j e_{j0} = c_j e_j
    std::vector<std::size_t> orbit{j0};
    std::unordered_map<std::size_t, std::pair<Mat2, Elem>> transport;
    transport.emplace(j0, std::make_pair(identity(t, a.group.level), F.one()));
    seen[j0] = 1;
    std::vector<Mat2> schreier;
    std::unordered_map<std::uint64_t, char> schreier_keys;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      const std::size_t j = orbit[i];
      const auto [tj, cj] = transport.at(j);
      for (std::size_t k = 0; k < gens.size(); ++k) {
        const std::size_t y = gen_actions[k].perm[j];
        const Mat2 st = lift(t, mul(t, gens[k], tj), a.group.level);
        if (!seen[y]) {
          seen[y] = 1;
          orbit.push_back(y);
          transport.emplace(y, std::make_pair(st, F.mul(cj, gen_actions[k].scalar[j])));
        } else {
          const Mat2 h = lift(t, mul(t, inverse(t, transport.at(y).first), st), a.group.level);
          if (!is_identity(t, h) && schreier_keys.emplace(key(t, h), 1).second)
            schreier.push_back(h);
        }
      }
    }
    const auto stab_gens = generating_set(t, schreier, a.group.level);
    std::vector<std::pair<Mat2, Elem>> conditions;
    for (const auto& h : stab_gens) {
      const auto m = a.impl->monomial_action(h);
      if (m.perm[j0] != j0)
        throw std::logic_error("Schreier generator does not fix the base line");
      conditions.emplace_back(h, m.scalar[j0]);
    }
    const auto sols = eigen_solutions(b, conditions);
    for (const auto& v : sols) {
      Matrix M(b.dim(), total_cols);
      for (const std::size_t j : orbit) {
        const auto& [tj, cj] = transport.at(j);
        const auto col = apply(b, tj, v);
        const Elem ci = F.inv(cj);
        for (std::size_t i = 0; i < col.size(); ++i)
          M(i, col_offset + j) = F.mul(ci, col[i]);
      }
      out.push_back(std::move(M));
    }
  }
}

inline void hom_dense(const Rep& a, const Rep& b, std::size_t col_offset, std::size_t total_cols,
                      std::vector<Matrix>& out)
{
  const FieldTower& t = a.impl->tower();
  const Field& F = a.impl->field();
  const std::size_t n = a.dim(), m = b.dim();
  NullspaceSolver solver(F, n * m);
  for (const auto& g : subgroup_generators(t, a.group)) {
    const Matrix A = a.impl->matrix(g), B = b.impl->matrix(g);
    // (M A - B M)_{ij} = sum_k M_{ik} A_{kj} - sum_k B_{ik} M_{kj}
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::pair<std::size_t, Elem>> terms;
        for (std::size_t k = 0; k < n; ++k)
          if (A(k, j) != 0)
            terms.emplace_back(i * n + k, A(k, j));
        for (std::size_t k = 0; k < m; ++k)
          if (B(i, k) != 0)
            terms.emplace_back(k * n + j, F.neg(B(i, k)));
        solver.add(terms);
      }
  }
  for (const auto& v : solver.basis()) {
    Matrix M(m, total_cols);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        M(i, col_offset + j) = v[i * n + j];
    out.push_back(std::move(M));
  }
}

inline void hom_into(const Rep& a, const Rep& b, std::size_t col_offset, std::size_t total_cols,
                     std::vector<Matrix>& out, std::string& method)
{
  const FieldTower& t = a.impl->tower();
  if (auto sum = std::dynamic_pointer_cast<const SumRep>(a.impl)) {
    std::size_t off = col_offset;
    for (const auto& part : sum->parts()) {
      const Rep pa{part.rep, a.group, a.name};
      for (std::uint64_t c = 0; c < part.mult; ++c) {
        hom_into(pa, b, off, total_cols, out, method);
        off += part.rep->dim();
      }
    }
    return;
  }
  if (a.monomial() && subgroup_order(t, a.group) <= Budgets{}.enumeration) {
    if (method.empty())
      method = "frobenius";
    hom_from_monomial(a, b, col_offset, total_cols, out);
    return;
  }
  method = "dense";
  hom_dense(a, b, col_offset, total_cols, out);
}

} // namespace detail

/// Hom_G(a, b) for representations of the same group.
inline HomSpace hom_basis(const Rep& a, const Rep& b, std::uint64_t budget = Budgets{}.hom_unknowns)
{
  if (!same_group(a.group, b.group))
    throw InvalidParameters("Hom between representations of different groups");
  const std::uint64_t unknowns = static_cast<std::uint64_t>(a.dim()) * b.dim();
  if (unknowns > budget)
    throw BudgetExceeded("Hom space " + a.name + " -> " + b.name, unknowns, budget);
  HomSpace hs;
  detail::hom_into(a, b, 0, a.dim(), hs.basis, hs.method);
  if (hs.method.empty())
    hs.method = "frobenius";
  return hs;
}

inline std::size_t hom_dim(const Rep& a, const Rep& b, std::uint64_t budget = Budgets{}.hom_unknowns)
{
  return hom_basis(a, b, budget).dim();
}

enum class IsoVerdict { Iso, NotIso, Inconclusive, Skipped };

inline const char* verdict_name(IsoVerdict v)
{
  switch (v) {
  case IsoVerdict::Iso: return "ISO";
  case IsoVerdict::NotIso: return "NOT-ISO";
  case IsoVerdict::Inconclusive: return "INCONCLUSIVE";
  case IsoVerdict::Skipped: return "SKIPPED";
  }
  return "?";
}

struct IsoResult {
  IsoVerdict verdict = IsoVerdict::Inconclusive;
  std::string reason;
  std::size_t hom_dim = 0;
  std::size_t trials_used = 0;
};

/// Isomorphism test: dimension and fingerprint mismatches prove
/// non-isomorphism; otherwise random elements of a Hom space are tested for
/// invertibility. Failure to find one is reported as inconclusive.
inline IsoResult iso_probable(const Rep& a, const Rep& b, const std::vector<Mat2>& class_reps, int trials,
                              std::uint64_t seed, std::uint64_t budget = Budgets{}.hom_unknowns)
{
  IsoResult res;
  if (a.dim() != b.dim()) {
    res.verdict = IsoVerdict::NotIso;
    res.reason = "dimensions differ";
    return res;
  }
  const auto cmp = compare(fingerprint(a, class_reps), fingerprint(b, class_reps));
  if (!cmp.equal) {
    res.verdict = IsoVerdict::NotIso;
    res.reason = "fingerprints differ: " + cmp.reason;
    return res;
  }
  const std::uint64_t unknowns = static_cast<std::uint64_t>(a.dim()) * b.dim();
  if (unknowns > budget) {
    res.verdict = IsoVerdict::Skipped;
    res.reason = "Hom solve needs " + std::to_string(unknowns) + " unknowns, budget " + std::to_string(budget);
    return res;
  }
  // a map in either direction is an isomorphism if invertible; solve from the
  // monomial side when there is one
  const HomSpace hs = (!a.monomial() && b.monomial()) ? hom_basis(b, a, budget) : hom_basis(a, b, budget);
  res.hom_dim = hs.dim();
  if (hs.basis.empty()) {
    res.reason = "Hom space is zero";
    return res;
  }
  const Field& F = a.impl->field();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Elem> coef(0, F.size() - 1);
  const std::size_t n = a.dim();
  for (int k = 0; k < trials; ++k) {
    ++res.trials_used;
    Matrix M(n, n);
    for (const auto& B : hs.basis) {
      const Elem c = coef(rng);
      if (c == 0)
        continue;
      for (std::size_t i = 0; i < M.data.size(); ++i)
        if (B.data[i] != 0)
          M.data[i] = F.add(M.data[i], F.mul(c, B.data[i]));
    }
    if (rank(F, M) == n) {
      res.verdict = IsoVerdict::Iso;
      res.reason = "invertible intertwiner found";
      return res;
    }
  }
  res.reason = "no invertible element among sampled intertwiners";
  return res;
}

} // namespace gl2res

#endif // GL2RES_BRAUER_HPP
