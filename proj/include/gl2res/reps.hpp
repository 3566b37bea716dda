#ifndef GL2RES_REPS_HPP
#define GL2RES_REPS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gl2res/character.hpp"
#include "gl2res/common.hpp"
#include "gl2res/ffield.hpp"
#include "gl2res/grp.hpp"
#include "gl2res/linalg.hpp"
#include "gl2res/mackey.hpp"

/**
 * @file reps.hpp
 * @brief Representations over F_{q^2}: induced (monomial) representations,
 * generator-defined matrix representations, tensor products, direct sums.
 *
 * A representation object does not own the tower; the tower must outlive it.
 */

namespace gl2res {

/// g e_j = scalar[j] e_{perm[j]}
struct MonomialAction {
  std::vector<std::uint32_t> perm;
  std::vector<Elem> scalar;
};

inline Matrix to_matrix(std::size_t n, const MonomialAction& m)
{
  Matrix out(n, n);
  for (std::size_t j = 0; j < n; ++j)
    out(m.perm[j], j) = m.scalar[j];
  return out;
}

/// Characteristic polynomial of a monomial matrix: one factor x^l - c per cycle.
inline FPoly monomial_charpoly(const Field& F, const MonomialAction& m)
{
  const std::size_t n = m.perm.size();
  std::vector<char> seen(n, 0);
  FPoly out{F.one()};
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s])
      continue;
    std::size_t len = 0;
    Elem prod = F.one();
    std::size_t j = s;
    while (!seen[j]) {
      seen[j] = 1;
      prod = F.mul(prod, m.scalar[j]);
      ++len;
      j = m.perm[j];
    }
    out = poly_mul(F, out, binomial(F, len, prod));
  }
  return out;
}

class RepImpl {
 public:
  explicit RepImpl(const FieldTower& t) : tower_(&t) {}
  virtual ~RepImpl() = default;

  virtual std::size_t dim() const = 0;
  virtual bool monomial() const { return false; }
  virtual MonomialAction monomial_action(const Mat2&) const
  {
    throw std::logic_error("representation is not monomial");
  }
  virtual Matrix matrix(const Mat2& g) const { return to_matrix(dim(), monomial_action(g)); }
  virtual FPoly charpoly_at(const Mat2& g) const
  {
    const Field& F = field();
    if (monomial())
      return monomial_charpoly(F, monomial_action(g));
    return charpoly(F, matrix(g));
  }

  const FieldTower& tower() const { return *tower_; }
  const Field& field() const { return tower_->field(Level::Q2); }

 private:
  const FieldTower* tower_;
};

struct Rep {
  std::shared_ptr<const RepImpl> impl;
  /// The group acting.
  SubgroupSpec group;
  std::string name;

  std::size_t dim() const { return impl->dim(); }
  bool monomial() const { return impl->monomial(); }
};

/// Left cosets t_j H of H in some group.
class CosetSpace {
 public:
  virtual ~CosetSpace() = default;
  virtual std::size_t size() const = 0;
  virtual const Mat2& rep(std::size_t j) const = 0;
  /// (k, h) with g t_j = t_k h.
  virtual std::pair<std::size_t, Mat2> locate(const Mat2& g, std::size_t j) const = 0;
};

/// Cosets of B_q or T_q in G_q through their points.
class PointCosets : public CosetSpace {
 public:
  PointCosets(const FieldTower& t, CosetSystem sys) : t_(&t), sys_(std::move(sys)) {}

  std::size_t size() const override { return sys_.size(); }
  const Mat2& rep(std::size_t j) const override { return sys_.reps[j]; }
  std::pair<std::size_t, Mat2> locate(const Mat2& g, std::size_t j) const override
  {
    const auto f = factor(*t_, sys_, mul(*t_, g, sys_.reps[j]));
    return {f.index, f.h};
  }
  const CosetSystem& system() const { return sys_; }

 private:
  const FieldTower* t_;
  CosetSystem sys_;
};

/// Cosets of an explicit subgroup H in a listed group K.
class ExplicitCosets : public CosetSpace {
 public:
  ExplicitCosets(const FieldTower& t, const std::vector<Mat2>& group, const SubgroupSpec& sub, Level level)
    : t_(&t), sub_(sub), level_(level)
  {
    const auto H = enumerate(t, sub);
    for (const auto& g : group) {
      const std::uint64_t k = key_at(t, g, level);
      if (coset_of_.count(k))
        continue;
      const std::size_t idx = reps_.size();
      reps_.push_back(lift(t, g, level));
      inverses_.push_back(inverse(t, reps_.back()));
      for (const auto& h : H)
        coset_of_.emplace(key_at(t, mul(t, g, h), level), idx);
    }
    if (coset_of_.size() != group.size())
      throw std::logic_error("subgroup is not contained in the listed group");
  }

  std::size_t size() const override { return reps_.size(); }
  const Mat2& rep(std::size_t j) const override { return reps_[j]; }
  std::pair<std::size_t, Mat2> locate(const Mat2& g, std::size_t j) const override
  {
    const Mat2 x = lift(*t_, mul(*t_, g, reps_[j]), level_);
    const std::size_t k = coset_of_.at(key(*t_, x));
    const Mat2 h = mul(*t_, inverses_[k], x);
    if (!contains(*t_, sub_, h))
      throw std::logic_error("coset lookup produced h outside " + sub_.name());
    return {k, h};
  }

 private:
  const FieldTower* t_;
  SubgroupSpec sub_;
  Level level_;
  std::vector<Mat2> reps_;
  std::vector<Mat2> inverses_;
  std::unordered_map<std::uint64_t, std::size_t> coset_of_;
};

/// ind_H^K chi: g e_j = chi(h) e_k where g t_j = t_k h.
class MonomialRep : public RepImpl {
 public:
  MonomialRep(const FieldTower& t, std::shared_ptr<const CosetSpace> cosets, CharacterSpec chi)
    : RepImpl(t), cosets_(std::move(cosets)), chi_(std::move(chi))
  {}

  std::size_t dim() const override { return cosets_->size(); }
  bool monomial() const override { return true; }
  MonomialAction monomial_action(const Mat2& g) const override
  {
    MonomialAction m;
    const std::size_t n = dim();
    m.perm.resize(n);
    m.scalar.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto [k, h] = cosets_->locate(g, j);
      m.perm[j] = static_cast<std::uint32_t>(k);
      m.scalar[j] = eval_character(tower(), chi_, h);
    }
    return m;
  }

  const CosetSpace& cosets() const { return *cosets_; }
  const CharacterSpec& character() const { return chi_; }

 private:
  std::shared_ptr<const CosetSpace> cosets_;
  CharacterSpec chi_;
};

/// A one-dimensional representation g -> chi(g), or g -> det(g)^s.
class CharacterRep : public RepImpl {
 public:
  CharacterRep(const FieldTower& t, CharacterSpec chi) : RepImpl(t), chi_(std::move(chi)) {}
  CharacterRep(const FieldTower& t, std::int64_t det_power) : RepImpl(t), det_power_(det_power), is_det_(true) {}

  std::size_t dim() const override { return 1; }
  bool monomial() const override { return true; }
  MonomialAction monomial_action(const Mat2& g) const override
  {
    Elem v;
    if (is_det_) {
      const Mat2 h = lift(tower(), g, Level::Q2);
      v = field().pow(det(tower(), h), det_power_);
    } else {
      v = eval_character(tower(), chi_, g);
    }
    return {{0}, {v}};
  }

 private:
  CharacterSpec chi_;
  std::int64_t det_power_ = 0;
  bool is_det_ = false;
};

/// A representation of a listed group given by a table of matrices.
class MatrixRep : public RepImpl {
 public:
  /// Extends generator images over the group by breadth-first products; any
  /// element reached twice must receive the same matrix.
  static std::shared_ptr<MatrixRep> from_generators(const FieldTower& t, Level level, const std::vector<Mat2>& gens,
                                                    const std::vector<Matrix>& images,
                                                    std::uint64_t budget = Budgets{}.enumeration)
  {
    if (gens.empty() || gens.size() != images.size())
      throw InvalidParameters("generator images do not match the generators");
    const Field& F = t.field(Level::Q2);
    auto rep = std::shared_ptr<MatrixRep>(new MatrixRep(t, level, images.front().rows));
    const Mat2 e = identity(t, level);
    std::vector<Mat2> queue{e};
    rep->table_.emplace(key(t, e), identity_matrix(F, rep->dim_));
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const Matrix& Mx = rep->table_.at(key(t, queue[i]));
      for (std::size_t k = 0; k < gens.size(); ++k) {
        const Mat2 y = lift(t, mul(t, queue[i], gens[k]), level);
        Matrix My = mul(F, Mx, images[k]);
        const std::uint64_t ky = key(t, y);
        auto it = rep->table_.find(ky);
        if (it == rep->table_.end()) {
          rep->table_.emplace(ky, std::move(My));
          queue.push_back(y);
          if (queue.size() > budget)
            throw BudgetExceeded("matrix representation table", queue.size(), budget);
        } else if (!(it->second == My)) {
          throw std::logic_error("generator images do not define a representation");
        }
      }
    }
    return rep;
  }

  std::size_t dim() const override { return dim_; }
  Matrix matrix(const Mat2& g) const override { return table_.at(key_at(tower(), g, level_)); }
  std::size_t table_size() const { return table_.size(); }

 private:
  MatrixRep(const FieldTower& t, Level level, std::size_t dim) : RepImpl(t), level_(level), dim_(dim) {}

  Level level_;
  std::size_t dim_;
  std::unordered_map<std::uint64_t, Matrix> table_;
};

class TensorRep : public RepImpl {
 public:
  TensorRep(const FieldTower& t, std::shared_ptr<const RepImpl> a, std::shared_ptr<const RepImpl> b)
    : RepImpl(t), a_(std::move(a)), b_(std::move(b))
  {}

  std::size_t dim() const override { return a_->dim() * b_->dim(); }
  bool monomial() const override { return a_->monomial() && b_->monomial(); }
  MonomialAction monomial_action(const Mat2& g) const override
  {
    const auto x = a_->monomial_action(g), y = b_->monomial_action(g);
    const std::size_t nb = b_->dim();
    MonomialAction m;
    m.perm.resize(dim());
    m.scalar.resize(dim());
    for (std::size_t i = 0; i < x.perm.size(); ++i)
      for (std::size_t j = 0; j < nb; ++j) {
        m.perm[i * nb + j] = static_cast<std::uint32_t>(x.perm[i] * nb + y.perm[j]);
        m.scalar[i * nb + j] = field().mul(x.scalar[i], y.scalar[j]);
      }
    return m;
  }
  Matrix matrix(const Mat2& g) const override
  {
    if (monomial())
      return to_matrix(dim(), monomial_action(g));
    return kron(field(), a_->matrix(g), b_->matrix(g));
  }

 private:
  std::shared_ptr<const RepImpl> a_, b_;
};

/// Direct sum with multiplicities; characteristic polynomials multiply, so
/// large multiplicities are never materialized for fingerprints.
class SumRep : public RepImpl {
 public:
  struct Part {
    std::shared_ptr<const RepImpl> rep;
    std::uint64_t mult = 1;
  };

  SumRep(const FieldTower& t, std::vector<Part> parts) : RepImpl(t), parts_(std::move(parts)) {}

  std::size_t dim() const override
  {
    std::size_t n = 0;
    for (const auto& p : parts_)
      n += p.rep->dim() * p.mult;
    return n;
  }
  bool monomial() const override
  {
    for (const auto& p : parts_)
      if (!p.rep->monomial())
        return false;
    return true;
  }
  MonomialAction monomial_action(const Mat2& g) const override
  {
    MonomialAction m;
    std::uint32_t off = 0;
    for (const auto& p : parts_) {
      const auto a = p.rep->monomial_action(g);
      for (std::uint64_t c = 0; c < p.mult; ++c) {
        for (std::size_t j = 0; j < a.perm.size(); ++j) {
          m.perm.push_back(off + a.perm[j]);
          m.scalar.push_back(a.scalar[j]);
        }
        off += static_cast<std::uint32_t>(a.perm.size());
      }
    }
    return m;
  }
  Matrix matrix(const Mat2& g) const override
  {
    std::vector<Matrix> blocks;
    for (const auto& p : parts_) {
      const Matrix b = p.rep->matrix(g);
      for (std::uint64_t c = 0; c < p.mult; ++c)
        blocks.push_back(b);
    }
    return block_diagonal(blocks);
  }
  FPoly charpoly_at(const Mat2& g) const override
  {
    const Field& F = field();
    FPoly out{F.one()};
    for (const auto& p : parts_)
      out = poly_mul(F, out, poly_pow(F, p.rep->charpoly_at(g), p.mult));
    return out;
  }
  const std::vector<Part>& parts() const { return parts_; }

 private:
  std::vector<Part> parts_;
};

/// ind_sub^into chi. Inductions from B_q or T_q to G_q use the point cosets;
/// everything else lists `into`.
inline Rep induce(const FieldTower& t, const SubgroupSpec& sub, const CharacterSpec& chi, const SubgroupSpec& into,
                  std::uint64_t budget = Budgets{}.enumeration)
{
  CharacterSpec c = chi;
  if (c.domain.kind != sub.kind || c.domain.level != sub.level || sub.kind == SubgroupKind::Explicit)
    c = restrict_character(t, chi, sub);
  std::shared_ptr<const CosetSpace> cosets;
  if (into.kind == SubgroupKind::Full && into.level == Level::Q && sub.level == Level::Q &&
      (sub.kind == SubgroupKind::Borel || sub.kind == SubgroupKind::AnisoTorus)) {
    cosets = std::make_shared<PointCosets>(t, coset_reps(t, sub));
  } else {
    if (!is_subgroup_of(t, sub, into, budget))
      throw InvalidParameters(sub.name() + " is not a subgroup of " + into.name());
    const std::uint64_t index = subgroup_order(t, into) / subgroup_order(t, sub);
    if (index > budget)
      throw BudgetExceeded("induced representation dimension", index, budget);
    cosets = std::make_shared<ExplicitCosets>(t, enumerate(t, into, budget), sub, into.level);
  }
  Rep r;
  r.impl = std::make_shared<MonomialRep>(t, std::move(cosets), std::move(c));
  r.group = into;
  r.name = "ind(" + sub.name() + "->" + into.name() + ", " + chi.name() + ")";
  return r;
}

inline Rep character_rep(const FieldTower& t, const CharacterSpec& chi)
{
  return {std::make_shared<CharacterRep>(t, chi), chi.domain, chi.name()};
}

/// g -> det(g)^s on the full group at `level`.
inline Rep det_character(const FieldTower& t, Level level, std::int64_t s)
{
  return {std::make_shared<CharacterRep>(t, s), full(level), "det^" + std::to_string(s)};
}

inline Rep restrict(const FieldTower& t, const Rep& rep, const SubgroupSpec& to)
{
  if (!is_subgroup_of(t, to, rep.group))
    throw InvalidParameters(to.name() + " is not a subgroup of " + rep.group.name());
  return {rep.impl, to, rep.name + " | " + to.name()};
}

inline bool same_group(const SubgroupSpec& a, const SubgroupSpec& b)
{
  return a.kind == b.kind && a.level == b.level && a.elements == b.elements;
}

inline Rep tensor(const FieldTower& t, const Rep& a, const Rep& b)
{
  if (!same_group(a.group, b.group))
    throw InvalidParameters("tensor factors act through different groups");
  return {std::make_shared<TensorRep>(t, a.impl, b.impl), a.group, "(" + a.name + " x " + b.name + ")"};
}

inline Rep direct_sum(const FieldTower& t, const SubgroupSpec& group,
                      const std::vector<std::pair<Rep, std::uint64_t>>& parts)
{
  std::vector<SumRep::Part> ps;
  std::string name;
  for (const auto& [r, m] : parts) {
    if (!same_group(r.group, group))
      throw InvalidParameters("summand " + r.name + " acts through a different group");
    if (m == 0)
      continue;
    ps.push_back({r.impl, m});
    if (!name.empty())
      name += " + ";
    name += (m == 1 ? "" : std::to_string(m) + "*") + r.name;
  }
  return {std::make_shared<SumRep>(t, std::move(ps)), group, name.empty() ? "0" : name};
}

/// Images of the generators on Sym^{p-1} of the standard representation:
/// (g.P)(X,Y) = P(aX + cY, bX + dY) on the basis X^{n-k} Y^k, n = p - 1.
inline Matrix symmetric_power_matrix(const FieldTower& t, const Mat2& g0, int n)
{
  const Field& F = t.field(Level::Q2);
  const Mat2 g = lift(t, g0, Level::Q2);
  // (uX + vY)^m as coefficients of X^{m-i} Y^i
  auto power = [&](Elem u, Elem v, int m) {
    FPoly out{F.one()};
    for (int i = 0; i < m; ++i) {
      FPoly next(out.size() + 1, 0);
      for (std::size_t j = 0; j < out.size(); ++j) {
        next[j] = F.add(next[j], F.mul(out[j], u));
        next[j + 1] = F.add(next[j + 1], F.mul(out[j], v));
      }
      out = std::move(next);
    }
    return out;
  };
  Matrix M(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    const FPoly col = poly_mul(F, power(g.a, g.c, n - k), power(g.b, g.d, k));
    for (int i = 0; i <= n; ++i)
      M(i, k) = col[i];
  }
  return M;
}

/// The p-dimensional model of the reduction of the Steinberg representation.
inline Rep steinberg_model(const FieldTower& t)
{
  const auto gens = generators(t, Level::P);
  std::vector<Matrix> images;
  for (const auto& g : gens)
    images.push_back(symmetric_power_matrix(t, g, t.p() - 1));
  return {MatrixRep::from_generators(t, Level::P, gens, images), full(Level::P), "St"};
}

/// rho(g) v
inline std::vector<Elem> apply(const Rep& rep, const Mat2& g, const std::vector<Elem>& v)
{
  const Field& F = rep.impl->field();
  if (rep.monomial()) {
    const auto m = rep.impl->monomial_action(g);
    std::vector<Elem> out(v.size(), 0);
    for (std::size_t j = 0; j < v.size(); ++j)
      out[m.perm[j]] = F.mul(m.scalar[j], v[j]);
    return out;
  }
  return mul(F, rep.impl->matrix(g), v);
}

} // namespace gl2res

#endif // GL2RES_REPS_HPP
