#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "gl2res/brauer.hpp"
#include "gl2res/theorems.hpp"

using namespace gl2res;

namespace {

// det(x I - A) evaluated at x by Gaussian elimination.
Elem det_shifted(const Field& F, const Matrix& A, Elem x)
{
  Matrix M = A;
  for (std::size_t i = 0; i < M.data.size(); ++i)
    M.data[i] = F.neg(M.data[i]);
  for (std::size_t i = 0; i < M.rows; ++i)
    M(i, i) = F.add(M(i, i), x);
  return determinant(F, M);
}

Matrix random_matrix(const Field& F, std::size_t n, std::mt19937_64& rng)
{
  std::uniform_int_distribution<Elem> pick(0, F.size() - 1);
  Matrix M(n, n);
  for (auto& v : M.data)
    v = pick(rng);
  return M;
}

bool intertwines(const Field& F, const Rep& a, const Rep& b, const Matrix& M, const std::vector<Mat2>& gens)
{
  for (const auto& g : gens)
    if (!(mul(F, M, a.impl->matrix(g)) == mul(F, b.impl->matrix(g), M)))
      return false;
  return true;
}

} // namespace

TEST(LinearAlgebra, CharpolyMatchesDeterminantAtEveryPoint)
{
  const auto t = FieldTower::build(3, 1);
  const Field& F = t.field(Level::Q2);
  std::mt19937_64 rng(3);
  for (std::size_t n : {1u, 2u, 4u, 6u}) {
    const Matrix A = random_matrix(F, n, rng);
    const FPoly cp = charpoly(F, A);
    ASSERT_EQ(cp.size(), n + 1);
    for (Elem x = 0; x < F.size(); ++x)
      ASSERT_EQ(poly_eval(F, cp, x), det_shifted(F, A, x));
  }
}

TEST(LinearAlgebra, NullspaceSolverFindsTheKernel)
{
  const auto t = FieldTower::build(5, 1);
  const Field& F = t.field(Level::Q2);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 7, rows = 1 + trial % 6;
    Matrix A(rows, n);
    std::uniform_int_distribution<Elem> pick(0, F.size() - 1);
    for (auto& v : A.data)
      v = pick(rng);
    NullspaceSolver s(F, n);
    for (std::size_t i = 0; i < rows; ++i)
      s.add_dense(std::vector<Elem>(A.data.begin() + static_cast<std::ptrdiff_t>(i * n),
                                    A.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
    const auto basis = s.basis();
    EXPECT_EQ(basis.size(), n - rank(F, A));
    for (const auto& v : basis)
      for (auto x : mul(F, A, v))
        ASSERT_EQ(x, 0u);
    // basis vectors are independent
    Matrix B(basis.size(), n);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < n; ++j)
        B(i, j) = basis[i][j];
    EXPECT_EQ(rank(F, B), basis.size());
  }
}

TEST(Fingerprints, MonomialAndDenseAgree)
{
  const auto t = FieldTower::build(3, 2);
  const auto cls = p_regular_class_reps(t);
  const Rep st = steinberg_model(t);
  for (const Rep& r : {induce(t, borel(Level::P), chi_r(1, Level::P), full(Level::P)),
                       induce(t, aniso_torus(Level::P), omega_p(2), full(Level::P)),
                       restrict(t, induce(t, borel(Level::Q), chi_rs(2, 3, Level::Q), full(Level::Q)), full(Level::P)),
                       tensor(t, induce(t, borel(Level::P), chi_r(0, Level::P), full(Level::P)), st)}) {
    const auto a = fingerprint(r, cls), b = fingerprint_dense(r, cls);
    EXPECT_TRUE(compare(a, b).equal) << r.name;
  }
}

TEST(Fingerprints, DirectSumMultiplies)
{
  const auto t = FieldTower::build(3, 2);
  const Field& F = t.field(Level::Q2);
  const auto cls = p_regular_class_reps(t);
  const Rep a = induce(t, aniso_torus(Level::P), omega_p(1), full(Level::P));
  const Rep b = steinberg_model(t);
  const Rep s = direct_sum(t, full(Level::P), {{a, 2}, {b, 1}});
  const auto fa = fingerprint(a, cls), fb = fingerprint(b, cls);
  const auto want = fingerprint_product(F, fingerprint_product(F, fa, fa), fb);
  EXPECT_TRUE(compare(fingerprint(s, cls), want).equal);
  EXPECT_TRUE(compare(fingerprint_dense(s, cls), want).equal);
}

TEST(Fingerprints, CompareReportsFirstDifference)
{
  const auto t = FieldTower::build(3, 1);
  const auto cls = p_regular_class_reps(t);
  const Rep a = induce(t, borel(Level::P), chi_r(0, Level::P), full(Level::P));
  const Rep b = induce(t, borel(Level::P), chi_r(1, Level::P), full(Level::P));
  const auto c = compare(fingerprint(a, cls), fingerprint(b, cls));
  EXPECT_FALSE(c.equal);
  ASSERT_TRUE(c.class_index.has_value());
  EXPECT_NE(c.lhs, c.rhs);
  EXPECT_FALSE(compare(fingerprint(a, cls), fingerprint(steinberg_model(t), cls)).equal);
}

TEST(HomSpaces, TrivialIntoPermutationIsOneDimensional)
{
  const auto t = FieldTower::build(3, 2);
  const Rep triv = det_character(t, Level::P, 0);
  const Rep perm = induce(t, borel(Level::P), chi_r(0, Level::P), full(Level::P));
  EXPECT_EQ(hom_dim(triv, perm), 1u);
  EXPECT_EQ(hom_dim(perm, triv), 1u);
  const Rep perm_q = restrict(t, induce(t, borel(Level::Q), chi_r(0, Level::Q), full(Level::Q)), full(Level::P));
  // one invariant per G_p-orbit on P^1(F_9)
  EXPECT_EQ(hom_dim(triv, perm_q), 2u);
}

TEST(HomSpaces, MonomialPathAgreesWithDenseSolve)
{
  const auto t = FieldTower::build(3, 2);
  const Field& F = t.field(Level::Q2);
  const auto gens = generators(t, Level::P);
  const Rep st = steinberg_model(t);
  const std::vector<Rep> reps{induce(t, borel(Level::P), chi_r(1, Level::P), full(Level::P)),
                              induce(t, aniso_torus(Level::P), omega_p(4), full(Level::P)),
                              induce(t, split_torus(Level::P), split_character(1, 1), full(Level::P)), st};
  for (const auto& a : reps)
    for (const auto& b : reps) {
      std::vector<Matrix> dense;
      detail::hom_dense(a, b, 0, a.dim(), dense);
      const auto hs = hom_basis(a, b);
      ASSERT_EQ(hs.dim(), dense.size()) << a.name << " -> " << b.name;
      for (const auto& M : hs.basis)
        ASSERT_TRUE(intertwines(F, a, b, M, gens));
      Matrix stacked(hs.dim(), a.dim() * b.dim());
      for (std::size_t i = 0; i < hs.dim(); ++i)
        for (std::size_t k = 0; k < hs.basis[i].data.size(); ++k)
          stacked(i, k) = hs.basis[i].data[k];
      EXPECT_EQ(rank(F, stacked), hs.dim());
    }
}

TEST(HomSpaces, RespectsBudget)
{
  const auto t = FieldTower::build(3, 2);
  const Rep a = restrict(t, induce(t, borel(Level::Q), chi_r(0, Level::Q), full(Level::Q)), full(Level::P));
  EXPECT_THROW(hom_basis(a, a, 50), BudgetExceeded);
  const Rep big = induce(t, borel(Level::Q), chi_r(0, Level::Q), full(Level::Q));
  EXPECT_THROW(hom_basis(a, big), InvalidParameters);
}

TEST(Isomorphism, Verdicts)
{
  const auto t = FieldTower::build(3, 2);
  const auto cls = p_regular_class_reps(t);
  const Rep st = steinberg_model(t);
  const Rep a = induce(t, borel(Level::P), chi_r(1, Level::P), full(Level::P));
  // omega_2 and omega_2^p are conjugate under the normalizer of T_p
  const Rep u = induce(t, aniso_torus(Level::P), omega_p(1), full(Level::P));
  const Rep v = induce(t, aniso_torus(Level::P), omega_p(3), full(Level::P));
  const auto iso = iso_probable(u, v, cls, 8, 1);
  EXPECT_EQ(iso.verdict, IsoVerdict::Iso);
  EXPECT_GE(iso.hom_dim, 1u);
  // same Brauer character, opposite extensions: no invertible intertwiner
  const Rep b = induce(t, borel(Level::P), chi_rs(0, 1, Level::P), full(Level::P));
  EXPECT_EQ(iso_probable(a, b, cls, 8, 1).verdict, IsoVerdict::Inconclusive);
  EXPECT_EQ(iso_probable(a, st, cls, 8, 1).verdict, IsoVerdict::NotIso);
  const Rep c = induce(t, borel(Level::P), chi_r(0, Level::P), full(Level::P));
  const auto diff = iso_probable(a, c, cls, 8, 1);
  EXPECT_EQ(diff.verdict, IsoVerdict::NotIso);
  const auto skipped = iso_probable(u, v, cls, 8, 1, 10);
  EXPECT_EQ(skipped.verdict, IsoVerdict::Skipped);
}

TEST(Isomorphism, GJAtPThree)
{
  const auto t = FieldTower::build(3, 1);
  const auto cls = p_regular_class_reps(t);
  const Rep st = steinberg_model(t);
  const auto G = full(Level::P);
  for (int i = 0; i <= 1; ++i)
    for (int j = 0; j <= 1; ++j) {
      const Rep lhs = induce(t, split_torus(Level::P), split_character(i, j), G);
      const Rep rhs = tensor(t, induce(t, borel(Level::P), chi_rs(i, j, Level::P), G), st);
      EXPECT_EQ(lhs.dim(), 12u);
      EXPECT_EQ(iso_probable(lhs, rhs, cls, 8, 5).verdict, IsoVerdict::Iso) << i << "," << j;
    }
}
