#include <gtest/gtest.h>

#include <random>
#include <unordered_set>
#include <vector>

#include "gl2res/reps.hpp"
#include "gl2res/theorems.hpp"

using namespace gl2res;

namespace {

Elem trace(const Field& F, const Matrix& M)
{
  Elem s = 0;
  for (std::size_t i = 0; i < M.rows; ++i)
    s = F.add(s, M(i, i));
  return s;
}

void expect_homomorphism(const FieldTower& t, const Rep& rho, const std::vector<Mat2>& G, std::size_t samples)
{
  const Field& F = t.field(Level::Q2);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, G.size() - 1);
  for (std::size_t k = 0; k < samples; ++k) {
    const Mat2& g = G[pick(rng)];
    const Mat2& h = G[pick(rng)];
    ASSERT_EQ(mul(F, rho.impl->matrix(g), rho.impl->matrix(h)), rho.impl->matrix(mul(t, g, h)));
  }
}

// Trace of ind_H^G chi at g: sum of chi(x^{-1} g x) over coset reps x with x^{-1} g x in H.
Elem induced_trace_oracle(const FieldTower& t, const std::vector<Mat2>& G, const SubgroupSpec& H,
                          const CharacterSpec& chi, const Mat2& g, Level level)
{
  const Field& F = t.field(Level::Q2);
  const auto Hs = enumerate(t, H);
  std::unordered_set<std::uint64_t> covered;
  Elem s = 0;
  for (const auto& x : G) {
    if (covered.count(key_at(t, x, level)))
      continue;
    for (const auto& h : Hs)
      covered.insert(key_at(t, mul(t, x, h), level));
    const Mat2 c = conjugate_by(t, g, x);
    if (contains(t, H, c))
      s = F.add(s, eval_character(t, chi, c));
  }
  return s;
}

// Roots of x^2 - tr x + det in F_{p^2}, lifted to F_{q^2}, by search.
std::pair<Elem, Elem> eigenvalues(const FieldTower& t, const Mat2& g0)
{
  const Field& F = t.field(Level::Q2);
  const Field& F2 = t.field(Level::P2);
  const Mat2 g = lift(t, g0, Level::Q2);
  const Elem tr = F.add(g.a, g.d), d = det(t, g);
  for (Elem u = 1; u < F2.size(); ++u) {
    const Elem x = t.embed(u, Level::P2, Level::Q2);
    if (F.add(F.sub(F.mul(x, x), F.mul(tr, x)), d) == 0)
      return {x, F.sub(tr, x)};
  }
  throw std::logic_error("no eigenvalue in F_{p^2}");
}

} // namespace

TEST(Characters, AreMultiplicative)
{
  const auto t = FieldTower::build(3, 2);
  const Field& F = t.field(Level::Q2);
  const auto B = enumerate(t, borel(Level::Q));
  const auto T = enumerate(t, aniso_torus(Level::Q));
  for (const auto& chi : {chi_rs(1, 3, Level::Q), chi_r(5, Level::Q)})
    for (std::size_t i = 0; i < B.size(); i += 11)
      for (std::size_t j = 0; j < B.size(); j += 13)
        ASSERT_EQ(eval_character(t, chi, mul(t, B[i], B[j])),
                  F.mul(eval_character(t, chi, B[i]), eval_character(t, chi, B[j])));
  for (std::int64_t r : {1, 7, 79})
    for (const auto& x : T)
      for (std::size_t j = 0; j < T.size(); j += 3)
        ASSERT_EQ(eval_character(t, omega(r), mul(t, x, T[j])),
                  F.mul(eval_character(t, omega(r), x), eval_character(t, omega(r), T[j])));
  const auto Tp = enumerate(t, aniso_torus(Level::P));
  for (const auto& x : Tp)
    for (const auto& y : Tp)
      ASSERT_EQ(eval_character(t, omega_p(1), mul(t, x, y)),
                F.mul(eval_character(t, omega_p(1), x), eval_character(t, omega_p(1), y)));
}

TEST(Characters, OmegaGeneratesTheCharacterGroup)
{
  const auto t = FieldTower::build(3, 2);
  const auto T = enumerate(t, aniso_torus(Level::Q));
  std::unordered_set<Elem> values;
  for (const auto& x : T)
    values.insert(eval_character(t, omega(1), x));
  EXPECT_EQ(values.size(), T.size());
}

TEST(Characters, RejectsElementsOutsideTheDomain)
{
  const auto t = FieldTower::build(3, 2);
  EXPECT_THROW(eval_character(t, chi_r(1, Level::Q), w_matrix(t)), InvalidParameters);
  EXPECT_THROW(restrict_character(t, chi_r(1, Level::P), borel(Level::Q)), InvalidParameters);
}

TEST(InducedReps, DimensionsAreIndices)
{
  const auto t = FieldTower::build(3, 2);
  EXPECT_EQ(induce(t, borel(Level::Q), chi_r(1, Level::Q), full(Level::Q)).dim(), 10u);
  EXPECT_EQ(induce(t, aniso_torus(Level::Q), omega(3), full(Level::Q)).dim(), 72u);
  EXPECT_EQ(induce(t, aniso_torus(Level::P), omega_p(1), full(Level::P)).dim(), 6u);
  EXPECT_EQ(induce(t, center(Level::P), chi_r(0, Level::P), split_torus(Level::P)).dim(), 2u);
}

TEST(InducedReps, AreHomomorphisms)
{
  const auto t = FieldTower::build(3, 2);
  const auto Gq = enumerate(t, full(Level::Q));
  expect_homomorphism(t, induce(t, borel(Level::Q), chi_rs(2, 1, Level::Q), full(Level::Q)), Gq, 60);
  expect_homomorphism(t, induce(t, aniso_torus(Level::Q), omega(11), full(Level::Q)), Gq, 20);
  const auto Gp = enumerate(t, full(Level::P));
  expect_homomorphism(t, induce(t, aniso_torus(Level::P), omega_p(1), full(Level::P)), Gp, 100);
  expect_homomorphism(t, induce(t, split_torus(Level::P), split_character(1, 0), full(Level::P)), Gp, 100);
}

TEST(InducedReps, TraceMatchesCosetOracle)
{
  const auto t = FieldTower::build(3, 2);
  const Field& F = t.field(Level::Q2);
  const auto Gp = enumerate(t, full(Level::P));
  for (const auto& [H, chi] : std::vector<std::pair<SubgroupSpec, CharacterSpec>>{
         {aniso_torus(Level::P), omega_p(1)}, {borel(Level::P), chi_rs(1, 0, Level::P)},
         {split_torus(Level::P), split_character(0, 1)}}) {
    const Rep rho = induce(t, H, chi, full(Level::P));
    for (const auto& g : Gp)
      ASSERT_EQ(trace(F, rho.impl->matrix(g)), induced_trace_oracle(t, Gp, H, chi, g, Level::P)) << H.name();
  }
  const auto Gq = enumerate(t, full(Level::Q));
  const auto chi = chi_rs(3, 1, Level::Q);
  const Rep rho = induce(t, borel(Level::Q), chi, full(Level::Q));
  for (std::size_t i = 0; i < Gq.size(); i += 97)
    ASSERT_EQ(trace(F, rho.impl->matrix(Gq[i])), induced_trace_oracle(t, Gq, borel(Level::Q), chi, Gq[i], Level::Q));
}

TEST(InducedReps, ApplyAgreesWithMatrix)
{
  const auto t = FieldTower::build(3, 2);
  const Field& F = t.field(Level::Q2);
  const Rep rho = induce(t, borel(Level::Q), chi_r(1, Level::Q), full(Level::Q));
  std::vector<Elem> v(rho.dim());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = static_cast<Elem>((i * 7 + 3) % F.size());
  const Mat2 g = enumerate(t, full(Level::Q))[1234];
  EXPECT_EQ(apply(rho, g, v), mul(F, rho.impl->matrix(g), v));
}

TEST(Steinberg, IsAHomomorphismOfDimensionP)
{
  for (int p : {3, 5}) {
    const auto t = FieldTower::build(p, 1);
    const Rep st = steinberg_model(t);
    EXPECT_EQ(st.dim(), static_cast<std::size_t>(p));
    const auto G = enumerate(t, full(Level::P));
    expect_homomorphism(t, st, G, 200);
    for (std::size_t i = 0; i < G.size(); i += 5)
      ASSERT_EQ(st.impl->matrix(G[i]), symmetric_power_matrix(t, G[i], p - 1));
  }
}

TEST(Steinberg, CharpolyMatchesEigenvalueOracle)
{
  for (int p : {3, 5}) {
    const auto t = FieldTower::build(p, 2);
    const Field& F = t.field(Level::Q2);
    const Rep st = steinberg_model(t);
    for (const auto& g : enumerate(t, full(Level::P))) {
      const auto [l, m] = eigenvalues(t, g);
      FPoly want{F.one()};
      for (int k = 0; k <= p - 1; ++k)
        want = poly_mul(F, want, FPoly{F.neg(F.mul(F.pow(l, p - 1 - k), F.pow(m, k))), F.one()});
      ASSERT_EQ(st.impl->charpoly_at(g), want);
    }
  }
}

TEST(MatrixReps, InconsistentGeneratorImagesAreRejected)
{
  const auto t = FieldTower::build(3, 1);
  const Field& F = t.field(Level::Q2);
  const auto gens = generators(t, Level::P);
  Matrix m(1, 1);
  m(0, 0) = F.primitive();
  EXPECT_THROW(MatrixRep::from_generators(t, Level::P, gens, {m, m, m}), std::logic_error);
  EXPECT_THROW(MatrixRep::from_generators(t, Level::P, gens, {m}), InvalidParameters);
}

TEST(Combinations, TensorAndSumDimensions)
{
  const auto t = FieldTower::build(3, 2);
  const Rep a = induce(t, borel(Level::P), chi_r(1, Level::P), full(Level::P));
  const Rep st = steinberg_model(t);
  EXPECT_EQ(tensor(t, a, st).dim(), 12u);
  EXPECT_EQ(direct_sum(t, full(Level::P), {{a, 3}, {st, 2}}).dim(), 18u);
  EXPECT_EQ(direct_sum(t, full(Level::P), {{a, 0}}).dim(), 0u);
  const Rep r = induce(t, borel(Level::Q), chi_r(1, Level::Q), full(Level::Q));
  EXPECT_THROW(tensor(t, a, r), InvalidParameters);
  EXPECT_THROW(direct_sum(t, full(Level::P), {{r, 1}}), InvalidParameters);
  EXPECT_EQ(restrict(t, r, full(Level::P)).dim(), 10u);
  EXPECT_THROW(restrict(t, a, full(Level::Q)), InvalidParameters);
}

TEST(Combinations, TensorMatrixIsKronecker)
{
  const auto t = FieldTower::build(3, 1);
  const Field& F = t.field(Level::Q2);
  const Rep a = induce(t, borel(Level::P), chi_r(1, Level::P), full(Level::P));
  const Rep st = steinberg_model(t);
  const Rep ts = tensor(t, a, st);
  for (const auto& g : enumerate(t, full(Level::P)))
    ASSERT_EQ(ts.impl->matrix(g), kron(F, a.impl->matrix(g), st.impl->matrix(g)));
}

TEST(Theorems, SidesHaveMatchingDimensions)
{
  const auto t = FieldTower::build(3, 2);
  const Rep st = steinberg_model(t);
  for (int part : {1, 2}) {
    const auto s1 = principal_series_sides(t, 1, part, st);
    EXPECT_EQ(s1.lhs.dim(), 10u);
    EXPECT_EQ(s1.rhs.dim(), 10u);
    const auto s2 = torus_sides(t, 8, part, st);
    EXPECT_EQ(s2.lhs.dim(), 72u);
    EXPECT_EQ(s2.rhs.dim(), 72u);
  }
  EXPECT_THROW(principal_series_sides(t, 8, 1, st), InvalidParameters);
  EXPECT_THROW(torus_sides(t, 80, 1, st), InvalidParameters);
}

TEST(Theorems, ClosedFormsMatchSmallCases)
{
  EXPECT_EQ(counts::I1(3, 3).value(), 1);
  EXPECT_EQ(counts::I2(3, 4).value(), 3);
  EXPECT_EQ(counts::I2(3, 2).value(), 0);
  EXPECT_EQ(counts::J(3, 2).value(), 3);
  EXPECT_EQ(counts::Jprime(3, 3).value(), 29);
  EXPECT_EQ(counts::I1(3, 1).value(), 0);
  EXPECT_EQ(counts::Jprime(3, 1).value(), 0);
  EXPECT_THROW(counts::I2(3, 1), InvalidParameters);
}
