#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "gl2res/mackey.hpp"
#include "gl2res/theorems.hpp"

using namespace gl2res;

namespace {

// Coset representatives are pairwise inequivalent: rep_i^{-1} rep_j lies outside H.
void expect_distinct_cosets(const FieldTower& t, const CosetSystem& sys)
{
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (std::size_t j = i + 1; j < sys.size(); ++j)
      ASSERT_FALSE(contains(t, sys.small, mul(t, sys.rep_inverses[i], sys.reps[j]))) << i << " " << j;
}

} // namespace

TEST(Cosets, CountsMatchTheIndex)
{
  const auto t = FieldTower::build(3, 2);
  const auto b = coset_reps(t, borel(Level::Q));
  const auto tt = coset_reps(t, aniso_torus(Level::Q));
  EXPECT_EQ(b.size(), 10u);
  EXPECT_EQ(tt.size(), 72u);
  EXPECT_EQ(b.size() * subgroup_order(t, borel(Level::Q)), gl2_order(9));
  EXPECT_EQ(tt.size() * subgroup_order(t, aniso_torus(Level::Q)), gl2_order(9));
}

TEST(Cosets, RepresentativesArePairwiseInequivalent)
{
  for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 2}, {5, 2}, {3, 3}}) {
    const auto t = FieldTower::build(p, f);
    expect_distinct_cosets(t, coset_reps(t, borel(Level::Q)));
    if (t.q() <= 9)
      expect_distinct_cosets(t, coset_reps(t, aniso_torus(Level::Q)));
  }
}

TEST(Cosets, RepresentativeMapsBaseToItsPoint)
{
  const auto t = FieldTower::build(3, 3);
  for (auto spec : {borel(Level::Q), aniso_torus(Level::Q)}) {
    const auto sys = coset_reps(t, spec);
    for (std::size_t i = 0; i < sys.size(); ++i)
      ASSERT_TRUE(equal(t, act(t, sys.reps[i], sys.base), sys.points[i]));
  }
}

TEST(Cosets, FactorizationCoversTheWholeGroup)
{
  const auto t = FieldTower::build(3, 2);
  const auto G = enumerate(t, full(Level::Q));
  for (auto spec : {borel(Level::Q), aniso_torus(Level::Q)}) {
    const auto sys = coset_reps(t, spec);
    std::vector<std::size_t> hits(sys.size(), 0);
    for (const auto& g : G) {
      const auto fz = factor(t, sys, g);
      ASSERT_TRUE(equal(t, mul(t, fz.rep, fz.h), g));
      ASSERT_TRUE(contains(t, spec, fz.h));
      ++hits[fz.index];
    }
    for (auto h : hits)
      EXPECT_EQ(h, subgroup_order(t, spec));
  }
}

TEST(Cosets, OnlyBorelAndTorusAreSupported)
{
  const auto t = FieldTower::build(3, 2);
  EXPECT_THROW(coset_reps(t, split_torus(Level::Q)), InvalidParameters);
  EXPECT_THROW(coset_reps(t, borel(Level::P)), InvalidParameters);
}

TEST(DoubleCosets, GammaCounts)
{
  struct Case {
    int p, f;
    std::size_t borel, torus;
  };
  for (const auto& c : {Case{3, 2, 2, 3}, Case{3, 3, 2, 0}, Case{5, 2, 2, 5}}) {
    const auto t = FieldTower::build(c.p, c.f);
    const auto gp = enumerate(t, full(Level::P));
    EXPECT_EQ(double_coset_reps(t, borel(Level::Q), gp).gammas.size(), c.borel) << c.p << "," << c.f;
    if (c.torus) {
      EXPECT_EQ(double_coset_reps(t, aniso_torus(Level::Q), gp).gammas.size(), c.torus) << c.p << "," << c.f;
    }
  }
}

TEST(DoubleCosets, CountsAgreeWithClosedForms)
{
  for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 2}, {3, 3}, {5, 2}}) {
    const auto t = FieldTower::build(p, f);
    const auto gp = enumerate(t, full(Level::P));
    const auto nb = static_cast<std::int64_t>(double_coset_reps(t, borel(Level::Q), gp).gammas.size());
    EXPECT_EQ(nb, f % 2 ? 1 + counts::I1(p, f).value() : 2 + counts::I2(p, f).value());
    const auto nt = static_cast<std::int64_t>(double_coset_reps(t, aniso_torus(Level::Q), gp).gammas.size());
    EXPECT_EQ(nt, f % 2 ? 1 + counts::Jprime(p, f).value() : counts::J(p, f).value());
  }
}

TEST(DoubleCosets, ConjugatedIntersections)
{
  const auto t = FieldTower::build(3, 2);
  const auto gp = enumerate(t, full(Level::P));
  const auto b0 = conjugated_intersection(t, g_x(t, 0), borel(Level::Q), gp);
  EXPECT_EQ(b0.classified.kind, SubgroupKind::Borel);
  EXPECT_EQ(b0.elements.size(), 12u);
  const auto beta = conjugated_intersection(t, g_eta(t), borel(Level::Q), gp);
  EXPECT_EQ(beta.classified.kind, SubgroupKind::AnisoTorus);
  EXPECT_EQ(beta.elements.size(), 8u);
  // intersections equal point stabilizers
  const auto dc = double_coset_reps(t, borel(Level::Q), gp);
  for (const auto& g : dc.gammas)
    EXPECT_TRUE(g.equals_stabilizer);
}

TEST(DoubleCosets, TwistByGEtaIsOmega2OnTp)
{
  const auto t = FieldTower::build(3, 2);
  const auto gp = enumerate(t, full(Level::P));
  const auto inter = conjugated_intersection(t, g_eta(t), borel(Level::Q), gp);
  for (std::int64_t r : {0, 1, 3, 7}) {
    const auto tw = twist_character(t, chi_r(r, Level::Q), g_eta(t), inter);
    for (const auto& h : inter.elements)
      ASSERT_EQ(eval_character(t, tw, h), eval_character(t, omega_p(r), h)) << r;
  }
}

TEST(DoubleCosets, TwistByIdentityIsRestriction)
{
  const auto t = FieldTower::build(3, 2);
  const auto gp = enumerate(t, full(Level::P));
  const auto e = identity(t, Level::Q);
  const auto inter = conjugated_intersection(t, e, borel(Level::Q), gp);
  const auto chi = chi_rs(2, 5, Level::Q);
  const auto tw = twist_character(t, chi, e, inter);
  for (const auto& h : inter.elements)
    EXPECT_EQ(eval_character(t, tw, h), eval_character(t, chi, h));
}

TEST(DoubleCosets, BruteForcePartitionMatchesOrbits)
{
  const auto t = FieldTower::build(3, 2);
  const auto gp = enumerate(t, full(Level::P));
  for (auto spec : {borel(Level::Q), aniso_torus(Level::Q)}) {
    const auto dc = double_coset_reps(t, spec, gp);
    const auto bf = brute_force_double_cosets(t, spec, gp);
    ASSERT_EQ(bf.sizes.size(), dc.gammas.size());
    std::uint64_t total = 0;
    for (auto s : bf.sizes)
      total += s;
    EXPECT_EQ(total, gl2_order(9));
    std::set<std::int32_t> labels;
    for (const auto& g : dc.gammas) {
      const auto lab = bf.label_of(t, g.gamma);
      EXPECT_TRUE(labels.insert(lab).second);
      EXPECT_EQ(bf.sizes[static_cast<std::size_t>(lab)],
                gp.size() * subgroup_order(t, spec) / g.intersection.elements.size());
    }
  }
  const auto bf = brute_force_double_cosets(t, borel(Level::Q), gp);
  EXPECT_EQ(bf.label_of(t, w_matrix(t)), bf.label_of(t, identity(t, Level::Q)));
}

TEST(DoubleCosets, BruteForceRespectsBudget)
{
  const auto t = FieldTower::build(3, 2);
  const auto gp = enumerate(t, full(Level::P));
  EXPECT_THROW(brute_force_double_cosets(t, borel(Level::Q), gp, 100), BudgetExceeded);
}
