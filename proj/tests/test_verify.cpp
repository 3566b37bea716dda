#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "gl2res/verify.hpp"

using namespace gl2res;

namespace {

std::multiset<std::size_t> orbit_sizes(const json& decomposition)
{
  std::multiset<std::size_t> s;
  for (const auto& o : decomposition.at("orbits"))
    s.insert(o.at("size").get<std::size_t>());
  return s;
}

} // namespace

TEST(Checks, P1AtThreeThree)
{
  const auto t = FieldTower::build(3, 3);
  const auto rep = Verifier(t).check_P1();
  ASSERT_TRUE(rep.passed()) << rep.reason;
  EXPECT_EQ(rep.details.at("I1").get<int>(), 1);
  EXPECT_EQ(orbit_sizes(rep.details.at("decomposition")), (std::multiset<std::size_t>{4, 24}));
}

TEST(Checks, P1AtThreeFour)
{
  const auto t = FieldTower::build(3, 4);
  const auto rep = Verifier(t).check_P1();
  ASSERT_TRUE(rep.passed()) << rep.reason;
  EXPECT_EQ(rep.details.at("I2").get<int>(), 3);
  EXPECT_EQ(orbit_sizes(rep.details.at("decomposition")), (std::multiset<std::size_t>{4, 6, 24, 24, 24}));
}

TEST(Checks, P1AtFiveTwo)
{
  const auto t = FieldTower::build(5, 2);
  const auto rep = Verifier(t).check_P1();
  ASSERT_TRUE(rep.passed()) << rep.reason;
  EXPECT_EQ(rep.details.at("I2").get<int>(), 0);
  EXPECT_EQ(orbit_sizes(rep.details.at("decomposition")), (std::multiset<std::size_t>{6, 20}));
}

TEST(Checks, P2AndR6)
{
  for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 2}, {3, 3}, {5, 2}}) {
    const auto t = FieldTower::build(p, f);
    const Verifier v(t);
    const auto p2 = v.check_P2();
    EXPECT_TRUE(p2.passed()) << p << "," << f << " " << p2.reason;
    const auto r6 = v.check_R6();
    EXPECT_TRUE(r6.passed()) << r6.reason;
    EXPECT_EQ(r6.details.at("T_p_in_T_q").get<bool>(), f % 2 == 1);
  }
  const auto t = FieldTower::build(3, 2);
  EXPECT_EQ(Verifier(t).check_P2().details.at("J").get<int>(), 3);
}

TEST(Checks, StructuralChecksPass)
{
  const auto t = FieldTower::build(3, 2);
  const Verifier v(t);
  for (const auto& rep : {v.check_L1(), v.check_L2(), v.check_L3(), v.check_L4()})
    EXPECT_TRUE(rep.passed()) << rep.id << ": " << rep.reason;
}

TEST(Checks, MackeyAtThreeTwo)
{
  const auto t = FieldTower::build(3, 2);
  const Verifier v(t);
  const auto b = v.check_mackey(SubgroupKind::Borel);
  ASSERT_TRUE(b.passed()) << b.reason;
  EXPECT_EQ(b.details.at("gamma_count").get<int>(), 2);
  EXPECT_TRUE(b.details.at("Gp_w_B_equals_Gp_B").get<bool>());
  const auto tt = v.check_mackey(SubgroupKind::AnisoTorus);
  ASSERT_TRUE(tt.passed()) << tt.reason;
  EXPECT_EQ(tt.details.at("gamma_count").get<int>(), 3);
  EXPECT_EQ(tt.details.at("brute_force").at("parts").get<int>(), 3);
}

TEST(Checks, T1PartOneAtThreeThree)
{
  const auto t = FieldTower::build(3, 3);
  const auto rep = Verifier(t).check_T1(1, 1);
  ASSERT_TRUE(rep.passed()) << rep.reason << " " << rep.witness.dump();
  EXPECT_EQ(rep.details.at("dims").at("lhs").get<int>(), 28);
  EXPECT_EQ(rep.details.at("multiplicity").get<int>(), 1);
  EXPECT_EQ(rep.details.at("prerequisite").at("status").get<std::string>(), "PASS");
}

TEST(Checks, T2AtThreeTwo)
{
  const auto t = FieldTower::build(3, 2);
  const Verifier v(t);
  for (int part : {1, 2}) {
    const auto rep = v.check_T2(8, part);
    ASSERT_TRUE(rep.passed()) << rep.reason;
    EXPECT_GE(rep.details.at("hom_dim_ind_Tp_into_lhs").get<int>(), 1);
    EXPECT_EQ(rep.details.at("iso").at("verdict").get<std::string>(), "ISO");
  }
}

TEST(Checks, DegenerateAtFOne)
{
  const auto t = FieldTower::build(3, 1);
  const Verifier v(t);
  const auto rep = v.check_T1(1, 1);
  EXPECT_TRUE(rep.passed()) << rep.reason;
  EXPECT_TRUE(rep.details.at("degenerate").get<bool>());
  EXPECT_EQ(rep.details.at("multiplicity").get<int>(), 0);
}

TEST(Checks, SplittingsAtThree)
{
  const auto t = FieldTower::build(3, 1);
  const auto rep = Verifier(t).check_splittings(1);
  ASSERT_TRUE(rep.passed()) << rep.reason;
  std::set<std::pair<int, int>> s;
  for (const auto& e : rep.details.at("S_p_characters"))
    s.emplace(e.at("a").get<int>(), e.at("d").get<int>());
  // chi_{i, r - i} for i = 1, 2, exponents modulo p - 1
  EXPECT_EQ(s, (std::set<std::pair<int, int>>{{1, 0}, {0, 1}}));
  std::set<int> k;
  for (const auto& e : rep.details.at("T_p_characters"))
    k.insert(e.at("k").get<int>());
  EXPECT_EQ(k, (std::set<int>{1, 3, 5, 7}));
}

TEST(Checks, GJAtThree)
{
  const auto t = FieldTower::build(3, 1);
  const auto rep = Verifier(t).check_GJ();
  ASSERT_TRUE(rep.passed()) << rep.reason;
  EXPECT_EQ(rep.details.at("characters").size(), 4u);
}

TEST(Checks, TinyEnumerationBudgetSkipsL1)
{
  const auto t = FieldTower::build(3, 2);
  VerifyOptions o;
  o.budgets.enumeration = 1000;
  const auto rep = Verifier(t, o).check_L1();
  EXPECT_EQ(rep.status, Status::Skipped);
  EXPECT_FALSE(rep.reason.empty());
}

TEST(Checks, FailureKeepsTheFirstWitness)
{
  CheckReport rep;
  rep.fail("first", json{{"k", 1}});
  rep.fail("second", json{{"k", 2}});
  EXPECT_EQ(rep.status, Status::Fail);
  EXPECT_EQ(rep.reason, "first");
  EXPECT_EQ(rep.witness.at("k").get<int>(), 1);
  EXPECT_EQ(rep.details.at("further_failures").get<int>(), 1);
  rep.skip("ignored");
  EXPECT_EQ(rep.status, Status::Fail);
}

TEST(Planning, RValuePolicies)
{
  const auto t = FieldTower::build(3, 2);
  const auto all = r_values(t, "T1.1", RPolicy::All, {}, 1);
  EXPECT_EQ(all.size(), 8u);
  const auto s1 = r_values(t, "E1", RPolicy::Sample, {}, 1);
  EXPECT_EQ(s1.size(), 4u);
  for (auto r : {0, 1, 7})
    EXPECT_TRUE(std::count(s1.begin(), s1.end(), r));
  const auto s2 = r_values(t, "T2.2", RPolicy::Sample, {}, 1);
  EXPECT_GE(s2.size(), 8u);
  for (auto r : {0, 1, 8, 10, 79})
    EXPECT_TRUE(std::count(s2.begin(), s2.end(), r)) << r;
  EXPECT_EQ(r_values(t, "SPLIT", RPolicy::Sample, {}, 1).size(), 8u);
  EXPECT_EQ(r_values(t, "T1.1", RPolicy::Explicit, {2, 99, -1}, 1), (std::vector<std::int64_t>{2}));
  EXPECT_TRUE(r_values(t, "P1", RPolicy::All, {}, 1).empty());
  EXPECT_EQ(r_values(t, "T2.1", RPolicy::Sample, {}, 5), r_values(t, "T2.1", RPolicy::Sample, {}, 5));
  EXPECT_THROW(parse_r_policy("most"), InvalidParameters);
}

TEST(Planning, PlanAndRun)
{
  const auto t = FieldTower::build(3, 1);
  const Verifier v(t);
  EXPECT_THROW(plan_checks(v, {"L1", "NOPE"}, RPolicy::Sample, {}), InvalidParameters);
  const auto plan = plan_checks(v, {"P1", "SPLIT", "R6"}, RPolicy::Sample, {});
  ASSERT_EQ(plan.size(), 2u + 8u);
  EXPECT_EQ(plan[0].id, "P1");
  EXPECT_EQ(plan[1].id, "R6");
  const auto reports = run_checks(plan, 2, true);
  ASSERT_EQ(reports.size(), plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) {
    EXPECT_EQ(reports[i].id, plan[i].id);
    EXPECT_EQ(reports[i].r, plan[i].r);
    EXPECT_TRUE(reports[i].passed()) << reports[i].id << " " << reports[i].reason;
  }
  EXPECT_EQ(plan_checks(v, {"all"}, RPolicy::Sample, {}).size(),
            plan_checks(v, all_check_ids(), RPolicy::Sample, {}).size());
}

TEST(Planning, ExceptionsPropagate)
{
  std::vector<PlannedCheck> plan{{"X", std::nullopt, []() -> CheckReport { throw InvalidParameters("boom"); }}};
  EXPECT_THROW(run_checks(plan, 1, true), InvalidParameters);
}
