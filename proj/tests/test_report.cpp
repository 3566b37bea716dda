#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gl2res/cache.hpp"
#include "gl2res/report.hpp"

using namespace gl2res;

namespace {

json read_golden(const std::string& name)
{
  std::ifstream in(std::filesystem::path(GL2RES_GOLDEN_DIR) / name);
  if (!in)
    throw std::runtime_error("missing golden file " + name);
  return json::parse(in);
}

json strip_timing(json report)
{
  for (auto& c : report.at("checks"))
    c.erase("elapsed_ms");
  return report;
}

std::filesystem::path fresh_dir(const std::string& name)
{
  const auto dir = std::filesystem::temp_directory_path() / ("gl2res_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::vector<CheckReport> small_suite(const FieldTower& t)
{
  const Verifier v(t);
  return run_checks(plan_checks(v, {"P1", "P2", "R6"}, RPolicy::Sample, {}), 1, true);
}

} // namespace

TEST(Report, SchemaFields)
{
  const auto t = FieldTower::build(3, 2);
  const json r = suite_report(t, small_suite(t));
  EXPECT_EQ(r.at("schema").get<int>(), kReportSchema);
  EXPECT_EQ(r.at("p").get<int>(), 3);
  EXPECT_EQ(r.at("f").get<int>(), 2);
  EXPECT_EQ(r.at("checks").size(), 3u);
  EXPECT_EQ(r.at("summary").at("pass").get<int>(), 3);
  for (const auto& c : r.at("checks"))
    for (const char* k : {"id", "p", "f", "r", "part", "status", "reason", "details", "witness", "elapsed_ms"})
      EXPECT_TRUE(c.contains(k)) << k;
}

TEST(Report, SummaryCountsStatuses)
{
  std::vector<CheckReport> v(4);
  v[1].fail("x");
  v[2].skip("y");
  v[3].skip("z");
  const Summary s = summarize(v);
  EXPECT_EQ(s.pass, 1u);
  EXPECT_EQ(s.fail, 1u);
  EXPECT_EQ(s.skipped, 2u);
}

TEST(Report, TextRenderingHasOneLinePerCheck)
{
  const auto t = FieldTower::build(3, 2);
  std::vector<CheckReport> checks = small_suite(t);
  checks[1].fail("forced", json{{"why", "test"}});
  const std::string text = render_text(suite_report(t, checks));
  EXPECT_NE(text.find("PASS  P1"), std::string::npos);
  EXPECT_NE(text.find("FAIL  P2"), std::string::npos);
  EXPECT_NE(text.find("witness {\"why\":\"test\"}"), std::string::npos);
  EXPECT_NE(text.find("summary pass=2 fail=1 skipped=0"), std::string::npos);
}

TEST(Golden, Tower)
{
  EXPECT_EQ(tower_json(FieldTower::build(3, 2)), read_golden("tower_p3_f2.json"));
}

TEST(Golden, Orbits)
{
  const auto t = FieldTower::build(3, 2);
  json j = orbits_json(t, orbit_decomposition(t, full(Level::P), Level::Q2));
  j["p"] = 3;
  j["f"] = 2;
  EXPECT_EQ(j, read_golden("orbits_p3_f2.json"));
}

TEST(Golden, VerifyReport)
{
  const auto t = FieldTower::build(3, 2);
  EXPECT_EQ(strip_timing(suite_report(t, small_suite(t))), strip_timing(read_golden("verify_p3_f2.json")));
}

TEST(Cache, ColdHitAndRebuilt)
{
  const auto t = FieldTower::build(3, 2);
  const auto dir = fresh_dir("cache");
  const auto cold = cache_tower(t, dir);
  EXPECT_EQ(cold.outcome, CacheOutcome::Cold);
  EXPECT_TRUE(std::filesystem::exists(cold.path));
  EXPECT_EQ(cache_tower(t, dir).outcome, CacheOutcome::Hit);

  {
    std::ifstream in(cold.path);
    json j = json::parse(in);
    j["eta"] = json::array({2, 2});
    std::ofstream out(cold.path);
    out << j.dump();
  }
  const auto tampered = cache_tower(t, dir);
  EXPECT_EQ(tampered.outcome, CacheOutcome::Rebuilt);
  EXPECT_EQ(tampered.message, "cached tower differs from construction");
  EXPECT_EQ(cache_tower(t, dir).outcome, CacheOutcome::Hit);

  {
    std::ofstream out(cold.path);
    out << "{not json";
  }
  const auto broken = cache_tower(t, dir);
  EXPECT_EQ(broken.outcome, CacheOutcome::Rebuilt);
  EXPECT_EQ(broken.message, "cached tower is not valid JSON");
  std::filesystem::remove_all(dir);
}

TEST(Cache, PathNamesParameters)
{
  EXPECT_EQ(tower_cache_path("/x", 5, 3).filename().string(), "tower_p5_f3.json");
}
