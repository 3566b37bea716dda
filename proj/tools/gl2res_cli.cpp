#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "gl2res/gl2res.hpp"

namespace {

using namespace gl2res;

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kInternal = 3 };

struct Common {
  int p = 3;
  int f = 2;
  std::string out;
  std::string cache_dir;
  bool no_cache = false;
  std::uint64_t budget_enum = Budgets{}.enumeration;
  bool verbose = false;
};

struct VerifyArgs {
  std::string r_policy = "sample";
  std::vector<std::int64_t> r;
  std::vector<std::string> checks{"all"};
  std::string format = "json";
  std::uint64_t seed = 1;
  std::uint64_t budget_hom = Budgets{}.hom_unknowns;
  unsigned jobs = 0;
  bool deterministic = false;
  bool no_brute_force = false;
};

struct OrbitArgs {
  std::string space = "P1(q2)";
  std::string acting = "Gp";
};

std::filesystem::path default_cache_dir()
{
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x)
    return std::filesystem::path(x) / "gl2res";
  if (const char* h = std::getenv("HOME"); h && *h)
    return std::filesystem::path(h) / ".cache" / "gl2res";
  return {};
}

FieldTower build_tower(const Common& c)
{
  const auto start = std::chrono::steady_clock::now();
  FieldTower t = FieldTower::build(c.p, c.f);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (c.no_cache)
    return t;
  const std::filesystem::path dir = c.cache_dir.empty() ? default_cache_dir() : std::filesystem::path(c.cache_dir);
  if (dir.empty())
    return t;
  try {
    const auto res = cache_tower(t, dir);
    switch (res.outcome) {
    case CacheOutcome::Hit: spdlog::debug("tower cache hit {}", res.path.string()); break;
    case CacheOutcome::Cold: spdlog::info("cold tower cache: constructed p={} f={} in {:.2f} ms", c.p, c.f, ms); break;
    case CacheOutcome::Rebuilt: spdlog::warn("{}; rebuilt {}", res.message, res.path.string()); break;
    }
  } catch (const std::exception& e) {
    spdlog::warn("tower cache unavailable: {}", e.what());
  }
  return t;
}

void emit(const std::string& text, const std::string& out)
{
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out);
  os << text;
  if (!os)
    throw std::runtime_error("cannot write " + out);
}

int run_verify(const Common& c, const VerifyArgs& a)
{
  const FieldTower t = build_tower(c);
  VerifyOptions opts;
  opts.budgets.enumeration = c.budget_enum;
  opts.budgets.hom_unknowns = a.budget_hom;
  opts.seed = a.seed;
  opts.brute_force = !a.no_brute_force;
  const RPolicy policy = parse_r_policy(a.r_policy);
  if (policy == RPolicy::Explicit && a.r.empty())
    throw InvalidParameters("--r-policy explicit needs --r");
  if (policy != RPolicy::Explicit && !a.r.empty())
    throw InvalidParameters("--r is only used with --r-policy explicit");
  if (a.format != "json" && a.format != "text")
    throw InvalidParameters("--format must be json or text");

  Verifier v(t, opts);
  const auto plan = plan_checks(v, a.checks, policy, a.r);
  const unsigned jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  spdlog::info("running {} checks at p={} f={} on {} thread(s)", plan.size(), c.p, c.f, jobs);
  const auto reports = run_checks(plan, jobs, a.deterministic, [](const CheckReport& r) {
    spdlog::debug("{} {}{} {:.1f} ms", status_name(r.status), r.id, r.r ? " r=" + std::to_string(*r.r) : "",
                  r.elapsed_ms);
  });
  const json report = suite_report(t, reports);
  emit(a.format == "json" ? report.dump(2) + "\n" : render_text(report), c.out);
  const Summary s = summarize(reports);
  spdlog::info("pass={} fail={} skipped={}", s.pass, s.fail, s.skipped);
  return s.fail ? kFail : kPass;
}

int run_orbits(const Common& c, const OrbitArgs& a)
{
  const FieldTower t = build_tower(c);
  Level space;
  if (a.space == "P1(q)")
    space = Level::Q;
  else if (a.space == "P1(q2)")
    space = Level::Q2;
  else if (a.space == "P1(p)")
    space = Level::P;
  else
    throw InvalidParameters("--space must be P1(p), P1(q) or P1(q2)");
  SubgroupSpec acting;
  if (a.acting == "Gp")
    acting = full(Level::P);
  else if (a.acting == "Gq")
    acting = full(Level::Q);
  else
    throw InvalidParameters("--acting must be Gp or Gq");
  OrbitOptions opts;
  opts.budget = c.budget_enum;
  const auto d = orbit_decomposition(t, acting, space, nullptr, opts);
  json j = orbits_json(t, d);
  j["p"] = t.p();
  j["f"] = t.f();
  emit(j.dump(2) + "\n", c.out);
  return kPass;
}

int run_tower(const Common& c)
{
  const FieldTower t = build_tower(c);
  emit(tower_json(t).dump(2) + "\n", c.out);
  return kPass;
}

void add_common(CLI::App* sub, Common& c)
{
  sub->add_option("--p", c.p, "odd prime p")->required();
  sub->add_option("--f", c.f, "extension degree f, q = p^f")->required();
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--cache-dir", c.cache_dir, "tower cache directory");
  sub->add_flag("--no-cache", c.no_cache, "do not read or write the tower cache");
  sub->add_option("--budget-enum", c.budget_enum, "largest group listed element by element")
    ->check(CLI::PositiveNumber);
  sub->add_flag("-v,--verbose", c.verbose, "debug logging");
}

} // namespace

int main(int argc, char** argv)
{
  auto logger = spdlog::stderr_color_mt("gl2res");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Restriction of mod-p representations from GL2(F_q) to GL2(F_p)"};
  app.require_subcommand(1);

  Common common;
  VerifyArgs va;
  OrbitArgs oa;

  auto* verify = app.add_subcommand("verify", "run verification checks and write a report");
  add_common(verify, common);
  verify->add_option("--r-policy", va.r_policy, "all | sample | explicit")
    ->check(CLI::IsMember({"all", "sample", "explicit"}));
  verify->add_option("--r", va.r, "r values for --r-policy explicit")->delimiter(',');
  verify->add_option("--checks", va.checks, "check ids or 'all'")->delimiter(',');
  verify->add_option("--format", va.format, "json | text")->check(CLI::IsMember({"json", "text"}));
  verify->add_option("--seed", va.seed, "seed for random r samples and isomorphism trials");
  verify->add_option("--budget-hom", va.budget_hom, "largest dim(a)*dim(b) for a Hom solve")
    ->check(CLI::PositiveNumber);
  verify->add_option("--jobs", va.jobs, "worker threads (default: all cores)");
  verify->add_flag("--deterministic-order", va.deterministic, "report checks in plan order");
  verify->add_flag("--no-brute-force", va.no_brute_force, "skip the brute-force double coset cross-check");

  auto* orbits = app.add_subcommand("orbits", "print an orbit decomposition as JSON");
  add_common(orbits, common);
  orbits->add_option("--space", oa.space, "P1(p) | P1(q) | P1(q2)");
  orbits->add_option("--acting", oa.acting, "Gp | Gq");

  auto* tower = app.add_subcommand("tower", "print the field tower as JSON");
  add_common(tower, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }
  spdlog::set_level(common.verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*verify)
      return run_verify(common, va);
    if (*orbits)
      return run_orbits(common, oa);
    return run_tower(common);
  } catch (const InvalidParameters& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const BudgetExceeded& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    spdlog::critical("internal error: {}", e.what());
    return kInternal;
  }
}
