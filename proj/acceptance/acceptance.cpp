// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gl2res/gl2res.hpp"

using namespace gl2res;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string& what)
  {
    if (!cond) {
      if (ok)
        note << "first failure: " << what << "; ";
      ok = false;
    }
  }
};

void expect_pass(Outcome& o, const CheckReport& r)
{
  std::string label = r.id + " at (" + std::to_string(r.p) + "," + std::to_string(r.f) + ")";
  if (r.r)
    label += " r=" + std::to_string(*r.r);
  o.require(r.status == Status::Pass, label + " is " + status_name(r.status) + ": " + r.reason);
}

void expect_iso(Outcome& o, const CheckReport& r)
{
  const bool iso = r.details.contains("iso") && r.details.at("iso").at("verdict") == "ISO";
  o.require(iso, r.id + " r=" + std::to_string(r.r.value_or(-1)) + " not certified ISO");
}

// Orbit count of G_p on P^1(F_q) by union-find over every group element.
std::size_t naive_orbit_count(const FieldTower& t, const std::vector<Mat2>& gp)
{
  const std::uint32_t n = line_size(t, Level::Q);
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::uint32_t x = 0; x < n; ++x)
    for (const auto& g : gp)
      parent[find(x)] = find(act_id(t, g, Level::Q, x));
  std::size_t roots = 0;
  for (std::uint32_t x = 0; x < n; ++x)
    roots += find(x) == x;
  return roots;
}

bool criterion1(std::ostream& msg)
{
  Outcome o;
  for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {3, 3}, {3, 4}, {5, 2}, {5, 3}, {7, 2}}) {
    const auto t = FieldTower::build(p, f);
    const Verifier v(t);
    const auto start = std::chrono::steady_clock::now();
    const auto rep = v.check_P1();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    expect_pass(o, rep);
    const char* name = f % 2 ? "I1" : "I2";
    const auto cf = f % 2 ? counts::I1(p, f) : counts::I2(p, f);
    o.require(rep.details.value(name, -1) == cf.value(), std::string(name) + " differs from closed form");
    const std::size_t head = f % 2 ? 1 : 2;
    o.require(naive_orbit_count(t, v.gp()) == head + static_cast<std::size_t>(cf.value()),
              "brute-force orbit count disagrees at (" + std::to_string(p) + "," + std::to_string(f) + ")");
    const double limit = (p == 3 && f == 4) || (p == 5 && f == 3) ? 120 : 10;
    o.require(s < limit, "P1 too slow");
    msg << "(" << p << "," << f << ") " << name << "=" << cf.value() << " ";
  }
  msg << o.note.str();
  return o.ok;
}

bool criterion2(std::ostream& msg)
{
  Outcome o;
  const std::map<std::pair<int, int>, std::pair<const char*, int>> want{
    {{3, 2}, {"J", 3}}, {{3, 3}, {"J'", 29}}, {{5, 2}, {"J", 5}}};
  for (const auto& [pf, nv] : want) {
    const auto t = FieldTower::build(pf.first, pf.second);
    const auto rep = Verifier(t).check_P2();
    expect_pass(o, rep);
    o.require(rep.details.value(nv.first, -1) == nv.second, std::string(nv.first) + " count is wrong");
    msg << "(" << pf.first << "," << pf.second << ") " << nv.first << "=" << rep.details.value(nv.first, -1) << " ";
  }
  msg << o.note.str();
  return o.ok;
}

bool criterion3(std::ostream& msg)
{
  Outcome o;
  for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 2}, {5, 2}, {3, 3}}) {
    const auto t = FieldTower::build(p, f);
    const Verifier v(t);
    expect_pass(o, v.check_L1());
    expect_pass(o, v.check_L4());
    msg << "q=" << t.q() << " ";
  }
  msg << o.note.str();
  return o.ok;
}

bool criterion4(std::ostream& msg)
{
  Outcome o;
  const auto t2 = FieldTower::build(3, 2);
  const Verifier v2(t2);
  for (auto kind : {SubgroupKind::Borel, SubgroupKind::AnisoTorus}) {
    const auto rep = v2.check_mackey(kind);
    expect_pass(o, rep);
    o.require(rep.details.at("brute_force").is_object(), rep.id + " brute force did not run");
    msg << rep.id << "(3,2) gammas=" << rep.details.value("gamma_count", 0) << " ";
  }
  const auto t3 = FieldTower::build(3, 3);
  const auto rep = Verifier(t3).check_mackey(SubgroupKind::Borel);
  expect_pass(o, rep);
  o.require(rep.details.at("brute_force").is_object(), "MACKEY.B (3,3) brute force did not run");
  msg << "MACKEY.B(3,3) gammas=" << rep.details.value("gamma_count", 0) << " ";
  msg << o.note.str();
  return o.ok;
}

bool criterion5(std::ostream& msg)
{
  Outcome o;
  const auto t2 = FieldTower::build(3, 2);
  const Verifier v2(t2);
  std::size_t n = 0;
  for (std::int64_t r = 0; r <= 7; ++r)
    for (int part : {1, 2}) {
      expect_pass(o, v2.check_T1(r, part));
      ++n;
    }
  const auto t3 = FieldTower::build(3, 3);
  const Verifier v3(t3);
  const auto rs = r_values(t3, "T1.1", RPolicy::Sample, {}, 1);
  for (auto r : {0, 1, 25})
    o.require(std::count(rs.begin(), rs.end(), r) == 1, "sample lacks r=" + std::to_string(r));
  for (auto r : rs)
    for (int part : {1, 2}) {
      const auto start = std::chrono::steady_clock::now();
      const auto rep = v3.check_T1(r, part);
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      expect_pass(o, rep);
      o.require(rep.details.at("dims").at("lhs") == 28, "dimension audit at (3,3)");
      o.require(s < 60, "T1 too slow");
      ++n;
    }
  msg << n << " checks, (3,3) r in {";
  for (std::size_t i = 0; i < rs.size(); ++i)
    msg << (i ? "," : "") << rs[i];
  msg << "} ";
  msg << o.note.str();
  return o.ok;
}

bool criterion6(std::ostream& msg)
{
  Outcome o;
  std::size_t embeddings = 0;
  for (int f : {2, 3}) {
    const auto t = FieldTower::build(3, f);
    const Verifier v(t);
    const auto rs = r_values(t, "T2.1", RPolicy::Sample, {}, 1);
    const auto q1 = static_cast<std::int64_t>(t.q() + 1);
    o.require(rs.size() >= 8, "fewer than 8 samples");
    o.require(std::count(rs.begin(), rs.end(), 0) == 1, "sample lacks r=0");
    o.require(std::any_of(rs.begin(), rs.end(), [&](auto r) { return r > 0 && r % q1 == 0; }),
              "sample lacks a positive multiple of q+1");
    for (auto r : rs)
      for (int part : {1, 2}) {
        const auto rep = v.check_T2(r, part);
        expect_pass(o, rep);
        if (f == 2 && rep.details.contains("hom_dim_ind_Tp_into_lhs") && part == 1)
          ++embeddings;
      }
    msg << "(3," << f << ") " << rs.size() << " r values ";
  }
  o.require(embeddings >= 4, "embedding verified for fewer than 4 r at (3,2)");
  msg << "embeddings at (3,2): " << embeddings << " (6x72 unknowns) ";
  msg << o.note.str();
  return o.ok;
}

bool criterion7(std::ostream& msg)
{
  Outcome o;
  for (int p : {3, 5}) {
    const auto t = FieldTower::build(p, 1);
    const auto rep = Verifier(t).check_GJ();
    expect_pass(o, rep);
    for (const auto& row : rep.details.at("characters")) {
      o.require(row.at("iso") == "ISO", "GJ not ISO");
      o.require(row.at("dim").get<int>() <= 30, "GJ dimension above 30");
    }
    msg << "p=" << p << " characters=" << rep.details.at("characters").size() << " ";
  }
  msg << o.note.str();
  return o.ok;
}

bool criterion8(std::ostream& msg)
{
  Outcome o;
  for (int p : {3, 5}) {
    const auto t = FieldTower::build(p, 1);
    const Verifier v(t);
    for (std::int64_t r = 0; r < p * p - 1; ++r) {
      const auto rep = v.check_splittings(r);
      expect_pass(o, rep);
      o.require(rep.details.at("S_p_characters").size() == static_cast<std::size_t>(p - 1), "S_p count");
      o.require(rep.details.at("T_p_characters").size() == static_cast<std::size_t>(p + 1), "T_p count");
    }
    msg << "p=" << p << " r=0.." << p * p - 2 << " ";
  }
  msg << o.note.str();
  return o.ok;
}

bool criterion9(std::ostream& msg)
{
  Outcome o;
  const auto t = FieldTower::build(3, 2);
  const Verifier v(t);
  for (std::int64_t r = 0; r <= 7; ++r) {
    const auto e1 = v.check_E1(r);
    expect_pass(o, e1);
    expect_iso(o, e1);
    for (int part : {1, 2}) {
      const auto rep = v.check_T1(r, part);
      expect_pass(o, rep);
      expect_iso(o, rep);
      o.require(rep.details.at("dims").at("lhs") == 10, "dimension 10");
    }
  }
  msg << "E1, T1.1, T1.2 ISO for r=0..7 ";
  msg << o.note.str();
  return o.ok;
}

bool criterion10(std::ostream& msg)
{
  Outcome o;
  // field axioms and embeddings
  for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 2}, {3, 3}, {5, 2}}) {
    const auto t = FieldTower::build(p, f);
    const Field& F = t.field(Level::Q2);
    std::mt19937_64 rng(static_cast<std::uint64_t>(p * 10 + f));
    std::uniform_int_distribution<Elem> pick(0, F.size() - 1);
    for (int k = 0; k < 2000; ++k) {
      const Elem a = pick(rng), b = pick(rng), c = pick(rng);
      o.require(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)), "distributivity");
      o.require(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)), "associativity");
      if (a)
        o.require(F.mul(a, F.inv(a)) == F.one(), "inverse");
    }
    const Field& Fq = t.field(Level::Q);
    for (Elem x = 0; x < Fq.size(); ++x)
      for (Elem y = 0; y < Fq.size(); y += 3) {
        o.require(t.embed(Fq.mul(x, y), Level::Q, Level::Q2) ==
                    F.mul(t.embed(x, Level::Q, Level::Q2), t.embed(y, Level::Q, Level::Q2)),
                  "embedding is multiplicative");
      }
    const Field& Fp = t.field(Level::P);
    for (Elem x = 0; x < Fp.size(); ++x)
      o.require(t.embed(t.embed(x, Level::P, Level::Q), Level::Q, Level::Q2) == t.embed(x, Level::P, Level::Q2),
                "embeddings commute");
  }
  // orbit-stabilizer products
  for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 2}, {3, 3}, {5, 2}}) {
    const auto t = FieldTower::build(p, f);
    for (Level space : {Level::Q, Level::Q2}) {
      const auto d = orbit_decomposition(t, full(Level::P), space);
      std::size_t total = 0;
      for (const auto& orb : d.orbits) {
        o.require(orb.size * orb.stab_order == gl2_order(static_cast<std::uint64_t>(p)), "orbit-stabilizer");
        total += orb.size;
      }
      o.require(total == line_size(t, space), "orbits cover the line");
    }
  }
  // monomial vs dense fingerprints, and direct sums
  {
    const auto t = FieldTower::build(3, 2);
    const Field& F = t.field(Level::Q2);
    const auto cls = p_regular_class_reps(t);
    const Rep st = steinberg_model(t);
    const Rep a = restrict(t, induce(t, borel(Level::Q), chi_rs(1, 2, Level::Q), full(Level::Q)), full(Level::P));
    const Rep b = induce(t, aniso_torus(Level::P), omega_p(2), full(Level::P));
    const Rep c = tensor(t, induce(t, borel(Level::P), chi_r(1, Level::P), full(Level::P)), st);
    for (const Rep* r : {&a, &b, &c})
      o.require(compare(fingerprint(*r, cls), fingerprint_dense(*r, cls)).equal, "monomial vs dense " + r->name);
    const Rep s = direct_sum(t, full(Level::P), {{a, 1}, {b, 2}, {st, 1}});
    auto want = fingerprint_product(F, fingerprint(a, cls), fingerprint(b, cls));
    want = fingerprint_product(F, want, fingerprint(b, cls));
    want = fingerprint_product(F, want, fingerprint(st, cls));
    o.require(compare(fingerprint(s, cls), want).equal, "direct-sum multiplicativity");
    o.require(compare(fingerprint_dense(s, cls), want).equal, "direct-sum multiplicativity (dense)");
  }
  msg << "field axioms, embeddings, orbit-stabilizer, fingerprints ";
  msg << o.note.str();
  return o.ok;
}

} // namespace

int main()
{
  const std::vector<std::function<bool(std::ostream&)>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                                 criterion5, criterion6, criterion7, criterion8,
                                                                 criterion9, criterion10};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    std::ostringstream msg;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = criteria[k](msg);
    } catch (const std::exception& e) {
      msg << "exception: " << e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("Criterion %zu: %s  %s[%.1f s]\n", k + 1, ok ? "PASS" : "FAIL", msg.str().c_str(), s);
    std::fflush(stdout);
    failures += !ok;
  }
  return failures ? 1 : 0;
}
