#ifndef GL2RES_VERIFY_HPP
#define GL2RES_VERIFY_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "gl2res/brauer.hpp"
#include "gl2res/character.hpp"
#include "gl2res/common.hpp"
#include "gl2res/ffield.hpp"
#include "gl2res/grp.hpp"
#include "gl2res/linalg.hpp"
#include "gl2res/mackey.hpp"
#include "gl2res/projline.hpp"
#include "gl2res/reps.hpp"
#include "gl2res/serialize.hpp"
#include "gl2res/theorems.hpp"

/**
 * @file verify.hpp
 * @brief Verification checks with structured reports, r-sampling policies
 * and a parallel runner.
 */

namespace gl2res {

enum class Status { Pass, Fail, Skipped };

inline const char* status_name(Status s)
{
  switch (s) {
  case Status::Pass: return "PASS";
  case Status::Fail: return "FAIL";
  case Status::Skipped: return "SKIPPED";
  }
  return "?";
}

struct CheckReport {
  std::string id;
  int p = 0;
  int f = 0;
  std::optional<std::int64_t> r;
  std::optional<int> part;
  Status status = Status::Pass;
  std::string reason;
  json details = json::object();
  /// Set whenever status is FAIL.
  json witness;
  double elapsed_ms = 0;

  bool passed() const { return status == Status::Pass; }

  /// First failure wins; later ones are counted.
  void fail(const std::string& why, json w = nullptr)
  {
    if (status == Status::Fail) {
      details["further_failures"] = details.value("further_failures", 0) + 1;
      return;
    }
    status = Status::Fail;
    reason = why;
    witness = w.is_null() ? json(why) : std::move(w);
  }

  void skip(const std::string& why)
  {
    if (status == Status::Pass) {
      status = Status::Skipped;
      reason = why;
    }
  }
};

inline json to_json(const CheckReport& c)
{
  json j{{"id", c.id}, {"p", c.p}, {"f", c.f}};
  j["r"] = c.r ? json(*c.r) : json(nullptr);
  j["part"] = c.part ? json(*c.part) : json(nullptr);
  j["status"] = status_name(c.status);
  j["reason"] = c.reason;
  j["details"] = c.details;
  j["witness"] = c.witness;
  j["elapsed_ms"] = c.elapsed_ms;
  return j;
}

struct VerifyOptions {
  Budgets budgets;
  std::uint64_t seed = 1;
  int iso_trials = 8;
  /// Cross-check double cosets by listing G_q when it fits the budget.
  bool brute_force = true;
};

/// Check ids in suite order.
inline const std::vector<std::string>& all_check_ids()
{
  static const std::vector<std::string> ids{"L1",  "L2",  "L3",   "L4",   "P1",   "P2",   "R6", "MACKEY.B", "MACKEY.T",
                                            "E1",  "E5",  "T1.1", "T1.2", "T2.1", "T2.2", "GJ", "SPLIT"};
  return ids;
}

class Verifier {
 public:
  explicit Verifier(const FieldTower& t, VerifyOptions opts = {}) : t_(&t), opts_(opts) {}

  const FieldTower& tower() const { return *t_; }
  const VerifyOptions& options() const { return opts_; }

  const std::vector<Mat2>& gp() const
  {
    std::call_once(gp_once_, [&] { gp_ = enumerate(*t_, full(Level::P), opts_.budgets.enumeration); });
    return gp_;
  }

  const std::vector<Mat2>& class_reps() const
  {
    std::call_once(cls_once_, [&] { cls_ = p_regular_class_reps(*t_); });
    return cls_;
  }

  const Rep& steinberg() const
  {
    std::call_once(st_once_, [&] { st_ = steinberg_model(*t_); });
    return st_;
  }

  CheckReport check_L1() const
  {
    return run("L1", {}, {}, [&](CheckReport& rep) {
      const FieldTower& t = *t_;
      const std::uint64_t q = t.q();
      const std::uint64_t order = gl2_order(q);
      if (order > opts_.budgets.enumeration)
        throw BudgetExceeded("listing G_q", order, opts_.budgets.enumeration);
      OrbitOptions oo;
      oo.budget = opts_.budgets.enumeration;
      const auto d = orbit_decomposition(t, full(Level::Q), Level::Q2, nullptr, oo);
      rep.details["points"] = d.subset_size;
      rep.details["orbits"] = orbits_json(t, d)["orbits"];
      if (d.subset_size != q * q + 1)
        rep.fail("P^1(F_q2) has the wrong size", d.subset_size);
      if (d.orbits.size() != 2) {
        rep.fail("expected two G_q-orbits", json{{"orbit_count", d.orbits.size()}});
        return;
      }
      const auto& o0 = d.orbits[0];
      const auto& o1 = d.orbits[1];
      if (point_id(t, o0.rep) != 0 || o0.size != q + 1)
        rep.fail("orbit of 0^ has the wrong size", json{{"rep", point_json(t, o0.rep)}, {"size", o0.size}});
      if (point_id(t, o1.rep) != t.epsilon() || o1.size != q * q - q)
        rep.fail("orbit of eps^ has the wrong size", json{{"rep", point_json(t, o1.rep)}, {"size", o1.size}});
      if (o0.stab.kind != SubgroupKind::Borel || o0.stab.level != Level::Q)
        rep.fail("Stab(0^) is not B_q", json{{"stabilizer", o0.stab.name()}, {"order", o0.stab_order}});
      if (o1.stab.kind != SubgroupKind::AnisoTorus || o1.stab.level != Level::Q)
        rep.fail("Stab(eps^) is not T_q", json{{"stabilizer", o1.stab.name()}, {"order", o1.stab_order}});
    });
  }

  /// {1, x, x^2} is F_p-independent for every x in X.
  CheckReport check_L2() const
  {
    return run("L2", {}, {}, [&](CheckReport& rep) {
      const FieldTower& t = *t_;
      const Field& Fq = t.field(Level::Q);
      const Field& Fp = t.field(Level::P);
      std::size_t swept = 0;
      for (Elem x = 0; x < Fq.size(); ++x) {
        if (!in_X(x))
          continue;
        ++swept;
        Matrix M(static_cast<std::size_t>(t.f()), 3);
        const Elem pw[3] = {Fq.one(), x, Fq.mul(x, x)};
        for (std::size_t j = 0; j < 3; ++j) {
          const auto c = Fq.coeffs(pw[j]);
          for (std::size_t i = 0; i < c.size(); ++i)
            M(i, j) = Fp.from_int(c[i]);
        }
        if (rank(Fp, M) != 3)
          rep.fail("1, x, x^2 are dependent over F_p", json{{"x", elem_json(t, x, Level::Q)}});
      }
      const std::uint64_t expected = t.q() - ipow(static_cast<std::uint64_t>(t.p()), t.f() % 2 ? 1u : 2u);
      rep.details["swept"] = swept;
      rep.details["vacuous"] = swept == 0;
      if (swept != expected)
        rep.fail("|X| is wrong", json{{"swept", swept}, {"expected", expected}});
    });
  }

  /// O_{G_p}(eta^) lies in O_{G_q}(0^) (f even) or O_{G_q}(eps^) (f odd), and
  /// the G_p-orbits of P^1(F_q2) split between the two G_q-orbits as counted.
  CheckReport check_L3() const
  {
    return run("L3", {}, {}, [&](CheckReport& rep) {
      const FieldTower& t = *t_;
      const int p = t.p(), f = t.f();
      const Level L = Level::Q2;
      const auto eps_ids = epsilon_orbit_ids(t);
      std::vector<char> in_eps(line_size(t, L), 0);
      for (auto id : eps_ids)
        in_eps[id] = 1;

      OrbitOptions oo;
      oo.elements = &gp();
      oo.budget = opts_.budgets.enumeration;
      const auto d = orbit_decomposition(t, full(Level::P), L, nullptr, oo);
      const std::uint32_t eta_id = t.embed(t.eta(), Level::P2, L);
      const auto& eta_orbit = d.orbits[static_cast<std::size_t>(d.orbit_of[eta_id])];
      bool contained = true;
      for (auto id : eta_orbit.members)
        if (static_cast<bool>(in_eps[id]) != (f % 2 == 1))
          contained = false;
      rep.details["eta_orbit_size"] = eta_orbit.size;
      rep.details["eta_orbit_side"] = f % 2 ? "O(eps^)" : "O(0^)";
      if (!contained)
        rep.fail("O_Gp(eta^) is not inside the predicted G_q-orbit", json{{"eta_orbit_size", eta_orbit.size}});

      std::size_t zero_side = 0, eps_side = 0;
      for (const auto& o : d.orbits) {
        std::size_t hits = 0;
        for (auto id : o.members)
          hits += in_eps[id];
        if (hits == 0)
          ++zero_side;
        else if (hits == o.members.size())
          ++eps_side;
        else
          rep.fail("a G_p-orbit meets both G_q-orbits", json{{"rep", point_json(t, o.rep)}});
      }
      const std::int64_t zero_expected = f % 2 ? 1 + counts::I1(p, f).value() : 2 + counts::I2(p, f).value();
      const std::int64_t eps_expected = f % 2 ? 1 + counts::Jprime(p, f).value() : counts::J(p, f).value();
      const std::int64_t total_expected = 2 + counts::I2(p, 2 * f).value();
      rep.details["orbits_in_O(0^)"] = zero_side;
      rep.details["orbits_in_O(eps^)"] = eps_side;
      rep.details["orbits_total"] = d.orbits.size();
      if (static_cast<std::int64_t>(zero_side) != zero_expected ||
          static_cast<std::int64_t>(eps_side) != eps_expected ||
          static_cast<std::int64_t>(d.orbits.size()) != total_expected)
        rep.fail("orbit split differs from the counts",
                 json{{"zero_side", zero_side},
                      {"zero_expected", zero_expected},
                      {"eps_side", eps_side},
                      {"eps_expected", eps_expected},
                      {"total", d.orbits.size()},
                      {"total_expected", total_expected}});
    });
  }

  /// Stab_{G_p}(x^) = Z_p for x in X, and for x in F_q2 \ F_p2.
  CheckReport check_L4() const
  {
    return run("L4", {}, {}, [&](CheckReport& rep) {
      const FieldTower& t = *t_;
      const auto Z = center(Level::P);
      const std::size_t zsize = static_cast<std::size_t>(t.p() - 1);
      auto sweep = [&](Level L, auto&& keep) {
        std::size_t n = 0;
        for (Elem x = 0; x < t.field(L).size(); ++x) {
          if (!keep(x))
            continue;
          ++n;
          const auto stab = stabilizer_elements(t, gp(), finite_point(L, x));
          bool ok = stab.size() == zsize;
          for (const auto& g : stab)
            ok = ok && contains(t, Z, g);
          if (!ok)
            rep.fail("stabilizer is not Z_p",
                     json{{"level", level_name(L)}, {"x", elem_json(t, x, L)}, {"order", stab.size()}});
        }
        return n;
      };
      const std::size_t nq = sweep(Level::Q, [&](Elem x) { return in_X(x); });
      const std::size_t nq2 = sweep(Level::Q2, [&](Elem x) { return !t.lies_in(x, Level::Q2, Level::P2); });
      rep.details["swept_X"] = nq;
      rep.details["swept_Fq2_minus_Fp2"] = nq2;
    });
  }

  CheckReport check_P1() const
  {
    return run("P1", {}, {}, [&](CheckReport& rep) {
      const FieldTower& t = *t_;
      const int p = t.p(), f = t.f();
      const std::uint64_t pp = static_cast<std::uint64_t>(p);
      OrbitOptions oo;
      oo.elements = &gp();
      oo.budget = opts_.budgets.enumeration;
      const auto d = orbit_decomposition(t, full(Level::P), Level::Q, nullptr, oo);
      rep.details["decomposition"] = orbits_json(t, d);
      const ClosedForm cf = f % 2 ? counts::I1(p, f) : counts::I2(p, f);
      const char* name = f % 2 ? "I1" : "I2";
      rep.details["closed_form"] = {{"name", name}, {"num", cf.num}, {"den", cf.den}};
      if (!cf.integral()) {
        rep.fail(std::string("closed form for |") + name + "| is not an integer", json{{"num", cf.num}, {"den", cf.den}});
        return;
      }
      const std::size_t head = f % 2 ? 1 : 2;
      const std::int64_t observed = static_cast<std::int64_t>(d.orbits.size()) - static_cast<std::int64_t>(head);
      rep.details[name] = observed;
      if (observed != cf.value())
        rep.fail(std::string("|") + name + "| differs from the closed form",
                 json{{"observed", observed}, {"expected", cf.value()}});
      expect_orbit(rep, d, 0, 0, pp + 1, SubgroupKind::Borel);
      if (f % 2 == 0)
        expect_orbit(rep, d, 1, t.embed(t.eta(), Level::P2, Level::Q), pp * pp - pp, SubgroupKind::AnisoTorus);
      for (std::size_t k = head; k < d.orbits.size(); ++k) {
        expect_orbit(rep, d, k, std::nullopt, pp * (pp * pp - 1), SubgroupKind::Center);
        if (d.orbits[k].rep.infinite || !in_X(d.orbits[k].rep.x))
          rep.fail("orbit representative outside X", json{{"rep", point_json(t, d.orbits[k].rep)}});
      }
    });
  }

  CheckReport check_P2() const
  {
    return run("P2", {}, {}, [&](CheckReport& rep) {
      const FieldTower& t = *t_;
      const int p = t.p(), f = t.f();
      const std::uint64_t pp = static_cast<std::uint64_t>(p), q = t.q();
      OrbitOptions oo;
      oo.elements = &gp();
      oo.budget = opts_.budgets.enumeration;
      const auto d = split_epsilon_orbit(t, oo);
      rep.details["decomposition"] = orbits_json(t, d);
      if (d.subset_size != q * q - q)
        rep.fail("|O_Gq(eps^)| != q^2 - q", json{{"size", d.subset_size}});
      const ClosedForm cf = f % 2 ? counts::Jprime(p, f) : counts::J(p, f);
      const char* name = f % 2 ? "J'" : "J";
      rep.details["closed_form"] = {{"name", name}, {"num", cf.num}, {"den", cf.den}};
      if (!cf.integral()) {
        rep.fail(std::string("closed form for |") + name + "| is not an integer", json{{"num", cf.num}, {"den", cf.den}});
        return;
      }
      const std::size_t head = f % 2 ? 1 : 0;
      const std::int64_t observed = static_cast<std::int64_t>(d.orbits.size()) - static_cast<std::int64_t>(head);
      rep.details[name] = observed;
      if (observed != cf.value())
        rep.fail(std::string("|") + name + "| differs from the closed form",
                 json{{"observed", observed}, {"expected", cf.value()}});
      if (f % 2 == 1)
        expect_orbit(rep, d, 0, t.epsilon(), pp * pp - pp, SubgroupKind::AnisoTorus);
      for (std::size_t k = head; k < d.orbits.size(); ++k)
        expect_orbit(rep, d, k, std::nullopt, pp * (pp * pp - 1), SubgroupKind::Center);
    });
  }

  /// T_q ∩ G_p is Z_p (f even) or T_p (f odd); T_p ⊆ T_q iff f odd.
  CheckReport check_R6() const
  {
    return run("R6", {}, {}, [&](CheckReport& rep) {
      const FieldTower& t = *t_;
      const auto inter = intersect_with_gp(t, aniso_torus(Level::Q), opts_.budgets.enumeration);
      const SubgroupKind expected = t.f() % 2 ? SubgroupKind::AnisoTorus : SubgroupKind::Center;
      rep.details["intersection"] = inter.classified.name();
      rep.details["order"] = inter.elements.size();
      if (inter.classified.kind != expected || inter.classified.level != Level::P)
        rep.fail("T_q ∩ G_p has the wrong shape", json{{"got", inter.classified.name()}, {"order", inter.elements.size()}});
      const auto Tp = enumerate(t, aniso_torus(Level::P));
      std::optional<Mat2> outside;
      for (const auto& g : Tp)
        if (!contains(t, aniso_torus(Level::Q), g)) {
          outside = g;
          break;
        }
      const bool contained = !outside.has_value();
      rep.details["T_p_in_T_q"] = contained;
      if (contained != (t.f() % 2 == 1))
        rep.fail("containment of T_p in T_q does not follow the parity of f",
                 outside ? mat_json(t, *outside) : json("T_p is contained"));
    });
  }

  /// Double cosets from orbits, conjugated intersections and character twists.
  CheckReport check_mackey(SubgroupKind kind) const
  {
    const bool is_borel = kind == SubgroupKind::Borel;
    return run(is_borel ? "MACKEY.B" : "MACKEY.T", {}, {}, [&](CheckReport& rep) {
      const FieldTower& t = *t_;
      const int p = t.p(), f = t.f();
      const SubgroupSpec H = is_borel ? borel(Level::Q) : aniso_torus(Level::Q);
      const auto dc = double_coset_reps(t, H, gp());
      const std::int64_t expected = is_borel ? (f % 2 ? 1 + counts::I1(p, f).value() : 2 + counts::I2(p, f).value())
                                             : (f % 2 ? 1 + counts::Jprime(p, f).value() : counts::J(p, f).value());
      rep.details["cosets"] = dc.sys.size();
      rep.details["gamma_count"] = dc.gammas.size();
      const std::uint64_t index = is_borel ? t.q() + 1 : t.q() * (t.q() - 1);
      if (dc.sys.size() != index)
        rep.fail("wrong number of coset representatives", json{{"got", dc.sys.size()}, {"expected", index}});
      if (static_cast<std::int64_t>(dc.gammas.size()) != expected)
        rep.fail("|Gamma| differs from the orbit count", json{{"got", dc.gammas.size()}, {"expected", expected}});

      json gammas = json::array();
      for (std::size_t k = 0; k < dc.gammas.size(); ++k) {
        const auto& g = dc.gammas[k];
        gammas.push_back({{"point", point_json(t, g.point)},
                          {"gamma", mat_json(t, g.gamma)},
                          {"orbit_size", g.orbit_size},
                          {"intersection", g.intersection.classified.name()}});
        if (!g.equals_stabilizer)
          rep.fail("conjugated intersection differs from the point stabilizer",
                   json{{"point", point_json(t, g.point)}, {"intersection", g.intersection.elements.size()},
                        {"stabilizer", g.point_stabilizer.elements.size()}});
        SubgroupKind want = SubgroupKind::Center;
        if (is_borel && k == 0)
          want = SubgroupKind::Borel;
        else if (is_borel && k == 1 && f % 2 == 0)
          want = SubgroupKind::AnisoTorus;
        else if (!is_borel && k == 0 && f % 2 == 1)
          want = SubgroupKind::AnisoTorus;
        if (g.intersection.classified.kind != want)
          rep.fail("conjugated intersection has the wrong kind",
                   json{{"point", point_json(t, g.point)}, {"got", g.intersection.classified.name()},
                        {"expected", kind_name(want)}});
      }
      rep.details["gammas"] = gammas;

      check_twists(rep, dc, is_borel);

      const std::uint64_t order = gl2_order(t.q());
      if (!opts_.brute_force || order > opts_.budgets.enumeration) {
        rep.details["brute_force"] = "not run";
        return;
      }
      const auto bf = brute_force_double_cosets(t, H, gp(), opts_.budgets.enumeration);
      rep.details["brute_force"] = {{"parts", bf.sizes.size()}, {"sizes", bf.sizes}};
      if (bf.sizes.size() != dc.gammas.size())
        rep.fail("brute-force double coset count differs", json{{"brute", bf.sizes.size()}, {"gammas", dc.gammas.size()}});
      std::set<std::int32_t> labels;
      const std::uint64_t hsize = subgroup_order(t, H);
      for (const auto& g : dc.gammas) {
        const auto lab = bf.label_of(t, g.gamma);
        if (!labels.insert(lab).second)
          rep.fail("two gammas share a double coset", json{{"gamma", mat_json(t, g.gamma)}});
        const std::uint64_t predicted = gp().size() * hsize / g.intersection.elements.size();
        if (bf.sizes[static_cast<std::size_t>(lab)] != predicted)
          rep.fail("double coset size law fails",
                   json{{"gamma", mat_json(t, g.gamma)}, {"size", bf.sizes[static_cast<std::size_t>(lab)]},
                        {"predicted", predicted}});
      }
      if (is_borel) {
        const bool same = bf.label_of(t, w_matrix(t)) == bf.label_of(t, identity(t, Level::Q));
        rep.details["Gp_w_B_equals_Gp_B"] = same;
        if (!same)
          rep.fail("G_p w B_q != G_p g_0 B_q", mat_json(t, w_matrix(t)));
      }
    });
  }

  /// Restriction of ind_{B_q} chi_{r,s} against the Mackey sum.
  CheckReport check_E1(std::int64_t r, std::int64_t s = 0) const
  {
    return run("E1", r, {}, [&](CheckReport& rep) {
      const FieldTower& t = *t_;
      if (r < 0 || static_cast<std::uint64_t>(r) >= t.q() - 1 || s < 0 || static_cast<std::uint64_t>(s) >= t.q() - 1)
        throw InvalidParameters("E1 needs 0 <= r, s < q - 1");
      rep.details["s"] = s;
      const auto sides = borel_mackey_sides(t, chi_rs(r, s, Level::Q), gp());
      compare_sides(rep, sides, t.q() + 1, true);
    });
  }

  /// Restriction of ind_{T_q} omega_{2f}^r against the Mackey sum.
  CheckReport check_E5(std::int64_t r) const
  {
    return run("E5", r, {}, [&](CheckReport& rep) {
      const FieldTower& t = *t_;
      if (r < 0 || static_cast<std::uint64_t>(r) >= t.q() * t.q() - 1)
        throw InvalidParameters("E5 needs 0 <= r < q^2 - 1");
      const auto sides = torus_mackey_sides(t, r);
      compare_sides(rep, sides, t.q() * t.q() - t.q(), true);
    });
  }

  CheckReport check_T1(std::int64_t r, int part) const
  {
    return run("T1." + std::to_string(part), r, part, [&](CheckReport& rep) {
      const FieldTower& t = *t_;
      const auto sides = principal_series_sides(t, r, part, steinberg());
      record_degeneration(rep, counts::borel_mult(t.p(), t.f()));
      if (!audit(rep, sides, t.q() + 1))
        return;
      if (!prerequisite(rep, "E1", r))
        return;
      compare_sides(rep, sides, t.q() + 1, true);
    });
  }

  CheckReport check_T2(std::int64_t r, int part) const
  {
    return run("T2." + std::to_string(part), r, part, [&](CheckReport& rep) {
      const FieldTower& t = *t_;
      const auto sides = torus_sides(t, r, part, steinberg());
      record_degeneration(rep, counts::torus_mult(t.p(), t.f()));
      if (!audit(rep, sides, t.q() * t.q() - t.q()))
        return;
      if (!prerequisite(rep, "E5", r))
        return;
      compare_sides(rep, sides, t.q() * t.q() - t.q(), true);
      if (rep.status == Status::Fail)
        return;
      const Rep sub = induce(t, aniso_torus(Level::P), omega_p(r), full(Level::P));
      const std::uint64_t unknowns = static_cast<std::uint64_t>(sub.dim()) * sides.lhs.dim();
      rep.details["embedding_unknowns"] = unknowns;
      if (unknowns > opts_.budgets.hom_unknowns) {
        rep.details["embedding"] = "not solved (budget)";
        return;
      }
      const std::size_t h = hom_dim(sub, sides.lhs, opts_.budgets.hom_unknowns);
      rep.details["hom_dim_ind_Tp_into_lhs"] = h;
      if (h == 0)
        rep.fail("ind_{T_p} omega_2^r does not map into the restriction", json{{"hom_dim", h}});
    });
  }

  /// ind_{S_p} chi = ind_{B_p} chi (x) St for every character of S_p.
  CheckReport check_GJ() const
  {
    return run("GJ", {}, {}, [&](CheckReport& rep) {
      const FieldTower& t = *t_;
      const int p = t.p();
      const auto G = full(Level::P);
      json rows = json::array();
      for (int i = 0; i <= p - 2; ++i)
        for (int j = 0; j <= p - 2; ++j) {
          const Rep lhs = induce(t, split_torus(Level::P), split_character(i, j), G);
          const Rep rhs = tensor(t, induce(t, borel(Level::P), chi_rs(i, j, Level::P), G), steinberg());
          const auto cmp = compare(fingerprint(lhs, class_reps()), fingerprint(rhs, class_reps()));
          const auto iso = iso_probable(lhs, rhs, class_reps(), opts_.iso_trials, opts_.seed + static_cast<std::uint64_t>(i * p + j),
                                        opts_.budgets.hom_unknowns);
          rows.push_back({{"i", i}, {"j", j}, {"dim", lhs.dim()}, {"fingerprint_equal", cmp.equal},
                          {"iso", verdict_name(iso.verdict)}});
          if (lhs.dim() != rhs.dim())
            rep.fail("dimension audit fails", json{{"i", i}, {"j", j}, {"lhs", lhs.dim()}, {"rhs", rhs.dim()}});
          else if (!cmp.equal)
            rep.fail("fingerprints differ", fingerprint_witness(cmp));
          else if (iso.verdict != IsoVerdict::Iso)
            rep.fail("isomorphism not certified", json{{"i", i}, {"j", j}, {"verdict", verdict_name(iso.verdict)},
                                                       {"reason", iso.reason}});
        }
      rep.details["characters"] = rows;
    });
  }

  /// ind_{Z_p}^{S_p} and ind_{Z_p}^{T_p} of z -> z^r split into the listed characters.
  CheckReport check_splittings(std::int64_t r) const
  {
    return run("SPLIT", r, {}, [&](CheckReport& rep) {
      const FieldTower& t = *t_;
      const int p = t.p();
      const std::int64_t pm = p - 1, p2m = static_cast<std::int64_t>(p) * p - 1;
      const auto zchar = restrict_character(t, chi_r(r, Level::P), center(Level::P));
      auto mod = [](std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; };

      const Rep VS = induce(t, center(Level::P), zchar, split_torus(Level::P));
      std::map<std::pair<std::int64_t, std::int64_t>, int> want_s;
      for (int i = 1; i <= p - 1; ++i)
        ++want_s[{mod(i, pm), mod(r - i, pm)}];
      std::map<std::pair<std::int64_t, std::int64_t>, int> got_s;
      for (std::int64_t a = 0; a < pm; ++a)
        for (std::int64_t d = 0; d < pm; ++d)
          if (auto m = hom_dim(character_rep(t, split_character(a, d)), VS, opts_.budgets.hom_unknowns))
            got_s[{a, d}] = static_cast<int>(m);

      const Rep VT = induce(t, center(Level::P), zchar, aniso_torus(Level::P));
      std::map<std::int64_t, int> want_t;
      for (int i = 0; i <= p; ++i)
        ++want_t[mod(r + static_cast<std::int64_t>(i) * pm, p2m)];
      std::map<std::int64_t, int> got_t;
      for (std::int64_t k = 0; k < p2m; ++k)
        if (auto m = hom_dim(character_rep(t, omega_p(k)), VT, opts_.budgets.hom_unknowns))
          got_t[k] = static_cast<int>(m);

      json s_list = json::array(), t_list = json::array();
      for (const auto& [ad, m] : got_s)
        s_list.push_back({{"a", ad.first}, {"d", ad.second}, {"mult", m}});
      for (const auto& [k, m] : got_t)
        t_list.push_back({{"k", k}, {"mult", m}});
      rep.details["S_p_characters"] = s_list;
      rep.details["T_p_characters"] = t_list;

      if (want_s.size() != static_cast<std::size_t>(p - 1))
        rep.fail("listed S_p characters are not distinct", json{{"distinct", want_s.size()}});
      if (want_t.size() != static_cast<std::size_t>(p + 1))
        rep.fail("listed T_p characters are not distinct", json{{"distinct", want_t.size()}});
      if (got_s != want_s)
        rep.fail("ind_{Z_p}^{S_p} splits differently", json{{"observed", s_list}});
      if (got_t != want_t)
        rep.fail("ind_{Z_p}^{T_p} splits differently", json{{"observed", t_list}});
    });
  }

  /// Status of an E check, computed once per (id, r).
  Status prerequisite_status(const std::string& id, std::int64_t r) const
  {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = prereq_.find({id, r});
      if (it != prereq_.end())
        return it->second;
    }
    const Status s = (id == "E1" ? check_E1(r) : check_E5(r)).status;
    std::lock_guard<std::mutex> lock(mu_);
    prereq_.emplace(std::make_pair(id, r), s);
    return s;
  }

 private:
  template <class Body>
  CheckReport run(const std::string& id, std::optional<std::int64_t> r, std::optional<int> part, Body&& body) const
  {
    CheckReport rep;
    rep.id = id;
    rep.p = t_->p();
    rep.f = t_->f();
    rep.r = r;
    rep.part = part;
    const auto start = std::chrono::steady_clock::now();
    try {
      body(rep);
    } catch (const BudgetExceeded& e) {
      rep.status = Status::Skipped;
      rep.reason = e.what();
    }
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
  }

  /// X = F_q \ F_p (f odd) or F_q \ F_p2 (f even).
  bool in_X(Elem x) const
  {
    const Level sub = t_->f() % 2 ? Level::P : Level::P2;
    return !t_->lies_in(x, Level::Q, sub);
  }

  void expect_orbit(CheckReport& rep, const OrbitDecomposition& d, std::size_t k, std::optional<std::uint32_t> rep_id,
                    std::uint64_t size, SubgroupKind stab) const
  {
    const FieldTower& t = *t_;
    if (k >= d.orbits.size()) {
      rep.fail("missing orbit", json{{"index", k}});
      return;
    }
    const auto& o = d.orbits[k];
    json w{{"rep", point_json(t, o.rep)}, {"size", o.size}, {"stab", o.stab.name()}};
    if (rep_id && point_id(t, o.rep) != *rep_id)
      rep.fail("unexpected orbit representative", w);
    if (o.size != size)
      rep.fail("orbit has the wrong size", w);
    if (!o.stab_listed || o.stab.kind != stab || o.stab.level != Level::P)
      rep.fail("stabilizer has the wrong kind", w);
    if (o.size * o.stab_order != gl2_order(static_cast<std::uint64_t>(t.p())))
      rep.fail("orbit-stabilizer product fails", w);
  }

  /// chi^gamma agrees with chi on Z_p; for the eta^ (B) or eps^ (T, f odd)
  /// orbit the twist is the expected torus character.
  void check_twists(CheckReport& rep, const DoubleCosetData& dc, bool is_borel) const
  {
    const FieldTower& t = *t_;
    const std::uint64_t q = t.q();
    std::vector<std::int64_t> rs{0, 1, static_cast<std::int64_t>(is_borel ? q - 2 : q * q - 2)};
    std::size_t evaluations = 0;
    for (auto r : rs) {
      const CharacterSpec chi = is_borel ? chi_r(r, Level::Q) : omega(r);
      for (std::size_t k = 0; k < dc.gammas.size(); ++k) {
        const auto& g = dc.gammas[k];
        const auto tw = twist_character(t, chi, g.gamma, g.intersection);
        const bool torus_orbit = (is_borel && k == 1 && t.f() % 2 == 0) || (!is_borel && k == 0 && t.f() % 2 == 1);
        for (const auto& h : g.intersection.elements) {
          std::optional<Elem> want;
          if (contains(t, center(Level::P), h))
            want = eval_character(t, chi, h);
          else if (torus_orbit)
            want = eval_character(t, omega_p(r), h);
          if (!want)
            continue;
          ++evaluations;
          if (eval_character(t, tw, h) != *want) {
            rep.fail("twisted character takes an unexpected value",
                     json{{"r", r}, {"gamma", mat_json(t, g.gamma)}, {"h", mat_json(t, h)}});
            return;
          }
        }
      }
    }
    rep.details["twist_evaluations"] = evaluations;
  }

  void record_degeneration(CheckReport& rep, std::uint64_t mult) const
  {
    rep.details["multiplicity"] = mult;
    if (t_->f() == 1) {
      rep.details["degenerate"] = true;
      if (mult != 0)
        rep.fail("f = 1 should leave no central blocks", json{{"multiplicity", mult}});
    }
  }

  bool audit(CheckReport& rep, const Sides& s, std::uint64_t lhs_expected) const
  {
    rep.details["dims"] = {{"lhs", s.lhs.dim()}, {"rhs", s.rhs.dim()}, {"formula", s.predicted_dim}};
    if (s.lhs.dim() != lhs_expected || s.rhs.dim() != lhs_expected || s.predicted_dim != lhs_expected) {
      rep.fail("dimension audit fails", json{{"lhs", s.lhs.dim()}, {"rhs", s.rhs.dim()},
                                             {"formula", s.predicted_dim}, {"expected", lhs_expected}});
      return false;
    }
    return true;
  }

  bool prerequisite(CheckReport& rep, const std::string& id, std::int64_t r) const
  {
    const Status s = prerequisite_status(id, r);
    rep.details["prerequisite"] = {{"id", id}, {"status", status_name(s)}};
    if (s == Status::Fail) {
      rep.fail(id + " failed for this r", json{{"prerequisite", id}, {"r", r}});
      return false;
    }
    if (s == Status::Skipped) {
      rep.skip(id + " was skipped for this r");
      return false;
    }
    return true;
  }

  static json fingerprint_witness(const FingerprintComparison& c)
  {
    json w{{"reason", c.reason}};
    if (c.class_index) {
      w["class"] = *c.class_index;
      w["lhs"] = poly_json(c.lhs);
      w["rhs"] = poly_json(c.rhs);
    }
    return w;
  }

  void compare_sides(CheckReport& rep, const Sides& s, std::uint64_t lhs_expected, bool with_iso) const
  {
    if (!rep.details.contains("dims") && !audit(rep, s, lhs_expected))
      return;
    const auto& cls = class_reps();
    const auto cmp = compare(fingerprint(s.lhs, cls), fingerprint(s.rhs, cls));
    rep.details["fingerprint_classes"] = cls.size();
    rep.details["fingerprint_equal"] = cmp.equal;
    if (!cmp.equal) {
      json w = fingerprint_witness(cmp);
      if (cmp.class_index)
        w["class_rep"] = mat_json(*t_, cls[*cmp.class_index]);
      rep.fail("fingerprints differ", w);
      return;
    }
    if (!with_iso)
      return;
    const auto iso = iso_probable(s.lhs, s.rhs, cls, opts_.iso_trials, opts_.seed, opts_.budgets.hom_unknowns);
    rep.details["iso"] = {{"verdict", verdict_name(iso.verdict)}, {"reason", iso.reason},
                          {"hom_dim", iso.hom_dim}, {"trials", iso.trials_used}};
    if (iso.verdict == IsoVerdict::NotIso || iso.verdict == IsoVerdict::Inconclusive)
      rep.fail("isomorphism not certified", json{{"verdict", verdict_name(iso.verdict)}, {"reason", iso.reason}});
  }

  const FieldTower* t_;
  VerifyOptions opts_;

  mutable std::once_flag gp_once_, cls_once_, st_once_;
  mutable std::vector<Mat2> gp_;
  mutable std::vector<Mat2> cls_;
  mutable Rep st_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<std::string, std::int64_t>, Status> prereq_;
};

enum class RPolicy { All, Sample, Explicit };

inline RPolicy parse_r_policy(const std::string& s)
{
  if (s == "all")
    return RPolicy::All;
  if (s == "sample")
    return RPolicy::Sample;
  if (s == "explicit")
    return RPolicy::Explicit;
  throw InvalidParameters("unknown r-policy '" + s + "'");
}

/// Exclusive upper bound of r for a check id.
inline std::int64_t r_bound(const FieldTower& t, const std::string& id)
{
  const auto q = static_cast<std::int64_t>(t.q());
  const auto p = static_cast<std::int64_t>(t.p());
  if (id == "E1" || id.rfind("T1", 0) == 0)
    return q - 1;
  if (id == "E5" || id.rfind("T2", 0) == 0)
    return q * q - 1;
  if (id == "SPLIT")
    return p * p - 1;
  return 0;
}

/// r values for one check id under a policy.
/// Sample: {0, 1, q-2, random} for the B_q family; at least eight values
/// including 0, q-1 and q+1 for the T_q family; everything for SPLIT.
inline std::vector<std::int64_t> r_values(const FieldTower& t, const std::string& id, RPolicy policy,
                                          const std::vector<std::int64_t>& explicit_r, std::uint64_t seed)
{
  const std::int64_t n = r_bound(t, id);
  std::vector<std::int64_t> out;
  if (n <= 0)
    return out;
  if (policy == RPolicy::Explicit) {
    for (auto r : explicit_r)
      if (r >= 0 && r < n)
        out.push_back(r);
    return out;
  }
  if (policy == RPolicy::All || id == "SPLIT") {
    for (std::int64_t r = 0; r < n; ++r)
      out.push_back(r);
    return out;
  }
  const auto q = static_cast<std::int64_t>(t.q());
  std::set<std::int64_t> s;
  std::size_t target = 0;
  if (id == "E1" || id.rfind("T1", 0) == 0) {
    s = {0, 1, q - 2};
    target = s.size() + 1;
  } else {
    s = {0, 1, q - 1, q + 1, n - 1};
    target = 8;
  }
  std::erase_if(s, [&](std::int64_t r) { return r < 0 || r >= n; });
  target = std::min<std::size_t>(target, static_cast<std::size_t>(n));
  std::mt19937_64 rng(seed ^ (std::hash<std::string>{}(id) * 0x9e3779b97f4a7c15ull));
  std::uniform_int_distribution<std::int64_t> pick(0, n - 1);
  while (s.size() < target)
    s.insert(pick(rng));
  return {s.begin(), s.end()};
}

struct PlannedCheck {
  std::string id;
  std::optional<std::int64_t> r;
  std::function<CheckReport()> run;
};

/// One entry per (id, r); ids must come from all_check_ids().
inline std::vector<PlannedCheck> plan_checks(const Verifier& v, const std::vector<std::string>& ids, RPolicy policy,
                                             const std::vector<std::int64_t>& explicit_r)
{
  const auto& known = all_check_ids();
  std::vector<std::string> chosen;
  for (const auto& k : known)
    if (std::find(ids.begin(), ids.end(), k) != ids.end() || std::find(ids.begin(), ids.end(), "all") != ids.end())
      chosen.push_back(k);
  for (const auto& id : ids)
    if (id != "all" && std::find(known.begin(), known.end(), id) == known.end())
      throw InvalidParameters("unknown check id '" + id + "'");

  std::vector<PlannedCheck> out;
  const Verifier* vp = &v;
  for (const auto& id : chosen) {
    if (r_bound(v.tower(), id) == 0) {
      std::function<CheckReport()> fn;
      if (id == "L1") fn = [vp] { return vp->check_L1(); };
      else if (id == "L2") fn = [vp] { return vp->check_L2(); };
      else if (id == "L3") fn = [vp] { return vp->check_L3(); };
      else if (id == "L4") fn = [vp] { return vp->check_L4(); };
      else if (id == "P1") fn = [vp] { return vp->check_P1(); };
      else if (id == "P2") fn = [vp] { return vp->check_P2(); };
      else if (id == "R6") fn = [vp] { return vp->check_R6(); };
      else if (id == "MACKEY.B") fn = [vp] { return vp->check_mackey(SubgroupKind::Borel); };
      else if (id == "MACKEY.T") fn = [vp] { return vp->check_mackey(SubgroupKind::AnisoTorus); };
      else if (id == "GJ") fn = [vp] { return vp->check_GJ(); };
      out.push_back({id, std::nullopt, fn});
      continue;
    }
    for (auto r : r_values(v.tower(), id, policy, explicit_r, v.options().seed)) {
      std::function<CheckReport()> fn;
      if (id == "E1") fn = [vp, r] { return vp->check_E1(r); };
      else if (id == "E5") fn = [vp, r] { return vp->check_E5(r); };
      else if (id == "T1.1") fn = [vp, r] { return vp->check_T1(r, 1); };
      else if (id == "T1.2") fn = [vp, r] { return vp->check_T1(r, 2); };
      else if (id == "T2.1") fn = [vp, r] { return vp->check_T2(r, 1); };
      else if (id == "T2.2") fn = [vp, r] { return vp->check_T2(r, 2); };
      else if (id == "SPLIT") fn = [vp, r] { return vp->check_splittings(r); };
      out.push_back({id, r, fn});
    }
  }
  return out;
}

/// Runs the plan on `jobs` threads. Reports come back in plan order when
/// `deterministic_order` is set, otherwise in completion order. The first
/// exception thrown by a check is rethrown after the join.
inline std::vector<CheckReport> run_checks(const std::vector<PlannedCheck>& plan, unsigned jobs,
                                           bool deterministic_order,
                                           const std::function<void(const CheckReport&)>& on_done = {})
{
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, plan.size()))));
  std::vector<std::optional<CheckReport>> slots(plan.size());
  std::vector<CheckReport> completed;
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= plan.size())
        return;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (error)
          return;
      }
      try {
        CheckReport rep = plan[i].run();
        std::lock_guard<std::mutex> lock(mu);
        if (on_done)
          on_done(rep);
        if (deterministic_order)
          slots[i] = std::move(rep);
        else
          completed.push_back(std::move(rep));
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error)
          error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < jobs; ++k)
    pool.emplace_back(worker);
  worker();
  for (auto& th : pool)
    th.join();
  if (error)
    std::rethrow_exception(error);
  if (!deterministic_order)
    return completed;
  std::vector<CheckReport> out;
  for (auto& s : slots)
    out.push_back(std::move(*s));
  return out;
}

} // namespace gl2res

#endif // GL2RES_VERIFY_HPP
