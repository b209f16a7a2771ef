// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "conekit/approximation.hpp"
#include "conekit/oracle.hpp"
#include "conekit/report.hpp"
#include "test_support.hpp"

using namespace conekit;
using testsupport::Gen;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Named {
  std::string name;
  Scenario sc;
};

const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names = {
      "classical_simplex:1", "classical_simplex:2", "classical_simplex:3", "classical_simplex:4",
      "qubit_six_state",     "qubit_trine",         "gpt_square",          "gpt_simplex:2",
      "gpt_simplex:3",       "gpt_simplex:4",       "qubit_full:4:4",      "qubit_full:6:6",
      "qubit_full:8:8",      "qutrit_full",         "depolarized:qubit_six_state:0",
      "depolarized:qubit_six_state:1/4", "depolarized:qubit_six_state:1/2",
      "depolarized:qubit_six_state:3/4", "depolarized:qubit_six_state:1", "depolarized:qubit_trine:1/2"};
  return names;
}

std::vector<Named> corpus() {
  std::vector<Named> out;
  for (const auto& n : corpus_names()) out.push_back({n, resolve_scenario("builtin:" + n)});
  return out;
}

bool fits(const Scenario& sc) {
  try {
    const auto r = use_exact(sc, ArithmeticPolicy::Auto) ? scenario_reduced_space<Rational>(sc, false).dim
                                                         : scenario_reduced_space<double>(sc, false).dim;
    return static_cast<std::size_t>(r * r) <= ClassifyOptions{}.max_tensor_dim;
  } catch (const Error&) {
    return false;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(CONEKIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

// ---------------------------------------------------------------------------

Outcome reduced_scalar_invariance() {
  Gen g(20240601);
  double worst = 0;
  int count = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = g.integer(2, 3);
    // at most 8 states and 2 * 3 + unit + zero = 8 effects
    const auto sc =
        load_scenario(testsupport::random_quantum_doc(g, d, g.integer(1, 8), g.integer(1, 3), trial % 3 == 0));
    const auto r = scenario_reduced_space<double>(sc, false);
    for (std::size_t k = 0; k < sc.states.size(); ++k)
      for (std::size_t l = 0; l < sc.effects.size(); ++l) {
        const double direct = testsupport::born(element_matrix(sc, sc.states[k]), element_matrix(sc, sc.effects[l]));
        worst = std::max(worst, std::abs(direct - reduced_inner(r, r.states[k], r.effects[l])));
      }
    ++count;
  }
  return {worst <= 1e-9, std::to_string(count) + " scenarios, max deviation " + fmt(worst)};
}

std::vector<ConeV<Rational>> random_cones() {
  Gen g(777);
  std::vector<ConeV<Rational>> out;
  for (int k = 0; k < 200; ++k) {
    const int d = g.integer(2, 5);
    out.push_back(testsupport::random_cone(g, d, g.integer(d, 12)));
  }
  return out;
}

Outcome enumeration_vs_brute_force() {
  int bad = 0;
  std::size_t rays = 0;
  for (const auto& c : random_cones()) {
    const auto p = vertex_enumeration(c);
    rays += p.rays.size();
    if (p.rays != oracle::brute_force_polar_rays(c)) ++bad;
  }
  return {bad == 0, "200 cones, " + std::to_string(rays) + " polar rays, " + std::to_string(bad) + " mismatches"};
}

Outcome double_polar() {
  int bad = 0;
  for (const auto& c : random_cones()) {
    const auto back = vertex_enumeration(vertex_enumeration(c));
    if (back.rays != extreme_ray_filter(c).rays || !double_polar_check(c)) ++bad;
  }
  return {bad == 0, "200 cones, " + std::to_string(bad) + " failures"};
}

Outcome classical_corpus() {
  bool ok = true;
  std::string detail;
  for (int d = 2; d <= 4; ++d) {
    const auto sc = builtin_scenario("classical_simplex:" + std::to_string(d));
    const auto res = classify_scenario<Rational>(sc);
    const auto table = probability_table(sc);
    double worst = 0;
    std::size_t card = 0;
    if (res.verdict.kind == VerdictKind::Classical && res.verdict.model) {
      card = res.verdict.model->cardinality();
      for (std::size_t k = 0; k < sc.states.size(); ++k)
        for (std::size_t l = 0; l < sc.effects.size(); ++l) {
          const double v =
              evaluate_model(*res.verdict.model, res.r.states[k], res.r.effects[l], res.r.gram()).convert_to<double>();
          worst = std::max(worst, std::abs(v - table[k][l]));
        }
    }
    const bool good = res.verdict.kind == VerdictKind::Classical && card == static_cast<std::size_t>(d) &&
                      worst <= 1e-9;
    ok = ok && good;
    detail += "d=" + std::to_string(d) + ": " + to_string(res.verdict.kind) + " n=" + std::to_string(card) +
              " err=" + fmt(worst) + "; ";
  }
  return {ok, detail};
}

Outcome cardinality_bounds() {
  int classical = 0, violations = 0, limited = 0;
  std::string detail;
  for (const auto& [name, sc] : corpus()) {
    try {
      RunOptions o;
      const auto out = run_check(sc, o);
      if (out.kind != VerdictKind::Classical) continue;
      ++classical;
      const std::size_t n = out.report["model"]["cardinality"].get<std::size_t>();
      const std::size_t dim = out.report["dim_R"].get<std::size_t>();
      if (n < dim || n > dim * dim) {
        ++violations;
        detail += name + " n=" + std::to_string(n) + " dim=" + std::to_string(dim) + "; ";
      }
    } catch (const ResourceError&) {
      ++limited;
    }
  }
  return {violations == 0, std::to_string(classical) + " classical verdicts, " + std::to_string(violations) +
                               " violations, " + std::to_string(limited) + " above the tensor size limit; " +
                               detail};
}

/// A coarse-graining of the first two effects of the first group with at least two.
std::optional<std::vector<int>> coarse_indices(const Scenario& sc) {
  for (const auto& g : sc.povm_groups)
    if (g.size() >= 2) return std::vector<int>{g[0], g[1]};
  return std::nullopt;
}

template <class S>
bool same_polars(const Scenario& a, const Scenario& b) {
  const auto ra = scenario_reduced_space<S>(a, false), rb = scenario_reduced_space<S>(b, false);
  if (ra.dim != rb.dim) return false;
  return polar_state_cone(ra).rays == polar_state_cone(rb).rays &&
         polar_effect_cone(ra).rays == polar_effect_cone(rb).rays;
}

Outcome invariance_suite() {
  std::string detail;
  int cg_checked = 0, cg_bad = 0, anc_checked = 0, anc_bad = 0, sw_checked = 0, sw_bad = 0, sw_counted = 0;
  for (const auto& [name, sc] : corpus()) {
    if (!fits(sc)) continue;
    const bool exact = use_exact(sc, ArithmeticPolicy::Auto);
    if (const auto idx = coarse_indices(sc)) {
      const auto cg = coarse_grain_augment(sc, *idx);
      ++cg_checked;
      const bool same = exact ? same_polars<Rational>(sc, cg) : same_polars<double>(sc, cg);
      if (!same) {
        ++cg_bad;
        detail += "coarse-grain " + name + "; ";
      }
    }
    const auto base = classify_kind(sc);
    if (sc.mode == ScenarioMode::Quantum && sc.hilbert_dim <= 2) {
      for (int k : {2, 3}) {
        const auto emb = ancilla_embed(sc, k);
        ++anc_checked;
        const int d0 = exact ? scenario_reduced_space<Rational>(sc, false).dim
                             : scenario_reduced_space<double>(sc, false).dim;
        const int d1 = exact ? scenario_reduced_space<Rational>(emb, false).dim
                             : scenario_reduced_space<double>(emb, false).dim;
        if (classify_kind(emb) != base || d0 != d1) {
          ++anc_bad;
          detail += "ancilla " + std::to_string(k) + " " + name + "; ";
        }
      }
    }
    // Swapped space: full witness enumeration where the Sep generator count
    // is within the enumeration budget, verdict comparison otherwise.
    auto compare = [&](auto tag) {
      using S = decltype(tag);
      ClassifyOptions o;
      const auto plain = classify_scenario<S>(sc, o);
      o.swapped = true;
      const auto swapped = classify_scenario<S>(sc, o);
      ++sw_checked;
      bool ok = plain.verdict.kind == swapped.verdict.kind;
      const std::size_t budget = ClassifyOptions{}.enumerate_budget;
      if (plain.sep.rays.size() <= budget && swapped.sep.rays.size() <= budget) {
        ClassifyOptions en;
        en.strategy = WitnessStrategy::Enumerate;
        const auto a = classify_scenario<S>(sc, en);
        en.swapped = true;
        const auto b = classify_scenario<S>(sc, en);
        ++sw_counted;
        ok = ok && a.witnesses && b.witnesses && a.witnesses->rays.size() == b.witnesses->rays.size();
      }
      if (!ok) {
        ++sw_bad;
        detail += "swapped " + name + "; ";
      }
    };
    if (exact)
      compare(Rational{});
    else
      compare(double{});
  }
  const bool pass = cg_bad == 0 && anc_bad == 0 && sw_bad == 0;
  return {pass, "coarse-grain " + std::to_string(cg_checked - cg_bad) + "/" + std::to_string(cg_checked) +
                    ", ancilla " + std::to_string(anc_checked - anc_bad) + "/" + std::to_string(anc_checked) +
                    ", swapped " + std::to_string(sw_checked - sw_bad) + "/" + std::to_string(sw_checked) + " (" +
                    std::to_string(sw_counted) + " with witness counts); " + detail};
}

Outcome oracle_agreement() {
  std::string detail;
  int checked = 0, bad = 0;
  for (const auto& [name, sc] : corpus()) {
    if (!fits(sc)) continue;
    const int dim = use_exact(sc, ArithmeticPolicy::Auto) ? scenario_reduced_space<Rational>(sc, false).dim
                                                         : scenario_reduced_space<double>(sc, false).dim;
    if (dim > oracle::kMaxReducedDim) continue;
    const auto main = classify_kind(sc);
    const auto orc = oracle::oracle_classify_auto(sc);
    ++checked;
    if (main != orc) {
      ++bad;
      detail += name + " main=" + to_string(main) + " oracle=" + to_string(orc) + "; ";
    }
  }
  // Depolarization sweep, largest eta first.
  const std::vector<Rational> etas{1, Rational(3, 4), Rational(1, 2), Rational(1, 4), 0};
  const auto six = builtin_scenario("qubit_six_state");
  bool monotone = true, included = true, seen_classical = false;
  std::string sweep;
  for (std::size_t i = 0; i < etas.size(); ++i) {
    const auto sc = depolarized(six, etas[i]);
    const auto kind = classify_kind(sc);
    sweep += to_string(etas[i]) + ":" + to_string(kind) + " ";
    if (seen_classical && kind != VerdictKind::Classical) monotone = false;
    seen_classical = seen_classical || kind == VerdictKind::Classical;
    if (kind != oracle::oracle_classify_auto(sc)) {
      ++bad;
      detail += "sweep eta=" + to_string(etas[i]) + "; ";
    }
    // states at this eta lie in the cone of the states at the previous eta
    if (i > 0) {
      const auto prev = ambient_data<Rational>(depolarized(six, etas[i - 1]));
      const auto cur = ambient_data<Rational>(sc);
      const auto cone = make_cone<Rational>(static_cast<int>(prev.metric.size()), prev.states);
      for (const auto& s : cur.states) included = included && membership(s, cone).inside;
    }
  }
  const bool pass = bad == 0 && monotone && included;
  return {pass, std::to_string(checked) + " corpus scenarios, sweep [" + sweep + "] monotone=" +
                    (monotone ? "yes" : "no") + " inclusion=" + (included ? "yes" : "no") + "; " + detail};
}

Outcome witness_soundness() {
  std::string detail;
  int emitted = 0, verified = 0, rejected = 0, mutations = 0;
  std::vector<Named> cases;
  for (auto& n : corpus()) cases.push_back(std::move(n));
  Gen g(99);
  for (int k = 0; k < 30; ++k) {
    const bool sharp = k % 2 == 1;
    cases.push_back({"random qubit " + std::to_string(k),
                     load_scenario(testsupport::random_quantum_doc(g, 2, g.integer(2, 6), g.integer(1, 3), false,
                                                                   sharp))});
  }
  for (const auto& [name, sc] : cases) {
    if (!fits(sc)) continue;
    for (bool swapped : {false, true}) {
      RunOptions o;
      o.classify.swapped = swapped;
      const auto out = run_check(sc, o);
      if (out.kind != VerdictKind::NonClassical) continue;
      ++emitted;
      const auto& art = out.witness_artifact;
      const auto vr = verify_artifact(art, sc);
      if (vr.ok) {
        ++verified;
      } else {
        detail += name + ": " + vr.first_violation + "; ";
      }
      const bool exact = art.value("arithmetic", "") == "exact";
      auto num = [&](const json& x) { return exact ? parse_rational(x.get<std::string>()) : Rational(0); };
      auto put = [&](json& x, const Rational& q, double f) {
        if (exact)
          x = to_string(q);
        else
          x = f;
      };
      auto flipped = art;
      for (auto& x : flipped["witness"]) put(x, -num(x), exact ? 0.0 : -x.get<double>());
      auto scaled = art;
      for (auto& x : scaled["witness"]) {
        const bool nonzero = exact ? !num(x).is_zero() : x.get<double>() != 0;
        if (!nonzero) continue;
        put(x, num(x) * 3, exact ? 0.0 : x.get<double>() * 3);
        break;
      }
      for (const auto* m : {&flipped, &scaled}) {
        ++mutations;
        if (!verify_artifact(*m, sc).ok) ++rejected;
        else detail += name + ": mutation accepted; ";
      }
    }
  }
  // the command-line verifier on the builtin non-classical scenarios
  int cli_ok = 0, cli_total = 0;
  for (const std::string s : {"gpt_square", "qubit_full:8:8"}) {
    ++cli_total;
    const std::string art = "acceptance_witness.json";
    if (cli("witness builtin:" + s + " --out " + art) == 0 && cli("verify " + art + " builtin:" + s) == 0) ++cli_ok;
    std::remove(art.c_str());
  }
  const bool pass = emitted > 0 && verified == emitted && rejected == mutations && cli_ok == cli_total;
  return {pass, std::to_string(verified) + "/" + std::to_string(emitted) + " witnesses verified, " +
                    std::to_string(rejected) + "/" + std::to_string(mutations) + " mutations rejected, cli " +
                    std::to_string(cli_ok) + "/" + std::to_string(cli_total) + "; " + detail};
}

Outcome entanglement_recast() {
  const auto v = entanglement_check(bell_state(), 2, 3, ApproxSchedule{});
  if (v.kind != ApproxKind::WitnessedNonClassical) return {false, "Bell state not witnessed within 3 levels"};
  // W = sum_ab w_ab B_a (x) B_b, checked against the coordinate map
  const auto hb = hermitian_basis(2);
  ComplexMatrix w = ComplexMatrix::Zero(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) w += v.witness[a * 4 + b] * Eigen::kroneckerProduct(hb.basis[a], hb.basis[b]).eval();
  const auto back = bipartite_coords(w, 2);
  double coord_err = 0;
  for (std::size_t k = 0; k < back.size(); ++k) coord_err = std::max(coord_err, std::abs(back[k] - v.witness[k]));
  const double on_bell = (w * bell_state()).trace().real();
  Gen g(314159);
  double worst = 1e300;
  auto pure = [&] {
    Eigen::VectorXcd x(2);
    for (int i = 0; i < 2; ++i) x(i) = {g.gaussian(), g.gaussian()};
    return Eigen::VectorXcd(x / x.norm());
  };
  for (int k = 0; k < 100000; ++k) {
    const Eigen::VectorXcd ab = Eigen::kroneckerProduct(pure(), pure()).eval();
    worst = std::min(worst, (ab.adjoint() * w * ab)(0, 0).real());
  }
  // separable inputs must not be witnessed
  const auto mixed = entanglement_check(ComplexMatrix::Identity(4, 4) / 4.0, 2, 3, ApproxSchedule{});
  const bool pass = v.level <= 3 && on_bell < 0 && coord_err < 1e-12 && worst >= -1e-8 &&
                    mixed.kind != ApproxKind::WitnessedNonClassical;
  return {pass, "level " + std::to_string(v.level) + ", Tr[W rho_Bell] = " + fmt(on_bell) +
                    ", min over 1e5 product states = " + fmt(worst) + ", mixed state " + to_string(mixed.kind)};
}

std::string corpus_run(int threads) {
  std::string all;
  for (const auto& [name, sc] : corpus()) {
    RunOptions o;
    o.seed = 42;
    o.classify.threads = threads;
    all += "== " + name + "\n";
    try {
      const auto out = run_check(sc, o);
      all += dump_json(out.report);
      if (out.kind == VerdictKind::Classical) all += dump_json(out.model_artifact);
      if (out.kind == VerdictKind::NonClassical) all += dump_json(out.witness_artifact);
    } catch (const Error& e) {
      all += std::string("error: ") + e.what() + "\n";
    }
  }
  ApproxSchedule sch;
  sch.seed = 42;
  const auto as = resolve_approx_scenario("builtin:depolarized:qubit_full:1/2");
  ClassifyOptions co;
  co.threads = threads;
  all += dump_json(approx_report(as, hierarchy(as, 2, sch, co), sch, 2, "auto"));
  return all;
}

Outcome determinism() {
  const auto a = corpus_run(1), b = corpus_run(4);
  return {a == b, std::to_string(a.size()) + " bytes per run, " + (a == b ? "identical" : "different")};
}

}  // namespace

int main() {
  struct Criterion {
    std::string title;
    double limit_s;  // 0 = no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"reduced-scalar invariance", 10, reduced_scalar_invariance},
      {"vertex enumeration vs brute force", 60, enumeration_vs_brute_force},
      {"double polar identity", 0, double_polar},
      {"classical corpus", 30, classical_corpus},
      {"cardinality bounds", 0, cardinality_bounds},
      {"invariance suite", 120, invariance_suite},
      {"main vs oracle agreement", 300, oracle_agreement},
      {"witness soundness", 0, witness_soundness},
      {"entanglement recast", 120, entanglement_recast},
      {"determinism across thread counts", 0, determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      o.pass = false;
      o.detail += " runtime above " + fmt(c.limit_s) + " s";
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << c.title << " (" << fmt(secs) << " s): "
              << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
