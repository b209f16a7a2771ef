// conekit command-line front end.
//
// Exit codes: 0 classical / pass, 1 non-classical / verify failure,
// 2 invalid input, 3 inconclusive, 4 resource guard, 5 wrong verdict for
// the requested artifact.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "conekit/approximation.hpp"
#include "conekit/oracle.hpp"
#include "conekit/report.hpp"

using namespace conekit;
using nlohmann::json;

namespace {

enum Exit { kClassical = 0, kNonClassical = 1, kInvalid = 2, kInconclusive = 3, kResource = 4, kWrongVerdict = 5 };

struct Common {
  bool exact = false;
  bool floating = false;
  double tol = Tolerances{}.verdict_tol;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;
  bool timings = false;
};

void add_common(CLI::App* cmd, Common& c) {
  auto* ex = cmd->add_flag("--exact", c.exact, "Rational arithmetic (requires exact scenario data)");
  cmd->add_flag("--float", c.floating, "Floating-point arithmetic")->excludes(ex);
  cmd->add_option("--tol", c.tol, "Verdict tolerance for floating-point runs")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "Seed for sampled approximations");
  cmd->add_option("--threads", c.threads, "Worker threads for vertex enumeration")->check(CLI::Range(1, 256));
  cmd->add_option("--out", c.out, "Write JSON here instead of stdout");
  cmd->add_flag("--timings", c.timings, "Include per-stage timings in the report");
}

RunOptions run_options(const Common& c) {
  RunOptions o;
  o.arithmetic = c.exact ? ArithmeticPolicy::Exact : c.floating ? ArithmeticPolicy::Float : ArithmeticPolicy::Auto;
  o.classify.tol.verdict_tol = c.tol;
  o.classify.threads = c.threads;
  o.classify.max_tensor_dim = max_tensor_dim_from_env();
  o.timings = c.timings;
  o.seed = c.seed;
  return o;
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << dump_json(j);
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << dump_json(j);
}

int exit_for(VerdictKind k) {
  switch (k) {
    case VerdictKind::Classical:
      return kClassical;
    case VerdictKind::NonClassical:
      return kNonClassical;
    default:
      return kInconclusive;
  }
}

int exit_for(ApproxKind k) {
  switch (k) {
    case ApproxKind::CertifiedClassical:
      return kClassical;
    case ApproxKind::WitnessedNonClassical:
      return kNonClassical;
    default:
      return kInconclusive;
  }
}

ComplexMatrix load_state(const std::string& arg, int& local_dim) {
  if (arg == "builtin:bell") {
    local_dim = 2;
    return bell_state();
  }
  if (arg == "builtin:product") {
    local_dim = 2;
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = 1;
    return m;
  }
  if (arg == "builtin:mixed") {
    local_dim = 2;
    return ComplexMatrix::Identity(4, 4) / 4.0;
  }
  std::ifstream f(arg);
  if (!f) throw ValidationError("cannot open state file " + arg);
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("state file is not valid JSON: ") + e.what());
  }
  local_dim = doc.value("local_dim", 2);
  return parse_matrix(doc.at("state"));
}

struct ApproxArgs {
  int max_level = 3;
  std::size_t inner_rays = 6;
  std::size_t outer_faces = 6;
  std::string mode = "auto";
  int local_dim = 0;
};

void add_approx(CLI::App* cmd, ApproxArgs& a) {
  cmd->add_option("--max-level", a.max_level, "Highest hierarchy level")->check(CLI::Range(1, 64));
  cmd->add_option("--inner-rays", a.inner_rays, "Sampled rays per input cone at level 1");
  cmd->add_option("--outer-faces", a.outer_faces, "Sampled faces per input cone at level 1");
}

ApproxSchedule schedule_for(const ApproxArgs& a, const Common& c) {
  ApproxSchedule s;
  s.inner_rays = a.inner_rays;
  s.outer_faces = a.outer_faces;
  s.seed = c.seed;
  return s;
}

int run_entangle(const std::string& arg, const ApproxArgs& a, const Common& c) {
  int d = 2;
  const auto state = load_state(arg, d);
  if (a.local_dim > 0) d = a.local_dim;
  const auto opts = run_options(c);
  const auto sched = schedule_for(a, c);
  const auto v = entanglement_check(state, d, a.max_level, sched, opts.classify);
  ApproxScenario as;
  as.name = arg;
  auto j = approx_report(as, v, sched, a.max_level, "entanglement");
  j["interpretation"] = v.kind == ApproxKind::WitnessedNonClassical ? "entangled"
                        : v.kind == ApproxKind::CertifiedClassical  ? "separable"
                                                                    : "undecided";
  emit(j, c.out);
  std::cerr << "entanglement: " << j["interpretation"].get<std::string>() << " (level " << v.level << ")\n";
  return exit_for(v.kind);
}

int run_approx(const std::string& arg, const ApproxArgs& a, const Common& c) {
  if (a.mode == "entanglement") return run_entangle(arg, a, c);
  ApproxMode mode = ApproxMode::Auto;
  if (a.mode == "certify")
    mode = ApproxMode::Certify;
  else if (a.mode == "witness")
    mode = ApproxMode::Witness;
  const auto as = resolve_approx_scenario(arg);
  const auto opts = run_options(c);
  const auto sched = schedule_for(a, c);
  const auto v = hierarchy(as, a.max_level, sched, opts.classify, mode);
  emit(approx_report(as, v, sched, a.max_level, a.mode), c.out);
  std::cerr << "approx: " << to_string(v.kind) << " (level " << v.level << ")\n";
  return exit_for(v.kind);
}

Scenario load(const std::string& arg, const Common& c) {
  const auto o = run_options(c);
  return resolve_scenario(arg, o.arithmetic, o.classify.tol);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conekit: classical-model and witness search for prepare-and-measure scenarios"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  Common c;
  ApproxArgs aa;
  std::string scenario, artifact;
  bool swap = false, use_oracle = false, force_approx = false;

  auto* inspect = app.add_subcommand("inspect", "Reduced space, cone statistics and probability table");
  inspect->add_option("scenario", scenario, "Scenario file or builtin:<name>")->required();
  add_common(inspect, c);

  auto* check = app.add_subcommand("check", "Decide whether the scenario admits a classical model");
  check->add_option("scenario", scenario, "Scenario file or builtin:<name>")->required();
  add_common(check, c);
  check->add_flag("--swap-reduced", swap, "Cross-check on the swapped reduced space");
  check->add_flag("--oracle", use_oracle, "Cross-check with the brute-force oracle");
  check->add_flag("--approx", force_approx, "Use the approximation hierarchy");
  add_approx(check, aa);

  auto* model = app.add_subcommand("model", "Write a classical model artifact");
  model->add_option("scenario", scenario, "Scenario file or builtin:<name>")->required();
  add_common(model, c);

  auto* witness = app.add_subcommand("witness", "Write a non-classicality witness artifact");
  witness->add_option("scenario", scenario, "Scenario file or builtin:<name>")->required();
  add_common(witness, c);

  auto* approx = app.add_subcommand("approx", "Inner/outer approximation hierarchy");
  approx->add_option("scenario", scenario, "Scenario, builtin:qubit_full or builtin:depolarized:qubit_full:eta")
      ->required();
  add_common(approx, c);
  add_approx(approx, aa);
  approx->add_option("--mode", aa.mode, "auto, certify, witness or entanglement")
      ->check(CLI::IsMember({"auto", "certify", "witness", "entanglement"}));
  approx->add_option("--local-dim", aa.local_dim, "Local dimension for --mode entanglement");

  auto* entangle = app.add_subcommand("entangle", "Entanglement test of a bipartite state");
  entangle->add_option("state", scenario, "State file or builtin:bell|product|mixed")->required();
  add_common(entangle, c);
  add_approx(entangle, aa);
  entangle->add_option("--local-dim", aa.local_dim, "Local dimension (2 or 3)");

  auto* verify = app.add_subcommand("verify", "Re-check a model or witness artifact");
  verify->add_option("artifact", artifact, "Artifact JSON")->required();
  verify->add_option("scenario", scenario, "Scenario file or builtin:<name>")->required();
  add_common(verify, c);
  verify->add_flag("--oracle", use_oracle, "Also compare the artifact kind with the oracle verdict");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*inspect) {
      const auto sc = load(scenario, c);
      const auto j = inspect_report(sc, run_options(c));
      std::cerr << (sc.mode == ScenarioMode::Gpt ? "GPT scenario" : "quantum scenario") << ": dim_R = " << j["dim_R"]
                << ", N_s = " << j["N_s"] << ", N_e = " << j["N_e"] << "\n";
      emit(j, c.out);
      return kClassical;
    }
    if (*check) {
      if (force_approx) return run_approx(scenario, aa, c);
      auto o = run_options(c);
      o.oracle = use_oracle;
      o.swap_check = swap;
      const auto out = run_check(load(scenario, c), o);
      emit(out.report, c.out);
      std::cerr << "verdict: " << to_string(out.kind) << " (dim_R = " << out.report["dim_R"] << ")\n";
      for (const auto& m : out.messages) std::cerr << "warning: " << m << "\n";
      if (!out.messages.empty()) return kInconclusive;
      return exit_for(out.kind);
    }
    if (*model || *witness) {
      const bool want_model = model->parsed();
      const auto out = run_check(load(scenario, c), run_options(c));
      const auto wanted = want_model ? VerdictKind::Classical : VerdictKind::NonClassical;
      if (out.kind != wanted) {
        std::cerr << "verdict is " << to_string(out.kind) << "; no " << (want_model ? "model" : "witness")
                  << " exists\n";
        return kWrongVerdict;
      }
      emit(want_model ? out.model_artifact : out.witness_artifact, c.out);
      std::cerr << (want_model ? "model written" : "witness written") << "\n";
      return kClassical;
    }
    if (*approx) return run_approx(scenario, aa, c);
    if (*entangle) return run_entangle(scenario, aa, c);
    if (*verify) {
      std::ifstream f(artifact);
      if (!f) throw ValidationError("cannot open artifact " + artifact);
      json doc;
      try {
        doc = json::parse(f);
      } catch (const json::parse_error& e) {
        throw ValidationError(std::string("artifact is not valid JSON: ") + e.what());
      }
      const auto sc = load(scenario, c);
      auto o = run_options(c);
      auto vr = verify_artifact(doc, sc, o.classify.tol);
      json j = {{"artifact", vr.kind}, {"pass", vr.ok}, {"details", vr.details}};
      if (!vr.ok) j["first_violation"] = vr.first_violation;
      if (use_oracle && vr.ok) {
        const auto ok = oracle::oracle_classify_auto(sc, o.classify.tol);
        const bool agrees = (vr.kind == "model") == (ok == VerdictKind::Classical);
        j["oracle"] = {{"verdict", to_string(ok)}, {"agrees", agrees}};
        if (!agrees) {
          vr.ok = false;
          j["pass"] = false;
          j["first_violation"] = "oracle verdict " + to_string(ok) + " contradicts the artifact";
        }
      }
      emit(j, c.out);
      std::cerr << (vr.ok ? "pass" : "fail: " + j["first_violation"].get<std::string>()) << "\n";
      return vr.ok ? kClassical : kNonClassical;
    }
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const PreconditionError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInconclusive;
  }
  return kInvalid;
}
