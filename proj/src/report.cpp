#include "conekit/report.hpp"

#include "conekit/oracle.hpp"

namespace conekit {

using nlohmann::json;

namespace {

json scalar(const Rational& x) { return to_string(x); }
json scalar(double x) { return x; }

template <class S>
json vec_json(const Vec<S>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(scalar(x));
  return a;
}

template <class S>
json mat_json(const Mat<S>& m) {
  json a = json::array();
  for (const auto& v : m) a.push_back(vec_json(v));
  return a;
}

template <class S>
S read_scalar(const json& j) {
  if constexpr (Arith<S>::exact) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw ValidationError("exact artifact holds a non-exact number");
  } else {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_rational(j.get<std::string>()).template convert_to<double>();
    throw ValidationError("artifact number has an unexpected type");
  }
}

template <class S>
Vec<S> read_vec(const json& j) {
  if (!j.is_array()) throw ValidationError("artifact vector is not an array");
  Vec<S> v;
  for (const auto& x : j) v.push_back(read_scalar<S>(x));
  return v;
}

template <class S>
Mat<S> read_mat(const json& j) {
  if (!j.is_array()) throw ValidationError("artifact matrix is not an array");
  Mat<S> m;
  for (const auto& r : j) m.push_back(read_vec<S>(r));
  return m;
}

template <class S>
const char* arithmetic_name() {
  return Arith<S>::exact ? "exact" : "float";
}

const char* coordinate_name(const Scenario& sc, bool exact) {
  if (sc.mode == ScenarioMode::Gpt) return "gpt";
  return exact ? "gell-mann-unnormalized" : "gell-mann-orthonormal";
}

json header(const Scenario& sc, const char* arithmetic) {
  json j;
  j["tool"] = "conekit";
  j["version"] = tool_version();
  j["scenario_digest"] = scenario_digest(sc);
  j["arithmetic"] = arithmetic;
  j["mode"] = sc.mode == ScenarioMode::Quantum ? "quantum" : "gpt";
  return j;
}

template <class S>
json model_json(const ClassicalModel<S>& m) {
  json j;
  j["cardinality"] = m.cardinality();
  json f = json::array(), s = json::array();
  for (const auto& p : m.pairs) {
    f.push_back(vec_json(p.F));
    s.push_back(vec_json(p.sigma));
  }
  j["F"] = f;
  j["sigma"] = s;
  return j;
}

template <class S>
json basis_json(const ReducedSpace<S>& r, json& into) {
  into["reduced_basis"] = mat_json(r.subspace.basis);
  into["gram"] = vec_json(r.gram());
  into["swapped"] = r.swapped;
  return into;
}

template <class S>
json inspect_impl(const Scenario& sc, const RunOptions& opts) {
  json j = header(sc, arithmetic_name<S>());
  const auto& tol = opts.classify.tol;
  const auto r = scenario_reduced_space<S>(sc, false, tol);
  j["coordinates"] = coordinate_name(sc, Arith<S>::exact);
  if (sc.mode == ScenarioMode::Quantum)
    j["hilbert_dim"] = sc.hilbert_dim;
  else
    j["space_dim"] = sc.space_dim;
  j["ambient_dim"] = sc.ambient_dim();
  j["dim_R"] = r.dim;
  j["n_states"] = sc.states.size();
  j["n_effects"] = sc.effects.size();
  auto cone_stats = [&](const Mat<S>& gens, const char* prefix) {
    auto c = make_cone(r.dim, gens, tol.polar_tol);
    c = extreme_ray_filter(c, tol.polar_tol);
    j[std::string("N_") + prefix] = c.rays.size();
    j[std::string(prefix) + "_pointed"] = is_pointed(c, tol.polar_tol).pointed();
    j[std::string(prefix) + "_spanning"] = is_spanning(c, tol.polar_tol);
  };
  cone_stats(r.states, "s");
  cone_stats(r.effects, "e");
  j["probability_table"] = probability_table(sc);
  j["notes"] = sc.notes;
  return j;
}

template <class S>
RunOutcome check_impl(const Scenario& sc, const RunOptions& opts) {
  RunOutcome out;
  ClassifyOptions co = opts.classify;
  co.swapped = false;
  const auto res = classify_scenario<S>(sc, co);
  const auto& v = res.verdict;
  out.kind = v.kind;

  json j = header(sc, arithmetic_name<S>());
  j["seed"] = opts.seed;
  j["dim_R"] = res.r.dim;
  j["counts"] = {{"N_s", res.state_cone.rays.size()},
                 {"N_e", res.effect_cone.rays.size()},
                 {"M_s", res.polar_states.rays.size()},
                 {"M_e", res.polar_effects.rays.size()},
                 {"sep_generators", res.sep.rays.size()}};
  j["witness_count"] = res.witnesses ? json(res.witnesses->rays.size()) : json(nullptr);
  j["strategy"] = res.strategy;
  j["verdict"] = to_string(v.kind);
  j["violation"] = v.violation;
  j["violation_normalized"] = v.violation_normalized;
  j["boundary_near"] = v.boundary_near;
  if (!v.reason.empty()) j["reason"] = v.reason;
  if (v.model) j["model"] = model_json(*v.model);
  if (opts.timings) j["timings"] = res.timings;

  if (opts.oracle) {
    try {
      const auto ok = oracle::oracle_classify<S>(sc, opts.classify.tol);
      j["oracle"] = {{"verdict", to_string(ok)}, {"agrees", ok == v.kind}};
      if (ok != v.kind) out.messages.push_back("oracle disagrees: " + to_string(ok));
    } catch (const ResourceError& e) {
      j["oracle"] = {{"skipped", e.what()}};
    }
  }
  if (opts.swap_check) {
    ClassifyOptions so = co;
    so.swapped = true;
    so.extract_model = false;
    const auto sw = classify_scenario<S>(sc, so);
    const bool agrees = sw.verdict.kind == v.kind && sw.r.dim == res.r.dim;
    j["swapped"] = {{"dim_R", sw.r.dim},
                    {"verdict", to_string(sw.verdict.kind)},
                    {"witness_count", sw.witnesses ? json(sw.witnesses->rays.size()) : json(nullptr)},
                    {"agrees", agrees}};
    if (!agrees) out.messages.push_back("swapped reduced space disagrees");
  }
  out.report = j;

  if (v.kind == VerdictKind::Classical && v.model) {
    json a = header(sc, arithmetic_name<S>());
    a["kind"] = "model";
    a["coordinates"] = coordinate_name(sc, Arith<S>::exact);
    basis_json(res.r, a);
    a["model"] = model_json(*v.model);
    out.model_artifact = a;
  } else if (v.kind == VerdictKind::NonClassical) {
    json a = header(sc, arithmetic_name<S>());
    a["kind"] = "witness";
    a["coordinates"] = coordinate_name(sc, Arith<S>::exact);
    basis_json(res.r, a);
    const auto tm = tensor_metric(res.r);
    Vec<S> w = v.witness;
    if constexpr (!Arith<S>::exact) {
      const double n = std::sqrt(dot(w, w, tm));
      for (auto& x : w) x /= n;
    }
    a["witness"] = vec_json(w);
    a["norm_squared"] = scalar(S(dot(w, w, tm)));
    a["violation"] = v.violation;
    const auto chk = check_witness(w, res.sep, res.r, opts.classify.tol);
    a["replay"] = {{"sep_generators", res.sep.rays.size()},
                   {"min_generator_value", chk.min_generator_value},
                   {"tight_rank", chk.tight_rank},
                   {"passed", chk.ok}};
    out.witness_artifact = a;
  }
  return out;
}

template <class S>
VerifyResult verify_impl(const json& a, const Scenario& sc, const Tolerances& tol) {
  VerifyResult vr;
  vr.kind = a.value("kind", "");
  auto fail = [&](const std::string& msg) {
    vr.ok = false;
    vr.first_violation = msg;
    return vr;
  };
  if (a.contains("scenario_digest") && a["scenario_digest"] != scenario_digest(sc))
    return fail("scenario digest differs from the artifact");

  const bool swapped = a.value("swapped", false);
  const auto fresh = scenario_reduced_space<S>(sc, swapped, tol);
  ReducedSpace<S> r;
  r.subspace.ambient_dim = fresh.subspace.ambient_dim;
  r.subspace.basis = read_mat<S>(a.at("reduced_basis"));
  r.subspace.gram = read_vec<S>(a.at("gram"));
  r.metric = fresh.metric;
  r.swapped = swapped;
  r.dim = r.subspace.rank();
  if (r.dim != fresh.dim) return fail("reduced basis has " + std::to_string(r.dim) + " vectors, dim(R) is " +
                                      std::to_string(fresh.dim));
  if (r.subspace.gram.size() != r.subspace.basis.size()) return fail("gram length differs from the basis size");
  for (int i = 0; i < r.dim; ++i) {
    const auto& b = r.subspace.basis[i];
    if (static_cast<int>(b.size()) != r.subspace.ambient_dim) return fail("reduced basis vector has wrong length");
    auto d = project(b, fresh.subspace, fresh.metric);
    axpy(S(-1), b, d);
    if (!is_zero_vec(d, 1e-9)) return fail("reduced basis vector " + std::to_string(i) + " is not in R");
    for (int k = 0; k < r.dim; ++k) {
      const S ip = dot(b, r.subspace.basis[k], r.metric);
      const S want = i == k ? r.subspace.gram[i] : S(0);
      if (!Arith<S>::is_zero(S(ip - want), 1e-9)) return fail("reduced basis is not orthogonal with the stated gram");
    }
  }
  const auto amb = ambient_data<S>(sc);
  for (const auto& x : amb.states) r.states.push_back(subspace_coords(x, r.subspace, r.metric));
  for (const auto& x : amb.effects) r.effects.push_back(subspace_coords(x, r.subspace, r.metric));
  r.unit = subspace_coords(amb.unit, r.subspace, r.metric);

  if (vr.kind == "model") {
    const auto& mj = a.at("model");
    ClassicalModel<S> m;
    m.r_dim = r.dim;
    const auto fs = read_mat<S>(mj.at("F"));
    const auto ss = read_mat<S>(mj.at("sigma"));
    if (fs.size() != ss.size()) return fail("F and sigma lists differ in length");
    for (std::size_t i = 0; i < fs.size(); ++i) m.pairs.push_back({fs[i], ss[i]});
    if (mj.value("cardinality", m.cardinality()) != m.cardinality())
      return fail("recorded cardinality differs from the number of pairs");
    const auto chk = check_model(m, r, tol);
    vr.details = {{"cardinality", m.cardinality()},
                  {"max_reconstruction_error", chk.max_reconstruction_error},
                  {"max_normalization_error", chk.max_normalization_error}};
    if (!chk.ok) return fail(chk.first_violation);
    const auto table = probability_table(sc);
    double worst = 0;
    for (std::size_t k = 0; k < r.states.size(); ++k)
      for (std::size_t l = 0; l < r.effects.size(); ++l) {
        const double p = Arith<S>::to_double(evaluate_model(m, r.states[k], r.effects[l], r.gram()));
        worst = std::max(worst, std::abs(p - table[k][l]));
        if (std::abs(p - table[k][l]) > 1e-8)
          return fail("model probability differs from the scenario at (" + std::to_string(k) + ", " +
                      std::to_string(l) + ")");
      }
    vr.details["max_probability_error"] = worst;
    vr.ok = true;
    return vr;
  }
  if (vr.kind == "witness") {
    const auto w = read_vec<S>(a.at("witness"));
    const auto tm = tensor_metric(r);
    if (w.size() != tm.size()) return fail("witness has wrong dimension");
    const S ns = dot(w, w, tm);
    const S recorded = read_scalar<S>(a.at("norm_squared"));
    if constexpr (Arith<S>::exact) {
      if (ns != recorded) return fail("witness norm differs from the recorded norm");
    } else {
      if (std::abs(ns - recorded) > 1e-9 * std::max(1.0, std::abs(recorded)))
        return fail("witness norm differs from the recorded norm");
      if (std::abs(recorded - 1.0) > 1e-9) return fail("float witness is not unit norm");
    }
    ClassifyOptions co;
    co.tol = tol;
    const auto sep = sep_extremal_rays(polar_state_cone(r, co), polar_effect_cone(r, co));
    const auto chk = check_witness(w, sep, r, tol);
    vr.details = {{"sep_generators", sep.rays.size()},
                  {"min_generator_value", chk.min_generator_value},
                  {"value_on_j", chk.value_on_j},
                  {"tight_rank", chk.tight_rank}};
    if (!chk.ok) return fail(chk.first_violation);
    vr.ok = true;
    return vr;
  }
  return fail("unknown artifact kind '" + vr.kind + "'");
}

}  // namespace

std::string tool_version() { return "0.3.0"; }

bool use_exact(const Scenario& sc, ArithmeticPolicy policy) {
  switch (policy) {
    case ArithmeticPolicy::Exact:
      if (!sc.exact_available()) throw ValidationError("exact arithmetic requested but the scenario has no exact data");
      return true;
    case ArithmeticPolicy::Float:
      return false;
    case ArithmeticPolicy::Auto:
      return sc.exact_available();
  }
  return false;
}

json inspect_report(const Scenario& sc, const RunOptions& opts) {
  return use_exact(sc, opts.arithmetic) ? inspect_impl<Rational>(sc, opts) : inspect_impl<double>(sc, opts);
}

RunOutcome run_check(const Scenario& sc, const RunOptions& opts) {
  return use_exact(sc, opts.arithmetic) ? check_impl<Rational>(sc, opts) : check_impl<double>(sc, opts);
}

json approx_report(const ApproxScenario& as, const ApproxVerdict& v, const ApproxSchedule& schedule, int max_level,
                   const std::string& mode) {
  json j;
  j["tool"] = "conekit";
  j["version"] = tool_version();
  j["scenario"] = as.name;
  j["samplers"] = {{"states", as.states ? as.states->describe() : "psd"},
                   {"effects", as.effects ? as.effects->describe() : "psd"}};
  j["mode"] = mode;
  j["max_level"] = max_level;
  j["seed"] = schedule.seed;
  j["schedule"] = {{"inner_rays", schedule.inner_rays},
                   {"outer_faces", schedule.outer_faces},
                   {"step", schedule.step},
                   {"replay_samples", schedule.replay_samples}};
  j["verdict"] = to_string(v.kind);
  j["level"] = v.level;
  json levels = json::array();
  for (const auto& l : v.levels) {
    json e;
    e["level"] = l.level.level;
    e["state_rays"] = l.level.n_state_rays;
    e["effect_rays"] = l.level.n_effect_rays;
    e["state_faces"] = l.level.n_state_faces;
    e["effect_faces"] = l.level.n_effect_faces;
    e["inner_margin"] = l.inner_margin ? json(*l.inner_margin) : json(nullptr);
    e["outer_margin"] = l.outer_margin ? json(*l.outer_margin) : json(nullptr);
    if (!l.note.empty()) e["note"] = l.note;
    levels.push_back(e);
  }
  j["levels"] = levels;
  j["best_outer_margin"] = v.best_outer_margin ? json(*v.best_outer_margin) : json(nullptr);
  if (v.kind == ApproxKind::WitnessedNonClassical) {
    j["witness"] = vec_json(v.witness);
    j["violation"] = v.violation;
    j["replay"] = {{"samples", v.replay_samples}, {"min_value", v.replay_min}};
  }
  if (v.certificate) j["certificate"] = model_json(*v.certificate);
  return j;
}

VerifyResult verify_artifact(const json& artifact, const Scenario& sc, const Tolerances& tol) {
  const std::string arith = artifact.value("arithmetic", "float");
  if (arith == "exact") {
    if (!sc.exact_available()) {
      VerifyResult vr;
      vr.kind = artifact.value("kind", "");
      vr.first_violation = "exact artifact but the scenario has no exact data";
      return vr;
    }
    return verify_impl<Rational>(artifact, sc, tol);
  }
  return verify_impl<double>(artifact, sc, tol);
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

ComplexMatrix parse_matrix(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw ValidationError("matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  ComplexMatrix m(n, n);
  auto num = [](const json& x) -> double {
    if (x.is_number()) return x.get<double>();
    if (x.is_string()) return parse_rational(x.get<std::string>()).convert_to<double>();
    throw ValidationError("matrix entry is neither a number nor a string");
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw ValidationError("matrix row " + std::to_string(i) + " has the wrong length");
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto& e = row[k];
      if (e.is_array()) {
        if (e.size() != 2) throw ValidationError("matrix entry (" + std::to_string(i) + ", " + std::to_string(k) + ") is not [re, im]");
        m(i, k) = {num(e[0]), num(e[1])};
      } else {
        m(i, k) = num(e);
      }
    }
  }
  return m;
}

}  // namespace conekit
