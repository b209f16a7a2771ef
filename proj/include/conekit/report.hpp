#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "conekit/approximation.hpp"
#include "conekit/scenario.hpp"
#include "conekit/unit_separability.hpp"

namespace conekit {

std::string tool_version();

struct RunOptions {
  ArithmeticPolicy arithmetic = ArithmeticPolicy::Auto;
  ClassifyOptions classify;
  bool timings = false;     // timings make reports run-dependent, so they are opt-in
  bool oracle = false;      // cross-check with oracle::oracle_classify
  bool swap_check = false;  // cross-check with the swapped reduced space
  std::uint64_t seed = 0;
};

/// True when the pipeline should run in exact arithmetic for this scenario.
bool use_exact(const Scenario& sc, ArithmeticPolicy policy);

struct RunOutcome {
  VerdictKind kind = VerdictKind::Inconclusive;
  nlohmann::json report;
  nlohmann::json model_artifact;    // set for Classical verdicts
  nlohmann::json witness_artifact;  // set for NonClassical verdicts
  std::vector<std::string> messages;
};

/// Reduced space and cone statistics, probability table; no classification.
nlohmann::json inspect_report(const Scenario& sc, const RunOptions& opts);

RunOutcome run_check(const Scenario& sc, const RunOptions& opts);

nlohmann::json approx_report(const ApproxScenario& as, const ApproxVerdict& v, const ApproxSchedule& schedule,
                             int max_level, const std::string& mode);

struct VerifyResult {
  bool ok = false;
  std::string kind;  // "model" or "witness"
  std::string first_violation;
  nlohmann::json details;
};

/** Re-checks a model or witness artifact against raw scenario data. The
 * reduced basis stored in the artifact is validated against a freshly
 * computed R; the input polar cones are recomputed, Sep is not enumerated. */
VerifyResult verify_artifact(const nlohmann::json& artifact, const Scenario& sc, const Tolerances& tol = {});

/// Two-space indented dump with a trailing newline.
std::string dump_json(const nlohmann::json& j);

/// Complex matrix from rows of entries (number, "p/q" string or [re, im]).
ComplexMatrix parse_matrix(const nlohmann::json& rows);

}  // namespace conekit
