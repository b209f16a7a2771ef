#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>

#include "conekit/cone.hpp"
#include "conekit/reduced_space.hpp"
#include "conekit/scenario.hpp"

namespace conekit {

enum class VerdictKind { Classical, NonClassical, Inconclusive };

std::string to_string(VerdictKind k);

/// How the minimum of <J, Gamma> over the witness set is found.
enum class WitnessStrategy {
  Auto,           // enumerate when the Sep generator count is within budget
  Enumerate,      // full vertex enumeration of the polar of Sep
  LinearProgram,  // max t with J - t c in Sep; the optimal dual is an extremal witness
};

struct ClassifyOptions {
  Tolerances tol;
  int threads = 1;
  WitnessStrategy strategy = WitnessStrategy::Auto;
  std::size_t enumerate_budget = 128;
  // Auto falls back to the LP route once the enumeration holds this many rays.
  std::size_t enumerate_max_rays = 4000;
  bool extract_model = true;
  bool minimize_model = true;
  std::size_t subset_budget = 20000;
  bool swapped = false;
  std::size_t max_tensor_dim = 36;
};

/** Vectors of R (x) R, flattened row-major over the product of the reduced
 * basis. With an orthogonal reduced basis of squared norms G the tensor inner
 * product is diagonal with weights G_i G_j (see tensor_metric). */
template <class S>
struct TensorVector {
  int r_dim = 0;
  Vec<S> coords;
};

/// Sep(s,e) generators a_i (x) b_j together with their factor indices.
template <class S>
struct SepGenerators {
  int r_dim = 0;
  Mat<S> rays;
  std::vector<std::pair<int, int>> factors;
};

template <class S>
struct WitnessSet {
  int r_dim = 0;
  Mat<S> rays;         // extremal rays of the polar of Sep, tensor coordinates
  Vec<double> norms;   // tensor-metric norms; rays[k] / norms[k] is unit
};

template <class S>
struct OnticPair {
  Vec<S> F;
  Vec<S> sigma;
};

template <class S>
struct ClassicalModel {
  int r_dim = 0;
  std::vector<OnticPair<S>> pairs;
  std::size_t cardinality() const { return pairs.size(); }
};

template <class S>
struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::optional<ClassicalModel<S>> model;
  Vec<S> witness;             // tensor coordinates, not normalized
  double violation = 0;       // <J, Gamma> for unit-norm Gamma (minimum over witnesses)
  double violation_normalized = 0;  // violation / sqrt(dim R)
  bool boundary_near = false;
  std::string reason;
};

struct ModelCheck {
  bool ok = true;
  std::string first_violation;
  double max_reconstruction_error = 0;
  double max_normalization_error = 0;
  double min_state_pairing = 0;
  double min_effect_pairing = 0;
};

struct WitnessCheck {
  bool ok = true;
  std::string first_violation;
  double min_generator_value = 0;  // over unit-norm generators, unit-norm witness
  double value_on_j = 0;           // unit-norm witness
  double norm = 0;
  int tight_rank = 0;
};

template <class S>
struct PipelineResult {
  ReducedSpace<S> r;
  ConeV<S> state_cone;   // extremal reduced state generators
  ConeV<S> effect_cone;  // extremal reduced effect generators
  ConeV<S> polar_states;
  ConeV<S> polar_effects;
  SepGenerators<S> sep;
  std::optional<WitnessSet<S>> witnesses;
  Verdict<S> verdict;
  std::string strategy;
  std::map<std::string, double> timings;  // seconds per stage
};

template <class S>
Vec<S> tensor_metric(const ReducedSpace<S>& r);

template <class S>
TensorVector<S> choi_identity(const ReducedSpace<S>& r);

/// Extremal rays of (P_R s)°, in reduced coordinates.
template <class S>
ConeV<S> polar_state_cone(const ReducedSpace<S>& r, const ClassifyOptions& opts = {});

/// Extremal rays of (P_R e)°, in reduced coordinates.
template <class S>
ConeV<S> polar_effect_cone(const ReducedSpace<S>& r, const ClassifyOptions& opts = {});

template <class S>
SepGenerators<S> sep_extremal_rays(const ConeV<S>& ms, const ConeV<S>& me);

template <class S>
WitnessSet<S> witness_set(const SepGenerators<S>& sep, const ReducedSpace<S>& r,
                          const ClassifyOptions& opts = {});

template <class S>
ClassicalModel<S> extract_classical_model(const TensorVector<S>& j, const SepGenerators<S>& sep,
                                          const ConeV<S>& ms, const ConeV<S>& me,
                                          const ReducedSpace<S>& r, const ClassifyOptions& opts = {});

/// sum_lambda <rho, F_lambda> <sigma_lambda, E> in reduced coordinates.
template <class S>
S evaluate_model(const ClassicalModel<S>& m, const Vec<S>& rho, const Vec<S>& e, const Vec<S>& gram);

template <class S>
ModelCheck check_model(const ClassicalModel<S>& m, const ReducedSpace<S>& r, const Tolerances& tol = {});

/// Checks a witness against explicit Sep generators: nonnegativity, strict
/// negativity on J(id_R), unit norm and extremality (tight rank D - 1).
template <class S>
WitnessCheck check_witness(const Vec<S>& gamma, const SepGenerators<S>& sep, const ReducedSpace<S>& r,
                           const Tolerances& tol = {});

template <class S>
struct SepMembership {
  bool member = false;
  bool boundary_near = false;
  double witness_value = 0;  // <target, Gamma> for the reported unit-norm witness
  double lp_margin = std::numeric_limits<double>::quiet_NaN();  // t* of the linear program
  Vec<S> witness;  // set when not a member
  std::string strategy;
  std::optional<WitnessSet<S>> witnesses;  // enumeration route only
};

/** Decides target in cone(sep). Enumeration reports the minimum over all
 * extremal witnesses; the linear program maximizes t with target - t c in
 * cone(sep) (c = normalizer, or the generator average) and returns the
 * optimal dual as the witness. */
template <class S>
SepMembership<S> sep_membership(const Vec<S>& target, const SepGenerators<S>& sep, const Vec<S>& tm,
                                const ClassifyOptions& opts = {}, const Vec<S>* normalizer = nullptr);

template <class S>
PipelineResult<S> classify(const ReducedSpace<S>& r, const ClassifyOptions& opts = {});

template <class S>
ReducedSpace<S> scenario_reduced_space(const Scenario& sc, bool swapped, const Tolerances& tol = {});

template <class S>
PipelineResult<S> classify_scenario(const Scenario& sc, const ClassifyOptions& opts = {});

/// Verdict kind with automatic arithmetic selection.
VerdictKind classify_kind(const Scenario& sc, const ClassifyOptions& opts = {});

/// Largest permitted dim(R)^2, honouring CONEKIT_MAX_TENSOR_DIM.
std::size_t max_tensor_dim_from_env(std::size_t fallback = 36);

}  // namespace conekit
