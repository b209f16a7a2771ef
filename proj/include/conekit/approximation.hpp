#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "conekit/operator_algebra.hpp"
#include "conekit/scenario.hpp"
#include "conekit/unit_separability.hpp"

namespace conekit {

/** A convex cone known through two prefix-stable sample streams, both in
 * ambient coordinates with the plain dot product:
 *   rays(k)  - k elements of the cone,
 *   faces(k) - k elements of its dual, i.e. valid supporting halfspaces.
 * Finite samplers return every generator regardless of k. */
class ConeSampler {
 public:
  virtual ~ConeSampler() = default;
  virtual int ambient_dim() const = 0;
  virtual Mat<double> rays(std::size_t k, std::uint64_t seed) const = 0;
  virtual Mat<double> faces(std::size_t k, std::uint64_t seed) const = 0;
  virtual bool finite() const { return false; }
  virtual std::string describe() const = 0;
};

/// Qubit states eta * |n><n| + (1 - eta) I / 2, orthonormal Hermitian coordinates.
std::shared_ptr<const ConeSampler> bloch_ball_sampler(double eta);

/// Positive semidefinite cone on C^d, sampled by rank-one projectors. Self-dual.
std::shared_ptr<const ConeSampler> psd_cone_sampler(int d);

/// Finite cone; faces are the extremal rays of its polar within its span.
std::shared_ptr<const ConeSampler> polyhedral_sampler(const Mat<double>& rays, const Vec<double>& metric,
                                                      std::string label = "polyhedral");

struct ApproxScenario {
  std::string name;
  Vec<double> metric;  // ambient, diagonal
  Vec<double> unit;    // ambient
  std::shared_ptr<const ConeSampler> states;
  std::shared_ptr<const ConeSampler> effects;
};

ApproxScenario approx_from_scenario(const Scenario& sc);

/** "builtin:qubit_full" (all qubit states and effects),
 * "builtin:depolarized:qubit_full:eta", or any scenario accepted by
 * resolve_scenario (finite generators). */
ApproxScenario resolve_approx_scenario(const std::string& arg);

/** R computed from sampled spans. Outer approximations project dual elements
 * onto R, which is only sound when each input cone spans R; that is checked
 * here (dim R = 1 is always accepted). */
ReducedSpace<double> approx_reduced_space(const ApproxScenario& as, const Tolerances& tol = {});

struct ApproxLevel {
  int level = 1;
  std::size_t n_state_rays = 0, n_effect_rays = 0;
  std::size_t n_state_faces = 0, n_effect_faces = 0;
  std::uint64_t seed = 0;
};

/// Level l uses inner_rays + (l - 1) * step rays and outer_faces + (l - 1) * step faces.
struct ApproxSchedule {
  std::size_t inner_rays = 6;
  std::size_t outer_faces = 6;
  std::size_t step = 8;
  std::uint64_t seed = 0;
  std::size_t replay_samples = 10000;
  ApproxLevel level(int l) const;
};

/// Cone of the first k sampled rays, projected to R. Extends the sample
/// (up to 4k) until it spans R.
ConeV<double> inner_cone_approx(const ConeSampler& sampler, const ReducedSpace<double>& r, std::size_t k,
                                std::uint64_t seed, double tol = 1e-9);

/// Polar of the cone of the first k sampled faces, projected to R. Throws
/// PreconditionError when the faces leave the result unbounded.
ConeV<double> outer_cone_approx(const ConeSampler& sampler, const ReducedSpace<double>& r, std::size_t k,
                                std::uint64_t seed, double tol = 1e-9);

enum class ApproxKind { CertifiedClassical, WitnessedNonClassical, Inconclusive };

std::string to_string(ApproxKind k);

enum class ApproxMode { Auto, Certify, Witness };

struct LevelRecord {
  ApproxLevel level;
  std::optional<double> inner_margin;  // t* against Sep_in (lower bound)
  std::optional<double> outer_margin;  // t* against Sep_out (upper bound)
  std::string note;
};

struct ApproxVerdict {
  ApproxKind kind = ApproxKind::Inconclusive;
  int level = 0;
  std::optional<ClassicalModel<double>> certificate;  // model built from Sep_in
  Vec<double> witness;                                // tensor coordinates, unit norm
  double violation = 0;                               // <target, witness>
  std::size_t replay_samples = 0;
  double replay_min = 0;
  std::optional<double> best_outer_margin;
  std::vector<LevelRecord> levels;
};

ApproxVerdict certify_classical(const ApproxScenario& as, const ApproxLevel& level,
                                const ClassifyOptions& opts = {});

ApproxVerdict witness_nonclassical(const ApproxScenario& as, const ApproxLevel& level,
                                   const ClassifyOptions& opts = {}, std::size_t replay_samples = 10000);

ApproxVerdict hierarchy(const ApproxScenario& as, int max_level, const ApproxSchedule& schedule,
                        const ClassifyOptions& opts = {}, ApproxMode mode = ApproxMode::Auto);

/** Same machinery with both input cones equal to the PSD cone of the local
 * Hermitian space and the state replacing J(id_R). CertifiedClassical means
 * separable, WitnessedNonClassical means entangled. */
ApproxVerdict entanglement_check(const ComplexMatrix& state, int local_dim, int max_level,
                                 const ApproxSchedule& schedule, const ClassifyOptions& opts = {});

/// Orthonormal product-basis coordinates of an operator on C^d (x) C^d.
Vec<double> bipartite_coords(const ComplexMatrix& m, int local_dim);

/// Orthonormal Hermitian coordinates of |psi><psi|.
Vec<double> projector_coords(const Eigen::VectorXcd& psi);

ComplexMatrix bell_state();

}  // namespace conekit
