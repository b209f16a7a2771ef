#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "conekit/numeric.hpp"
#include "conekit/operator_algebra.hpp"

namespace conekit {

enum class ScenarioMode { Quantum, Gpt };

/** One generator: a d x d matrix (row-major real/imaginary parts) in quantum
 * mode, a coordinate vector in GPT mode (`im` empty). The exact parts are
 * present when the generator was given with rational data. */
struct Element {
  std::vector<double> re, im;
  std::optional<std::vector<Rational>> qre, qim;
};

struct Scenario {
  ScenarioMode mode = ScenarioMode::Quantum;
  int hilbert_dim = 0;  // quantum
  int space_dim = 0;    // gpt
  std::vector<Element> states;
  std::vector<Element> effects;
  Element unit;
  std::vector<std::vector<int>> povm_groups;
  std::vector<std::string> state_labels;
  std::vector<std::string> effect_labels;
  std::vector<std::string> notes;  // auto-insertions and other load-time events

  int ambient_dim() const { return mode == ScenarioMode::Quantum ? hilbert_dim * hilbert_dim : space_dim; }
  bool exact_available() const;
};

enum class ArithmeticPolicy { Auto, Exact, Float };

/// Ambient coordinates of a scenario, ready for the reduced-space module.
template <class S>
struct AmbientData {
  Vec<S> metric;
  Mat<S> states;
  Mat<S> effects;
  Vec<S> unit;
};

template <class S>
AmbientData<S> ambient_data(const Scenario& sc);

/** Parses and validates a scenario document. Numbers may be JSON numbers or
 * strings ("p/q" or decimal). With ArithmeticPolicy::Auto the scenario keeps
 * exact data iff no JSON floating literal occurs; Exact converts floats via
 * their shortest decimal representation; Float drops exact data. */
Scenario load_scenario(const nlohmann::json& doc, ArithmeticPolicy policy = ArithmeticPolicy::Auto,
                       const Tolerances& tol = {});

Scenario load_scenario_file(const std::string& path, ArithmeticPolicy policy = ArithmeticPolicy::Auto,
                            const Tolerances& tol = {});

/// Throws ValidationError naming every offending entry.
void validate_scenario(const Scenario& sc, const Tolerances& tol = {});

/// Canonical document; exact data is written as "p/q" strings.
nlohmann::json scenario_to_json(const Scenario& sc);

/// SHA-256 of the canonical serialization, hex encoded.
std::string scenario_digest(const Scenario& sc);

Scenario coarse_grain_augment(const Scenario& sc, const std::vector<int>& indices,
                              const Tolerances& tol = {});

Scenario ancilla_embed(const Scenario& sc, int ancilla_dim);

/// Maps every state to eta * rho + (1 - eta) * I / d.
Scenario depolarized(const Scenario& sc, const Rational& eta);
Scenario depolarized(const Scenario& sc, double eta);

/** Builtin corpus, addressed as "name[:arg...]":
 *   classical_simplex:d, qubit_full:ns:ne, qubit_six_state, qubit_trine, qutrit_full,
 *   gpt_square, gpt_simplex:d, depolarized:<builtin>:eta */
Scenario builtin_scenario(const std::string& spec);

std::vector<std::string> builtin_names();

/// Either "builtin:<spec>" or a path to a scenario JSON file.
Scenario resolve_scenario(const std::string& arg, ArithmeticPolicy policy = ArithmeticPolicy::Auto,
                          const Tolerances& tol = {});

/// Entry (k, l) = <rho_k, E_l>.
std::vector<std::vector<double>> probability_table(const Scenario& sc);

/// Unit Bloch directions: octahedron, cube corners, then a seeded
/// low-discrepancy tail. Prefixes are stable, so longer lists refine shorter.
std::vector<std::array<double, 3>> bloch_directions(int count, std::uint64_t seed = 0);

ComplexMatrix element_matrix(const Scenario& sc, const Element& e);

}  // namespace conekit
