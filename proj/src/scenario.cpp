#include "conekit/scenario.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace conekit {

using nlohmann::json;

namespace {

struct Number {
  double d = 0;
  std::optional<Rational> q;
  bool float_literal = false;
};

Number parse_number(const json& j, const std::string& where) {
  Number n;
  if (j.is_number_integer() || j.is_number_unsigned()) {
    n.q = j.is_number_unsigned() ? Rational(j.get<std::uint64_t>()) : Rational(j.get<std::int64_t>());
    n.d = n.q->convert_to<double>();
  } else if (j.is_number_float()) {
    n.d = j.get<double>();
    n.float_literal = true;
    if (!std::isfinite(n.d)) throw ValidationError(where + ": non-finite number");
  } else if (j.is_string()) {
    try {
      n.q = parse_rational(j.get<std::string>());
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    n.d = n.q->convert_to<double>();
  } else {
    throw ValidationError(where + ": expected a number or a \"p/q\" string");
  }
  return n;
}

/// Collects numbers while parsing so the arithmetic policy can be applied once.
struct ElementBuilder {
  std::vector<Number> re, im;

  Element finish(ArithmeticPolicy policy, bool keep_exact) const {
    Element e;
    const bool exact = policy != ArithmeticPolicy::Float && keep_exact;
    std::vector<Rational> qre, qim;
    for (const auto& n : re) {
      e.re.push_back(n.d);
      if (exact) qre.push_back(n.q ? *n.q : rational_from_double(n.d));
    }
    for (const auto& n : im) {
      e.im.push_back(n.d);
      if (exact) qim.push_back(n.q ? *n.q : rational_from_double(n.d));
    }
    if (exact) {
      e.qre = std::move(qre);
      e.qim = std::move(qim);
    }
    return e;
  }

  bool has_float() const {
    for (const auto& n : re)
      if (n.float_literal) return true;
    for (const auto& n : im)
      if (n.float_literal) return true;
    return false;
  }
};

ElementBuilder parse_matrix(const json& j, int d, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    throw ValidationError(where + ": expected " + std::to_string(d) + " rows");
  ElementBuilder b;
  for (int r = 0; r < d; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw ValidationError(where + ": row " + std::to_string(r) + " must have " + std::to_string(d) +
                            " entries");
    for (int c = 0; c < d; ++c) {
      const auto& entry = row[c];
      const std::string at = where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
      if (entry.is_array()) {
        if (entry.size() != 2) throw ValidationError(at + ": expected [re, im]");
        b.re.push_back(parse_number(entry[0], at));
        b.im.push_back(parse_number(entry[1], at));
      } else {
        b.re.push_back(parse_number(entry, at));
        b.im.push_back(Number{0, Rational(0), false});
      }
    }
  }
  return b;
}

ElementBuilder parse_vector(const json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw ValidationError(where + ": expected a vector of length " + std::to_string(n));
  ElementBuilder b;
  for (int i = 0; i < n; ++i) b.re.push_back(parse_number(j[i], where + "[" + std::to_string(i) + "]"));
  return b;
}

json number_json(double d, const std::vector<Rational>* q, std::size_t i) {
  if (q) return to_string((*q)[i]);
  return d;
}

bool both_exact(const Element& a, const Element& b) { return a.qre && b.qre; }

Element combine(const Element& a, const Element& b, double sa, double sb, const Rational* qa,
                const Rational* qb) {
  Element e;
  e.re.resize(a.re.size());
  e.im.resize(a.im.size());
  for (std::size_t i = 0; i < a.re.size(); ++i) e.re[i] = sa * a.re[i] + sb * b.re[i];
  for (std::size_t i = 0; i < a.im.size(); ++i) e.im[i] = sa * a.im[i] + sb * b.im[i];
  if (both_exact(a, b) && qa && qb) {
    std::vector<Rational> re(a.re.size()), im(a.im.size());
    for (std::size_t i = 0; i < re.size(); ++i) re[i] = *qa * (*a.qre)[i] + *qb * (*b.qre)[i];
    for (std::size_t i = 0; i < im.size(); ++i) im[i] = *qa * (*a.qim)[i] + *qb * (*b.qim)[i];
    e.qre = std::move(re);
    e.qim = std::move(im);
  }
  return e;
}

Element add(const Element& a, const Element& b) {
  const Rational one(1);
  return combine(a, b, 1.0, 1.0, &one, &one);
}

Element sub(const Element& a, const Element& b) {
  const Rational one(1), minus(-1);
  return combine(a, b, 1.0, -1.0, &one, &minus);
}

Element zero_like(const Element& a) {
  Element e;
  e.re.assign(a.re.size(), 0.0);
  e.im.assign(a.im.size(), 0.0);
  e.qre = std::vector<Rational>(a.re.size());
  e.qim = std::vector<Rational>(a.im.size());
  return e;
}

Element identity_element(int d) {
  Element e;
  e.re.assign(d * d, 0.0);
  e.im.assign(d * d, 0.0);
  e.qre = std::vector<Rational>(d * d);
  e.qim = std::vector<Rational>(d * d);
  for (int i = 0; i < d; ++i) {
    e.re[i * d + i] = 1.0;
    (*e.qre)[i * d + i] = 1;
  }
  return e;
}

void drop_exact(Element& e) {
  e.qre.reset();
  e.qim.reset();
}

bool element_equal(const Element& a, const Element& b, double tol) {
  if (both_exact(a, b)) return *a.qre == *b.qre && *a.qim == *b.qim;
  for (std::size_t i = 0; i < a.re.size(); ++i)
    if (std::abs(a.re[i] - b.re[i]) > tol) return false;
  for (std::size_t i = 0; i < a.im.size(); ++i)
    if (std::abs(a.im[i] - b.im[i]) > tol) return false;
  return true;
}

double element_distance(const Element& a, const Element& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.re.size(); ++i) s += (a.re[i] - b.re[i]) * (a.re[i] - b.re[i]);
  for (std::size_t i = 0; i < a.im.size(); ++i) s += (a.im[i] - b.im[i]) * (a.im[i] - b.im[i]);
  return std::sqrt(s);
}

double pairing(const Scenario& sc, const Element& a, const Element& b) {
  if (sc.mode == ScenarioMode::Gpt) return dot(a.re, b.re);
  const int d = sc.hilbert_dim;
  double s = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s += a.re[i * d + j] * b.re[j * d + i] - a.im[i * d + j] * b.im[j * d + i];
  return s;
}

Element quantum_pure(const std::array<double, 3>& n) {
  // (I + n.sigma) / 2
  Element e;
  e.re = {(1 + n[2]) / 2, n[0] / 2, n[0] / 2, (1 - n[2]) / 2};
  e.im = {0, -n[1] / 2, n[1] / 2, 0};
  return e;
}

Element exact_pure(int x, int y, int z) {
  Element e;
  const Rational h(1, 2);
  std::vector<Rational> re = {h * (1 + z), h * x, h * x, h * (1 - z)};
  std::vector<Rational> im = {0, h * (-y), h * y, 0};
  for (const auto& q : re) e.re.push_back(q.convert_to<double>());
  for (const auto& q : im) e.im.push_back(q.convert_to<double>());
  e.qre = std::move(re);
  e.qim = std::move(im);
  return e;
}

Element exact_vector(const std::vector<Rational>& v) {
  Element e;
  for (const auto& q : v) e.re.push_back(q.convert_to<double>());
  e.qre = v;
  e.qim = std::vector<Rational>();
  return e;
}

int find_effect(const Scenario& sc, const Element& e, double tol) {
  for (std::size_t i = 0; i < sc.effects.size(); ++i)
    if (element_equal(sc.effects[i], e, tol)) return static_cast<int>(i);
  return -1;
}

bool in_some_group(const Scenario& sc, int idx) {
  for (const auto& g : sc.povm_groups)
    for (int i : g)
      if (i == idx) return true;
  return false;
}

/// Checks a single effect; returns an empty string when valid.
std::string effect_problem(const Scenario& sc, const Element& e, const Tolerances& tol) {
  if (sc.mode == ScenarioMode::Quantum) {
    const auto rep = validate_effect(element_matrix(sc, e), tol);
    return rep.ok ? std::string() : rep.message;
  }
  for (std::size_t k = 0; k < sc.states.size(); ++k) {
    const double p = pairing(sc, sc.states[k], e);
    if (p < -tol.psd_tol || p > 1 + tol.psd_tol)
      return "probability " + std::to_string(p) + " with state " + std::to_string(k) + " outside [0,1]";
  }
  return {};
}

void complete(Scenario& sc, const Tolerances& tol) {
  const Element zero = [&] {
    Element z = zero_like(sc.unit);
    if (!sc.unit.qre) drop_exact(z);
    return z;
  }();
  int unit_idx = find_effect(sc, sc.unit, tol.povm_tol);
  if (unit_idx < 0) {
    sc.effects.push_back(sc.unit);
    sc.effect_labels.push_back("unit");
    unit_idx = static_cast<int>(sc.effects.size()) - 1;
    sc.notes.push_back("inserted the unit effect");
  }
  int zero_idx = find_effect(sc, zero, tol.povm_tol);
  if (zero_idx < 0) {
    sc.effects.push_back(zero);
    sc.effect_labels.push_back("zero");
    zero_idx = static_cast<int>(sc.effects.size()) - 1;
    sc.notes.push_back("inserted the zero effect");
  }
  if (!in_some_group(sc, unit_idx)) sc.povm_groups.push_back({unit_idx});
  if (!in_some_group(sc, zero_idx)) sc.povm_groups.push_back({zero_idx, unit_idx});
  for (int i = 0; i < static_cast<int>(sc.effects.size()); ++i) {
    if (in_some_group(sc, i)) continue;
    Element comp = sub(sc.unit, sc.effects[i]);
    int c = find_effect(sc, comp, tol.povm_tol);
    if (c < 0) {
      const std::string problem = effect_problem(sc, comp, tol);
      if (!problem.empty())
        throw ValidationError("effect " + std::to_string(i) + " cannot be completed: " + problem);
      sc.effects.push_back(std::move(comp));
      sc.effect_labels.push_back("complement(" + std::to_string(i) + ")");
      c = static_cast<int>(sc.effects.size()) - 1;
      sc.notes.push_back("inserted complement of effect " + std::to_string(i) + " as a coarse-graining completion");
    }
    sc.povm_groups.push_back({i, c});
  }
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base), f = inv, r = 0;
  while (i) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

int parse_int_arg(const std::string& s, const std::string& name) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("builtin " + name + ": invalid integer parameter '" + s + "'");
  }
}

}  // namespace

bool Scenario::exact_available() const {
  auto ok = [](const Element& e) { return e.qre.has_value(); };
  if (!ok(unit)) return false;
  for (const auto& e : states)
    if (!ok(e)) return false;
  for (const auto& e : effects)
    if (!ok(e)) return false;
  return true;
}

ComplexMatrix element_matrix(const Scenario& sc, const Element& e) {
  const int d = sc.hilbert_dim;
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = std::complex<double>(e.re[i * d + j], e.im[i * d + j]);
  return m;
}

template <class S>
AmbientData<S> ambient_data(const Scenario& sc) {
  AmbientData<S> a;
  auto coords = [&](const Element& e) -> Vec<S> {
    if constexpr (Arith<S>::exact) {
      if (!e.qre) throw Error("exact arithmetic requested for a scenario without exact data");
      if (sc.mode == ScenarioMode::Gpt) return *e.qre;
      ExactMatrix m{sc.hilbert_dim, *e.qre, *e.qim};
      return exact_coords(m);
    } else {
      if (sc.mode == ScenarioMode::Gpt) return e.re;
      auto t = gell_mann_traces<double>(sc.hilbert_dim, e.re, e.im);
      const auto g = gell_mann_metric(sc.hilbert_dim);
      for (std::size_t k = 0; k < t.size(); ++k) t[k] /= std::sqrt(g[k].convert_to<double>());
      return t;
    }
  };
  if constexpr (Arith<S>::exact) {
    a.metric = sc.mode == ScenarioMode::Gpt ? Vec<Rational>(sc.space_dim, Rational(1))
                                            : gell_mann_metric(sc.hilbert_dim);
  } else {
    a.metric.assign(sc.ambient_dim(), 1.0);
  }
  for (const auto& e : sc.states) a.states.push_back(coords(e));
  for (const auto& e : sc.effects) a.effects.push_back(coords(e));
  a.unit = coords(sc.unit);
  return a;
}

template AmbientData<double> ambient_data<double>(const Scenario&);
template AmbientData<Rational> ambient_data<Rational>(const Scenario&);

void validate_scenario(const Scenario& sc, const Tolerances& tol) {
  std::vector<std::string> errors;
  if (sc.states.empty()) errors.push_back("no states");
  if (sc.effects.empty()) errors.push_back("no effects");
  for (std::size_t k = 0; k < sc.states.size(); ++k) {
    if (sc.mode == ScenarioMode::Quantum) {
      const auto rep = validate_state(element_matrix(sc, sc.states[k]), tol);
      if (!rep.ok) errors.push_back("states[" + std::to_string(k) + "]: " + rep.message);
    } else {
      const double t = pairing(sc, sc.states[k], sc.unit);
      if (std::abs(t - 1) > tol.trace_tol)
        errors.push_back("gpt_states[" + std::to_string(k) + "]: <s,u> = " + std::to_string(t) + " differs from 1");
    }
  }
  for (std::size_t l = 0; l < sc.effects.size(); ++l) {
    const std::string p = effect_problem(sc, sc.effects[l], tol);
    if (!p.empty()) errors.push_back("effects[" + std::to_string(l) + "]: " + p);
  }
  std::vector<bool> grouped(sc.effects.size(), false);
  for (std::size_t g = 0; g < sc.povm_groups.size(); ++g) {
    const auto& grp = sc.povm_groups[g];
    bool ok_idx = !grp.empty();
    for (int i : grp)
      if (i < 0 || i >= static_cast<int>(sc.effects.size())) ok_idx = false;
    if (!ok_idx) {
      errors.push_back("povm group " + std::to_string(g) + ": invalid effect index");
      continue;
    }
    Element sum = sc.effects[grp[0]];
    grouped[grp[0]] = true;
    for (std::size_t t = 1; t < grp.size(); ++t) {
      sum = add(sum, sc.effects[grp[t]]);
      grouped[grp[t]] = true;
    }
    const double dev = element_distance(sum, sc.unit);
    if (dev > tol.povm_tol)
      errors.push_back("povm group " + std::to_string(g) + ": effects sum differs from the unit by " +
                       std::to_string(dev));
  }
  for (std::size_t l = 0; l < grouped.size(); ++l)
    if (!grouped[l]) errors.push_back("effects[" + std::to_string(l) + "]: not part of any POVM group");
  if (!errors.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ValidationError(msg);
  }
}

Scenario load_scenario(const json& doc, ArithmeticPolicy policy, const Tolerances& tol) {
  if (!doc.is_object()) throw ValidationError("scenario document must be a JSON object");
  Scenario sc;
  const std::string mode = doc.value("mode", std::string("quantum"));
  std::vector<ElementBuilder> states, effects;
  ElementBuilder unit;
  std::vector<std::vector<int>> groups;
  bool explicit_groups = false;
  if (mode == "quantum") {
    sc.mode = ScenarioMode::Quantum;
    if (!doc.contains("hilbert_dim") || !doc["hilbert_dim"].is_number_integer())
      throw ValidationError("quantum scenario requires integer hilbert_dim");
    sc.hilbert_dim = doc["hilbert_dim"].get<int>();
    if (sc.hilbert_dim < 1) throw ValidationError("hilbert_dim must be positive");
    const int d = sc.hilbert_dim;
    if (!doc.contains("states") || !doc["states"].is_array()) throw ValidationError("missing states");
    for (std::size_t k = 0; k < doc["states"].size(); ++k)
      states.push_back(parse_matrix(doc["states"][k], d, "states[" + std::to_string(k) + "]"));
    if (doc.contains("povms")) {
      if (!doc["povms"].is_array()) throw ValidationError("povms must be an array of groups");
      for (std::size_t g = 0; g < doc["povms"].size(); ++g) {
        const auto& grp = doc["povms"][g];
        if (!grp.is_array()) throw ValidationError("povms[" + std::to_string(g) + "] must be an array");
        std::vector<int> idx;
        for (std::size_t t = 0; t < grp.size(); ++t) {
          idx.push_back(static_cast<int>(effects.size()));
          effects.push_back(parse_matrix(grp[t], d, "povms[" + std::to_string(g) + "][" + std::to_string(t) + "]"));
        }
        groups.push_back(std::move(idx));
      }
    }
    if (doc.contains("extra_effects")) {
      if (!doc["extra_effects"].is_array()) throw ValidationError("extra_effects must be an array");
      for (std::size_t t = 0; t < doc["extra_effects"].size(); ++t)
        effects.push_back(parse_matrix(doc["extra_effects"][t], d, "extra_effects[" + std::to_string(t) + "]"));
    }
  } else if (mode == "gpt") {
    sc.mode = ScenarioMode::Gpt;
    if (!doc.contains("space_dim") || !doc["space_dim"].is_number_integer())
      throw ValidationError("gpt scenario requires integer space_dim");
    sc.space_dim = doc["space_dim"].get<int>();
    if (sc.space_dim < 1) throw ValidationError("space_dim must be positive");
    const int n = sc.space_dim;
    if (!doc.contains("gpt_states") || !doc["gpt_states"].is_array()) throw ValidationError("missing gpt_states");
    if (!doc.contains("gpt_unit")) throw ValidationError("missing gpt_unit");
    for (std::size_t k = 0; k < doc["gpt_states"].size(); ++k)
      states.push_back(parse_vector(doc["gpt_states"][k], n, "gpt_states[" + std::to_string(k) + "]"));
    if (doc.contains("gpt_effects")) {
      if (!doc["gpt_effects"].is_array()) throw ValidationError("gpt_effects must be an array");
      for (std::size_t t = 0; t < doc["gpt_effects"].size(); ++t)
        effects.push_back(parse_vector(doc["gpt_effects"][t], n, "gpt_effects[" + std::to_string(t) + "]"));
    }
    unit = parse_vector(doc["gpt_unit"], n, "gpt_unit");
  } else {
    throw ValidationError("mode must be \"quantum\" or \"gpt\"");
  }
  if (doc.contains("povm_indices")) {
    explicit_groups = true;
    groups.clear();
    for (const auto& g : doc["povm_indices"]) {
      std::vector<int> idx;
      for (const auto& i : g) {
        if (!i.is_number_integer()) throw ValidationError("povm_indices entries must be integers");
        const int v = i.get<int>();
        if (v < 0 || v >= static_cast<int>(effects.size()))
          throw ValidationError("povm_indices: index " + std::to_string(v) + " out of range");
        idx.push_back(v);
      }
      groups.push_back(std::move(idx));
    }
  }
  (void)explicit_groups;
  if (states.empty()) throw ValidationError("scenario has no states");

  bool any_float = unit.has_float();
  for (const auto& b : states) any_float = any_float || b.has_float();
  for (const auto& b : effects) any_float = any_float || b.has_float();
  const bool keep_exact = policy == ArithmeticPolicy::Exact || (policy == ArithmeticPolicy::Auto && !any_float);

  for (const auto& b : states) sc.states.push_back(b.finish(policy, keep_exact));
  for (const auto& b : effects) sc.effects.push_back(b.finish(policy, keep_exact));
  if (sc.mode == ScenarioMode::Quantum) {
    sc.unit = identity_element(sc.hilbert_dim);
    if (!keep_exact || policy == ArithmeticPolicy::Float) drop_exact(sc.unit);
  } else {
    sc.unit = unit.finish(policy, keep_exact);
  }
  sc.povm_groups = groups;
  sc.state_labels.assign(sc.states.size(), "");
  sc.effect_labels.assign(sc.effects.size(), "");
  if (doc.contains("labels") && doc["labels"].is_object()) {
    const auto& lab = doc["labels"];
    if (lab.contains("states"))
      for (std::size_t i = 0; i < lab["states"].size() && i < sc.states.size(); ++i)
        sc.state_labels[i] = lab["states"][i].get<std::string>();
    if (lab.contains("effects"))
      for (std::size_t i = 0; i < lab["effects"].size() && i < sc.effects.size(); ++i)
        sc.effect_labels[i] = lab["effects"][i].get<std::string>();
  }

  // Entry-level validation first, so diagnostics name the offending input.
  std::vector<std::string> errors;
  for (std::size_t k = 0; k < sc.states.size(); ++k) {
    if (sc.mode == ScenarioMode::Quantum) {
      const auto rep = validate_state(element_matrix(sc, sc.states[k]), tol);
      if (!rep.ok) errors.push_back("states[" + std::to_string(k) + "]: " + rep.message);
    }
  }
  for (std::size_t l = 0; l < sc.effects.size(); ++l) {
    const std::string p = effect_problem(sc, sc.effects[l], tol);
    if (!p.empty()) errors.push_back("effects[" + std::to_string(l) + "]: " + p);
  }
  if (!errors.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ValidationError(msg);
  }
  complete(sc, tol);
  validate_scenario(sc, tol);
  return sc;
}

Scenario load_scenario_file(const std::string& path, ArithmeticPolicy policy, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError("scenario file '" + path + "' is not valid JSON: " + e.what());
  }
  return load_scenario(doc, policy, tol);
}

json scenario_to_json(const Scenario& sc) {
  json doc;
  auto matrix = [&](const Element& e) {
    const int d = sc.hilbert_dim;
    json m = json::array();
    for (int i = 0; i < d; ++i) {
      json row = json::array();
      for (int j = 0; j < d; ++j) {
        const std::size_t k = static_cast<std::size_t>(i) * d + j;
        row.push_back(json::array({number_json(e.re[k], e.qre ? &*e.qre : nullptr, k),
                                   number_json(e.im[k], e.qim ? &*e.qim : nullptr, k)}));
      }
      m.push_back(row);
    }
    return m;
  };
  auto vector = [&](const Element& e) {
    json v = json::array();
    for (std::size_t k = 0; k < e.re.size(); ++k) v.push_back(number_json(e.re[k], e.qre ? &*e.qre : nullptr, k));
    return v;
  };
  if (sc.mode == ScenarioMode::Quantum) {
    doc["mode"] = "quantum";
    doc["hilbert_dim"] = sc.hilbert_dim;
    doc["states"] = json::array();
    for (const auto& s : sc.states) doc["states"].push_back(matrix(s));
    doc["extra_effects"] = json::array();
    for (const auto& e : sc.effects) doc["extra_effects"].push_back(matrix(e));
  } else {
    doc["mode"] = "gpt";
    doc["space_dim"] = sc.space_dim;
    doc["gpt_states"] = json::array();
    for (const auto& s : sc.states) doc["gpt_states"].push_back(vector(s));
    doc["gpt_effects"] = json::array();
    for (const auto& e : sc.effects) doc["gpt_effects"].push_back(vector(e));
    doc["gpt_unit"] = vector(sc.unit);
  }
  doc["povm_indices"] = sc.povm_groups;
  bool labelled = false;
  for (const auto& l : sc.state_labels) labelled = labelled || !l.empty();
  for (const auto& l : sc.effect_labels) labelled = labelled || !l.empty();
  if (labelled) doc["labels"] = {{"states", sc.state_labels}, {"effects", sc.effect_labels}};
  return doc;
}

std::string scenario_digest(const Scenario& sc) { return sha256_hex(scenario_to_json(sc).dump()); }

Scenario coarse_grain_augment(const Scenario& sc, const std::vector<int>& indices, const Tolerances& tol) {
  if (indices.empty()) return sc;
  for (int i : indices)
    if (i < 0 || i >= static_cast<int>(sc.effects.size()))
      throw ValidationError("coarse_grain_augment: effect index out of range");
  Element sum = sc.effects[indices[0]];
  for (std::size_t t = 1; t < indices.size(); ++t) sum = add(sum, sc.effects[indices[t]]);
  const Element comp = sub(sc.unit, sum);
  const std::string problem = effect_problem(sc, comp, tol);
  if (!problem.empty()) throw ValidationError("coarse_grain_augment: sum exceeds the unit (" + problem + ")");
  Scenario out = sc;
  if (find_effect(out, sum, tol.povm_tol) >= 0) {
    out.notes.push_back("coarse-graining duplicates an existing effect; unchanged");
    return out;
  }
  out.effects.push_back(sum);
  out.effect_labels.push_back("coarse-grain");
  const int s_idx = static_cast<int>(out.effects.size()) - 1;
  // A completion: the rest of a POVM group that contains every index, or the
  // complement effect otherwise.
  for (const auto& g : sc.povm_groups) {
    bool all = true;
    for (int i : indices) all = all && std::find(g.begin(), g.end(), i) != g.end();
    if (!all) continue;
    std::vector<int> grp = {s_idx};
    std::vector<int> used = indices;
    for (int i : g) {
      auto it = std::find(used.begin(), used.end(), i);
      if (it != used.end()) {
        used.erase(it);
        continue;
      }
      grp.push_back(i);
    }
    out.povm_groups.push_back(grp);
    out.notes.push_back("appended coarse-grained effect");
    return out;
  }
  int c = find_effect(out, comp, tol.povm_tol);
  if (c < 0) {
    out.effects.push_back(comp);
    out.effect_labels.push_back("coarse-grain complement");
    c = static_cast<int>(out.effects.size()) - 1;
  }
  out.povm_groups.push_back({s_idx, c});
  out.notes.push_back("appended coarse-grained effect with its complement");
  return out;
}

Scenario ancilla_embed(const Scenario& sc, int ancilla_dim) {
  if (sc.mode != ScenarioMode::Quantum) throw ValidationError("ancilla_embed requires a quantum scenario");
  if (ancilla_dim < 1) throw ValidationError("ancilla dimension must be positive");
  if (ancilla_dim == 1) return sc;
  const int d = sc.hilbert_dim, k = ancilla_dim, n = d * k;
  // a (x) b where b is real diagonal given by `diag`.
  auto kron_diag = [&](const Element& a, const std::vector<int>& diag) {
    Element e;
    e.re.assign(n * n, 0.0);
    e.im.assign(n * n, 0.0);
    std::vector<Rational> qre, qim;
    if (a.qre) {
      qre.assign(n * n, Rational(0));
      qim.assign(n * n, Rational(0));
    }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int t = 0; t < k; ++t) {
          if (!diag[t]) continue;
          const int r = i * k + t, c = j * k + t;
          e.re[r * n + c] = a.re[i * d + j];
          e.im[r * n + c] = a.im[i * d + j];
          if (a.qre) {
            qre[r * n + c] = (*a.qre)[i * d + j];
            qim[r * n + c] = (*a.qim)[i * d + j];
          }
        }
    if (a.qre) {
      e.qre = std::move(qre);
      e.qim = std::move(qim);
    }
    return e;
  };
  std::vector<int> pure(k, 0), ident(k, 1);
  pure[0] = 1;
  Scenario out = sc;
  out.hilbert_dim = n;
  for (auto& s : out.states) s = kron_diag(s, pure);
  for (auto& e : out.effects) e = kron_diag(e, ident);
  out.unit = kron_diag(sc.unit, ident);
  out.notes.push_back("ancilla embedding with dimension " + std::to_string(k));
  return out;
}

namespace {

Scenario depolarize_impl(const Scenario& sc, double eta, const Rational* q) {
  if (sc.mode != ScenarioMode::Quantum) throw ValidationError("depolarized requires a quantum scenario");
  if (eta < 0 || eta > 1) throw ValidationError("depolarization parameter must lie in [0, 1]");
  const int d = sc.hilbert_dim;
  Element mixed = identity_element(d);
  for (auto& x : mixed.re) x /= d;
  for (auto& x : *mixed.qre) x /= d;
  Scenario out = sc;
  for (auto& s : out.states) {
    if (q && s.qre) {
      const Rational rest = Rational(1) - *q;
      s = combine(s, mixed, eta, 1 - eta, q, &rest);
    } else {
      s = combine(s, mixed, eta, 1 - eta, nullptr, nullptr);
    }
  }
  out.notes.push_back("depolarized with eta = " + (q ? to_string(*q) : std::to_string(eta)));
  return out;
}

}  // namespace

Scenario depolarized(const Scenario& sc, const Rational& eta) {
  return depolarize_impl(sc, eta.convert_to<double>(), &eta);
}

Scenario depolarized(const Scenario& sc, double eta) {
  Scenario out = depolarize_impl(sc, eta, nullptr);
  return out;
}

std::vector<std::array<double, 3>> bloch_directions(int count, std::uint64_t seed) {
  std::vector<std::array<double, 3>> out;
  const std::array<std::array<double, 3>, 6> octa = {
      {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
  for (const auto& v : octa) {
    if (static_cast<int>(out.size()) == count) return out;
    out.push_back(v);
  }
  const double c = 1.0 / std::sqrt(3.0);
  for (int sx : {1, -1})
    for (int sy : {1, -1})
      for (int sz : {1, -1}) {
        if (static_cast<int>(out.size()) == count) return out;
        out.push_back({sx * c, sy * c, sz * c});
      }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double shift_z = unif(rng), shift_phi = unif(rng);
  for (std::uint64_t i = 1; static_cast<int>(out.size()) < count; ++i) {
    const double u = std::fmod(radical_inverse(i, 2) + shift_z, 1.0);
    const double v = std::fmod(radical_inverse(i, 3) + shift_phi, 1.0);
    const double z = 1 - 2 * u;
    const double r = std::sqrt(std::max(0.0, 1 - z * z));
    const double phi = 2 * std::numbers::pi * v;
    out.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return out;
}

Scenario builtin_scenario(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& name = parts[0];
  Scenario sc;
  sc.mode = ScenarioMode::Quantum;
  auto need = [&](std::size_t n) {
    if (parts.size() != n + 1)
      throw ValidationError("builtin " + name + " expects " + std::to_string(n) + " parameter(s)");
  };
  if (name == "depolarized") {
    if (parts.size() < 3) throw ValidationError("builtin depolarized expects <builtin>:eta");
    std::string inner = parts[1];
    for (std::size_t i = 2; i + 1 < parts.size(); ++i) inner += ":" + parts[i];
    const Rational eta = parse_rational(parts.back());
    return depolarized(builtin_scenario(inner), eta);
  }
  if (name == "classical_simplex") {
    need(1);
    const int d = parse_int_arg(parts[1], name);
    if (d < 1 || d > 16) throw ValidationError("classical_simplex: d must be in [1, 16]");
    sc.hilbert_dim = d;
    std::vector<int> group;
    for (int i = 0; i < d; ++i) {
      Element e = zero_like(identity_element(d));
      e.re[i * d + i] = 1;
      (*e.qre)[i * d + i] = 1;
      sc.states.push_back(e);
      sc.effects.push_back(e);
      group.push_back(i);
    }
    sc.povm_groups.push_back(group);
    sc.unit = identity_element(d);
  } else if (name == "qubit_six_state") {
    need(0);
    sc.hilbert_dim = 2;
    const int axes[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (const auto& a : axes) {
      for (int s : {1, -1}) sc.states.push_back(exact_pure(s * a[0], s * a[1], s * a[2]));
    }
    for (int g = 0; g < 3; ++g) {
      const auto& a = axes[g];
      sc.effects.push_back(exact_pure(a[0], a[1], a[2]));
      sc.effects.push_back(exact_pure(-a[0], -a[1], -a[2]));
      sc.povm_groups.push_back({2 * g, 2 * g + 1});
    }
    sc.unit = identity_element(2);
  } else if (name == "qubit_trine") {
    need(0);
    sc.hilbert_dim = 2;
    std::vector<int> group;
    for (int k = 0; k < 3; ++k) {
      const double th = 2 * std::numbers::pi * k / 3;
      const Element p = quantum_pure({std::sin(th), 0.0, std::cos(th)});
      sc.states.push_back(p);
      Element e = p;
      for (auto& x : e.re) x *= 2.0 / 3.0;
      for (auto& x : e.im) x *= 2.0 / 3.0;
      sc.effects.push_back(e);
      group.push_back(k);
    }
    sc.povm_groups.push_back(group);
    sc.unit = identity_element(2);
    drop_exact(sc.unit);
  } else if (name == "qubit_full") {
    need(2);
    const int ns = parse_int_arg(parts[1], name), ne = parse_int_arg(parts[2], name);
    if (ns < 1 || ne < 1 || ns > 4096 || ne > 4096) throw ValidationError("qubit_full: ray counts out of range");
    sc.hilbert_dim = 2;
    for (const auto& n : bloch_directions(ns)) sc.states.push_back(quantum_pure(n));
    for (const auto& n : bloch_directions(ne)) sc.effects.push_back(quantum_pure(n));
    sc.unit = identity_element(2);
    drop_exact(sc.unit);
  } else if (name == "qutrit_full") {
    need(0);
    // Basis states and pairwise superpositions with phases +-1, +-i; they span Herm(C^3).
    sc.hilbert_dim = 3;
    auto projector = [](int i, int j, int phase) {
      Element e = zero_like(identity_element(3));
      auto set = [&](int r, int c, Rational re, Rational im) {
        (*e.qre)[r * 3 + c] = re;
        (*e.qim)[r * 3 + c] = im;
        e.re[r * 3 + c] = re.convert_to<double>();
        e.im[r * 3 + c] = im.convert_to<double>();
      };
      if (j < 0) {
        set(i, i, 1, 0);
        return e;
      }
      const Rational h(1, 2);
      set(i, i, h, 0);
      set(j, j, h, 0);
      // |psi> = (|i> + w |j>) / sqrt 2 with w in {1, -1, i, -i}
      const Rational wr = phase == 0 ? 1 : phase == 1 ? -1 : 0;
      const Rational wi = phase == 2 ? 1 : phase == 3 ? -1 : 0;
      set(j, i, h * wr, h * wi);
      set(i, j, h * wr, -h * wi);
      return e;
    };
    for (int i = 0; i < 3; ++i) sc.states.push_back(projector(i, -1, 0));
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        for (int ph = 0; ph < 4; ++ph) sc.states.push_back(projector(i, j, ph));
    sc.effects = sc.states;
    sc.unit = identity_element(3);
  } else if (name == "gpt_square") {
    need(0);
    sc.mode = ScenarioMode::Gpt;
    sc.space_dim = 3;
    for (int x : {1, -1})
      for (int y : {1, -1}) sc.states.push_back(exact_vector({1, x, y}));
    const Rational h(1, 2);
    sc.effects.push_back(exact_vector({h, h, 0}));
    sc.effects.push_back(exact_vector({h, -h, 0}));
    sc.effects.push_back(exact_vector({h, 0, h}));
    sc.effects.push_back(exact_vector({h, 0, -h}));
    sc.povm_groups = {{0, 1}, {2, 3}};
    sc.unit = exact_vector({1, 0, 0});
  } else if (name == "gpt_simplex") {
    need(1);
    const int d = parse_int_arg(parts[1], name);
    if (d < 1 || d > 16) throw ValidationError("gpt_simplex: d must be in [1, 16]");
    sc.mode = ScenarioMode::Gpt;
    sc.space_dim = d;
    std::vector<int> group;
    for (int i = 0; i < d; ++i) {
      std::vector<Rational> v(d, Rational(0));
      v[i] = 1;
      sc.states.push_back(exact_vector(v));
      sc.effects.push_back(exact_vector(v));
      group.push_back(i);
    }
    sc.povm_groups.push_back(group);
    sc.unit = exact_vector(std::vector<Rational>(d, Rational(1)));
  } else {
    throw ValidationError("unknown builtin scenario '" + name + "'");
  }
  sc.state_labels.assign(sc.states.size(), "");
  sc.effect_labels.assign(sc.effects.size(), "");
  const Tolerances tol;
  complete(sc, tol);
  validate_scenario(sc, tol);
  return sc;
}

std::vector<std::string> builtin_names() {
  return {"classical_simplex:d", "qubit_full:ns:ne", "qubit_six_state", "qubit_trine", "qutrit_full",
          "gpt_square",          "gpt_simplex:d",    "depolarized:<builtin>:eta"};
}

Scenario resolve_scenario(const std::string& arg, ArithmeticPolicy policy, const Tolerances& tol) {
  const std::string prefix = "builtin:";
  if (arg.rfind(prefix, 0) == 0) {
    Scenario sc = builtin_scenario(arg.substr(prefix.size()));
    if (policy == ArithmeticPolicy::Float) {
      for (auto& e : sc.states) drop_exact(e);
      for (auto& e : sc.effects) drop_exact(e);
      drop_exact(sc.unit);
    } else if (policy == ArithmeticPolicy::Exact && !sc.exact_available()) {
      // Round-trip through the loader converts the float data.
      return load_scenario(scenario_to_json(sc), policy, tol);
    }
    return sc;
  }
  return load_scenario_file(arg, policy, tol);
}

std::vector<std::vector<double>> probability_table(const Scenario& sc) {
  std::vector<std::vector<double>> t(sc.states.size(), std::vector<double>(sc.effects.size()));
  for (std::size_t k = 0; k < sc.states.size(); ++k)
    for (std::size_t l = 0; l < sc.effects.size(); ++l) t[k][l] = pairing(sc, sc.states[k], sc.effects[l]);
  return t;
}

}  // namespace conekit
