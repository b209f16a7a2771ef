#include "conekit/unit_separability.hpp"

#include <chrono>
#include <cstdlib>
#include <limits>
#include <optional>

#include "conekit/linalg.hpp"
#include "conekit/lp.hpp"

namespace conekit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class S>
double metric_norm(const Vec<S>& v, const Vec<S>& metric) {
  return std::sqrt(Arith<S>::to_double(dot(v, v, metric)));
}

/// Polar of the cone generated by `gens` under the inner product with
/// diagonal weights `gram`.
template <class S>
ConeV<S> polar_with_metric(const Mat<S>& gens, const Vec<S>& gram, const ClassifyOptions& opts,
                           const char* what, std::size_t max_rays = 0) {
  ConeV<S> c;
  c.ambient_dim = static_cast<int>(gram.size());
  for (const auto& g : gens) c.rays.push_back(hadamard(g, gram));
  EnumerationOptions eo;
  eo.tol = opts.tol.polar_tol;
  eo.threads = opts.threads;
  if (max_rays) eo.max_rays = max_rays;
  try {
    return vertex_enumeration(c, eo);
  } catch (const PreconditionError& e) {
    throw PreconditionError(std::string(what) + ": " + e.what());
  }
}

bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

template <class S>
bool nonnegative(const S& v, double tol) {
  return Arith<S>::sign(v, tol) >= 0;
}

/** Looks for a model with exactly dim(R) terms whose F (or sigma) vectors are
 * extremal rays of the polar state (or effect) cone. The partner vectors are
 * then fixed by sum F_i sigma_i^T = diag(1/G) and only need a sign check. */
template <class S>
std::optional<ClassicalModel<S>> subset_model(const ReducedSpace<S>& r, const ConeV<S>& ms,
                                              const ConeV<S>& me, const ClassifyOptions& opts) {
  const int d = r.dim;
  const auto& g = r.gram();
  std::size_t tried = 0;
  for (int side = 0; side < 2; ++side) {
    const Mat<S>& pool = side == 0 ? ms.rays : me.rays;
    const Mat<S>& partner_gens = side == 0 ? r.effects : r.states;
    const int n = static_cast<int>(pool.size());
    if (n < d) continue;
    std::vector<int> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    do {
      if (++tried > opts.subset_budget) return std::nullopt;
      Mat<S> cols(d, Vec<S>(d));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) cols[j][i] = pool[idx[i]][j];
      const auto inv = inverse(cols, 1e-12);
      if (!inv) continue;
      bool ok = true;
      for (int i = 0; i < d && ok; ++i)
        for (const auto& e : partner_gens)
          if (!nonnegative(dot((*inv)[i], e), opts.tol.polar_tol)) {
            ok = false;
            break;
          }
      if (!ok) continue;
      ClassicalModel<S> m;
      m.r_dim = d;
      for (int i = 0; i < d; ++i) {
        Vec<S> partner(d);
        for (int j = 0; j < d; ++j) partner[j] = (*inv)[i][j] / g[j];
        if (side == 0)
          m.pairs.push_back({pool[idx[i]], partner});
        else
          m.pairs.push_back({partner, pool[idx[i]]});
      }
      return m;
    } while (next_combination(idx, n));
  }
  return std::nullopt;
}

/// Rescales every pair so that <sigma, P_R(unit)> = 1, dropping null terms.
template <class S>
ClassicalModel<S> normalize_model(const ClassicalModel<S>& raw, const ReducedSpace<S>& r, double tol) {
  ClassicalModel<S> m;
  m.r_dim = raw.r_dim;
  for (const auto& p : raw.pairs) {
    const S tr = dot(p.sigma, r.unit, r.gram());
    if (Arith<S>::sign(tr, tol) <= 0) {
      if (!is_zero_vec(p.sigma, tol) && !is_zero_vec(p.F, tol))
        throw Error("model extraction: sigma with non-positive trace is not zero");
      continue;
    }
    m.pairs.push_back({scaled(p.F, tr), scaled(p.sigma, S(S(1) / tr))});
  }
  return m;
}

}  // namespace

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Classical:
      return "Classical";
    case VerdictKind::NonClassical:
      return "NonClassical";
    case VerdictKind::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

std::size_t max_tensor_dim_from_env(std::size_t fallback) {
  if (const char* v = std::getenv("CONEKIT_MAX_TENSOR_DIM")) {
    char* end = nullptr;
    const long x = std::strtol(v, &end, 10);
    if (end != v && *end == '\0' && x > 0) return static_cast<std::size_t>(x);
  }
  return fallback;
}

template <class S>
Vec<S> tensor_metric(const ReducedSpace<S>& r) {
  return kron(r.gram(), r.gram());
}

template <class S>
TensorVector<S> choi_identity(const ReducedSpace<S>& r) {
  const int d = r.dim;
  TensorVector<S> j;
  j.r_dim = d;
  j.coords.assign(static_cast<std::size_t>(d) * d, S(0));
  for (int i = 0; i < d; ++i) j.coords[i * d + i] = S(1) / r.gram()[i];
  return j;
}

template <class S>
ConeV<S> polar_state_cone(const ReducedSpace<S>& r, const ClassifyOptions& opts) {
  return polar_with_metric(r.states, r.gram(), opts, "polar state cone");
}

template <class S>
ConeV<S> polar_effect_cone(const ReducedSpace<S>& r, const ClassifyOptions& opts) {
  return polar_with_metric(r.effects, r.gram(), opts, "polar effect cone");
}

template <class S>
SepGenerators<S> sep_extremal_rays(const ConeV<S>& ms, const ConeV<S>& me) {
  if (ms.ambient_dim != me.ambient_dim) throw std::invalid_argument("sep_extremal_rays: dimension mismatch");
  SepGenerators<S> sep;
  sep.r_dim = ms.ambient_dim;
  for (std::size_t i = 0; i < ms.rays.size(); ++i)
    for (std::size_t j = 0; j < me.rays.size(); ++j) {
      sep.rays.push_back(kron(ms.rays[i], me.rays[j]));
      sep.factors.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  return sep;
}

template <class S>
WitnessSet<S> witness_set(const SepGenerators<S>& sep, const ReducedSpace<S>& r, const ClassifyOptions& opts) {
  const Vec<S> tm = tensor_metric(r);
  const auto polar = polar_with_metric(sep.rays, tm, opts, "witness set");
  WitnessSet<S> w;
  w.r_dim = r.dim;
  w.rays = polar.rays;
  for (const auto& g : w.rays) w.norms.push_back(metric_norm(g, tm));
  return w;
}

template <class S>
S evaluate_model(const ClassicalModel<S>& m, const Vec<S>& rho, const Vec<S>& e, const Vec<S>& gram) {
  S acc = 0;
  for (const auto& p : m.pairs) acc += dot(rho, p.F, gram) * dot(p.sigma, e, gram);
  return acc;
}

template <class S>
ClassicalModel<S> extract_classical_model(const TensorVector<S>& j, const SepGenerators<S>& sep,
                                          const ConeV<S>& ms, const ConeV<S>& me,
                                          const ReducedSpace<S>& r, const ClassifyOptions& opts) {
  const int dd = static_cast<int>(j.coords.size());
  const int n = static_cast<int>(sep.rays.size());
  const double tol = opts.tol.lp_tol;

  // (1) conic decomposition of J minimizing the coefficient sum.
  Mat<S> a(dd, Vec<S>(n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < dd; ++i) a[i][k] = sep.rays[k][i];
  const auto lp = solve_lp(a, j.coords, Vec<S>(n, S(1)), tol);
  if (lp.status != LpStatus::Optimal)
    throw Error("model extraction: J(id_R) is not a conic combination of the Sep generators");

  std::vector<int> support;
  Vec<S> lambda;
  for (int k = 0; k < n; ++k)
    if (Arith<S>::sign(lp.x[k], tol) > 0) {
      support.push_back(k);
      lambda.push_back(lp.x[k]);
    }

  // (2) Caratheodory reduction on the weighted products v_i = lambda_i g_i:
  // take a dependence alpha (negated if it has no positive entry), zero the
  // term with the largest alpha (lowest index on ties) and rescale the others
  // by 1 - alpha_i / alpha_max, which keeps every coefficient nonnegative.
  for (int guard = 0; guard <= n; ++guard) {
    const int m = static_cast<int>(support.size());
    Mat<S> cols(dd, Vec<S>(m));
    for (int t = 0; t < m; ++t)
      for (int i = 0; i < dd; ++i) cols[i][t] = lambda[t] * sep.rays[support[t]][i];
    auto alpha = kernel_vector(cols, m, 1e-9);
    if (!alpha) break;
    bool any_pos = false;
    for (const auto& x : *alpha) any_pos = any_pos || Arith<S>::sign(x, 0.0) > 0;
    if (!any_pos)
      for (auto& x : *alpha) x = -x;
    int j0 = 0;
    for (int t = 1; t < m; ++t)
      if ((*alpha)[t] > (*alpha)[j0]) j0 = t;
    const S amax = (*alpha)[j0];
    std::vector<int> next_support;
    Vec<S> next_lambda;
    for (int t = 0; t < m; ++t) {
      if (t == j0) continue;
      const S theta = S(1) - (*alpha)[t] / amax;
      const S val = lambda[t] * theta;
      if (Arith<S>::sign(val, tol) <= 0) continue;
      next_support.push_back(support[t]);
      next_lambda.push_back(val);
    }
    if (next_support.size() >= support.size()) throw Error("model extraction: Caratheodory reduction stalled");
    support = std::move(next_support);
    lambda = std::move(next_lambda);
  }
  if (support.size() > static_cast<std::size_t>(r.dim) * r.dim)
    throw Error("model extraction: support exceeds dim(R)^2 after reduction");

  ClassicalModel<S> raw;
  raw.r_dim = r.dim;
  for (std::size_t t = 0; t < support.size(); ++t) {
    const auto [fi, si] = sep.factors[support[t]];
    raw.pairs.push_back({scaled(ms.rays[fi], lambda[t]), me.rays[si]});
  }

  // (3) optional search for a model with exactly dim(R) terms.
  if (opts.minimize_model && raw.cardinality() > static_cast<std::size_t>(r.dim)) {
    if (auto small = subset_model(r, ms, me, opts)) raw = std::move(*small);
  }

  // (4) normalization <sigma, P_R(unit)> = 1.
  return normalize_model(raw, r, opts.tol.polar_tol);
}

template <class S>
ModelCheck check_model(const ClassicalModel<S>& m, const ReducedSpace<S>& r, const Tolerances& tol) {
  ModelCheck c;
  auto fail = [&](const std::string& msg) {
    if (c.ok) c.first_violation = msg;
    c.ok = false;
  };
  const auto& g = r.gram();
  const int d = r.dim;
  const std::size_t n = m.cardinality();
  if (m.r_dim != d) fail("model dimension differs from dim(R)");
  for (std::size_t l = 0; l < n; ++l) {
    const auto& p = m.pairs[l];
    if (static_cast<int>(p.F.size()) != d || static_cast<int>(p.sigma.size()) != d) {
      fail("pair " + std::to_string(l) + " has wrong dimension");
      return c;
    }
    for (std::size_t k = 0; k < r.states.size(); ++k) {
      const S v = dot(r.states[k], p.F, g);
      const double vd = Arith<S>::to_double(v);
      c.min_state_pairing = (l == 0 && k == 0) ? vd : std::min(c.min_state_pairing, vd);
      if (Arith<S>::sign(v, tol.polar_tol) < 0)
        fail("F[" + std::to_string(l) + "] is negative on state " + std::to_string(k));
    }
    for (std::size_t k = 0; k < r.effects.size(); ++k) {
      const S v = dot(p.sigma, r.effects[k], g);
      const double vd = Arith<S>::to_double(v);
      c.min_effect_pairing = (l == 0 && k == 0) ? vd : std::min(c.min_effect_pairing, vd);
      if (Arith<S>::sign(v, tol.polar_tol) < 0)
        fail("sigma[" + std::to_string(l) + "] is negative on effect " + std::to_string(k));
    }
    const S tr = dot(p.sigma, r.unit, g);
    const double dev = std::abs(Arith<S>::to_double(tr) - 1.0);
    c.max_normalization_error = std::max(c.max_normalization_error, dev);
    if (!Arith<S>::is_zero(S(tr - S(1)), 1e-9)) fail("sigma[" + std::to_string(l) + "] violates normalization");
  }
  // Reconstruction in orthonormal tensor coordinates.
  const auto j = choi_identity(r);
  Vec<S> sum(static_cast<std::size_t>(d) * d, S(0));
  for (const auto& p : m.pairs) axpy(S(1), kron(p.F, p.sigma), sum);
  const auto tm = tensor_metric(r);
  bool recon_ok = true;
  for (std::size_t i = 0; i < sum.size(); ++i) {
    const S diff = sum[i] - j.coords[i];
    const double scaled_diff =
        std::abs(Arith<S>::to_double(diff)) * std::sqrt(Arith<S>::to_double(tm[i]));
    c.max_reconstruction_error = std::max(c.max_reconstruction_error, scaled_diff);
    if constexpr (Arith<S>::exact) {
      if (!diff.is_zero()) recon_ok = false;
    } else if (scaled_diff > tol.recon_tol) {
      recon_ok = false;
    }
  }
  if (!recon_ok) fail("sum of F (x) sigma differs from J(id_R)");
  if (n < static_cast<std::size_t>(d) || n > static_cast<std::size_t>(d) * d)
    fail("cardinality " + std::to_string(n) + " outside [dim R, dim R^2]");
  return c;
}

template <class S>
WitnessCheck check_witness(const Vec<S>& gamma, const SepGenerators<S>& sep, const ReducedSpace<S>& r,
                           const Tolerances& tol) {
  WitnessCheck c;
  auto fail = [&](const std::string& msg) {
    if (c.ok) c.first_violation = msg;
    c.ok = false;
  };
  const auto tm = tensor_metric(r);
  const std::size_t dd = tm.size();
  if (gamma.size() != dd) {
    fail("witness has wrong dimension");
    return c;
  }
  c.norm = metric_norm(gamma, tm);
  if (c.norm == 0) {
    fail("witness is zero");
    return c;
  }
  Mat<double> tight;
  bool first = true;
  for (std::size_t k = 0; k < sep.rays.size(); ++k) {
    const S v = dot(gamma, sep.rays[k], tm);
    const double unit_v = Arith<S>::to_double(v) / (c.norm * metric_norm(sep.rays[k], tm));
    c.min_generator_value = first ? unit_v : std::min(c.min_generator_value, unit_v);
    first = false;
    if constexpr (Arith<S>::exact) {
      if (v < 0) fail("witness is negative on Sep generator " + std::to_string(k));
      if (v.is_zero()) tight.push_back(to_double(hadamard(sep.rays[k], tm)));
    } else {
      if (unit_v < -tol.verdict_tol) fail("witness is negative on Sep generator " + std::to_string(k));
      if (std::abs(unit_v) <= 1e-7) tight.push_back(hadamard(sep.rays[k], tm));
    }
  }
  const auto j = choi_identity(r);
  const S vj = dot(gamma, j.coords, tm);
  c.value_on_j = Arith<S>::to_double(vj) / c.norm;
  if constexpr (Arith<S>::exact) {
    if (vj >= 0) fail("witness is not negative on J(id_R)");
  } else {
    if (c.value_on_j >= -tol.verdict_tol) fail("witness is not negative on J(id_R)");
  }
  c.tight_rank = tight.empty() ? 0 : rank(tight, static_cast<int>(dd), 1e-9);
  if (c.tight_rank != static_cast<int>(dd) - 1) fail("witness is not an extremal ray of the polar of Sep");
  return c;
}

template <class S>
ReducedSpace<S> scenario_reduced_space(const Scenario& sc, bool swapped, const Tolerances& tol) {
  const auto a = ambient_data<S>(sc);
  return swapped ? swapped_reduced_space(a.states, a.effects, a.unit, a.metric, tol.rank_tol)
                 : reduced_space(a.states, a.effects, a.unit, a.metric, tol.rank_tol);
}

template <class S>
SepMembership<S> sep_membership(const Vec<S>& target, const SepGenerators<S>& sep, const Vec<S>& tm,
                                const ClassifyOptions& opts, const Vec<S>* normalizer) {
  SepMembership<S> out;
  WitnessStrategy strategy = opts.strategy;
  const bool automatic = strategy == WitnessStrategy::Auto;
  if (automatic)
    strategy = sep.rays.size() <= opts.enumerate_budget ? WitnessStrategy::Enumerate
                                                        : WitnessStrategy::LinearProgram;
  std::optional<ConeV<S>> polar;
  if (strategy == WitnessStrategy::Enumerate) {
    try {
      polar = polar_with_metric(sep.rays, tm, opts, "witness set", automatic ? opts.enumerate_max_rays : 0);
    } catch (const ResourceError&) {
      if (!automatic) throw;
    }
  }
  if (polar) {
    out.strategy = "enumerate";
    WitnessSet<S> w;
    w.r_dim = sep.r_dim;
    w.rays = std::move(polar->rays);
    for (const auto& g : w.rays) w.norms.push_back(metric_norm(g, tm));
    int best = -1;
    double best_val = 0;
    bool any_negative = false, best_zero = false;
    for (std::size_t k = 0; k < w.rays.size(); ++k) {
      const S raw = dot(w.rays[k], target, tm);
      const double unit_val = Arith<S>::to_double(raw) / w.norms[k];
      bool negative;
      if constexpr (Arith<S>::exact)
        negative = raw < 0;
      else
        negative = unit_val < -opts.tol.verdict_tol;
      any_negative = any_negative || negative;
      if (best < 0 || unit_val < best_val) {
        best = static_cast<int>(k);
        best_val = unit_val;
        best_zero = Arith<S>::is_zero(raw, 0.0);
      }
    }
    out.witness_value = best_val;
    out.member = !any_negative;
    if (any_negative) {
      out.witness = w.rays[best];
    } else if constexpr (Arith<S>::exact) {
      out.boundary_near = best_zero;
    } else {
      out.boundary_near = best_val < opts.tol.margin_tol;
    }
    out.witnesses = std::move(w);
    return out;
  }

  out.strategy = "linear-program";
  // max t  s.t.  sum_k lambda_k g_k + t c = target,  lambda >= 0, t = t+ - t-.
  const int dd = static_cast<int>(tm.size());
  const int n = static_cast<int>(sep.rays.size());
  Vec<S> c(dd, S(0));
  if (normalizer) {
    c = *normalizer;
  } else {
    for (const auto& g : sep.rays) axpy(S(1), g, c);
    for (auto& x : c) x /= S(n);
  }
  Mat<S> a(dd, Vec<S>(n + 2));
  Vec<S> cost(n + 2, S(0));
  for (int i = 0; i < dd; ++i) {
    for (int k = 0; k < n; ++k) a[i][k] = sep.rays[k][i];
    a[i][n] = c[i];
    a[i][n + 1] = -c[i];
  }
  cost[n] = -1;
  cost[n + 1] = 1;
  const auto lp = solve_lp(a, target, cost, opts.tol.lp_tol);
  if (lp.status == LpStatus::Infeasible) {
    // Only possible when the normalizer lies outside the cone.
    out.lp_margin = -std::numeric_limits<double>::infinity();
    out.witness_value = out.lp_margin;
    return out;
  }
  if (lp.status != LpStatus::Optimal) throw Error("witness linear program did not reach an optimum");
  const S t = lp.x[n] - lp.x[n + 1];
  out.lp_margin = Arith<S>::to_double(t);
  // Dual: z = -y satisfies <g, z> >= 0, <c, z> = 1, <target, z> = t*.
  Vec<S> gamma(dd);
  for (int i = 0; i < dd; ++i) gamma[i] = -lp.y[i] / tm[i];
  gamma = canonical_ray(gamma);
  const double norm = metric_norm(gamma, tm);
  out.witness_value = Arith<S>::to_double(dot(gamma, target, tm)) / norm;
  bool negative;
  if constexpr (Arith<S>::exact)
    negative = t < 0;
  else
    negative = out.witness_value < -opts.tol.verdict_tol;
  out.member = !negative;
  if (negative) {
    out.witness = std::move(gamma);
  } else if constexpr (Arith<S>::exact) {
    out.boundary_near = t == 0;
  } else {
    out.boundary_near = out.witness_value < opts.tol.margin_tol;
  }
  return out;
}

template <class S>
PipelineResult<S> classify(const ReducedSpace<S>& r, const ClassifyOptions& opts) {
  PipelineResult<S> res;
  res.r = r;
  const std::size_t tensor_dim = static_cast<std::size_t>(r.dim) * r.dim;
  if (tensor_dim > opts.max_tensor_dim)
    throw ResourceError("dim(R) = " + std::to_string(r.dim) + " gives a tensor space of dimension " +
                        std::to_string(tensor_dim) + " above the limit " + std::to_string(opts.max_tensor_dim) +
                        " (set CONEKIT_MAX_TENSOR_DIM to raise it)");
  const double ptol = opts.tol.polar_tol;

  auto t0 = Clock::now();
  res.state_cone = extreme_ray_filter(make_cone(r.dim, r.states, ptol), ptol);
  res.effect_cone = extreme_ray_filter(make_cone(r.dim, r.effects, ptol), ptol);
  res.state_cone.pointed = res.state_cone.spanning = true;
  res.effect_cone.pointed = res.effect_cone.spanning = true;
  res.timings["input_cones"] = seconds_since(t0);

  t0 = Clock::now();
  res.polar_states = polar_state_cone(r, opts);
  res.polar_effects = polar_effect_cone(r, opts);
  res.timings["polar_cones"] = seconds_since(t0);

  res.sep = sep_extremal_rays(res.polar_states, res.polar_effects);
  const auto j = choi_identity(r);
  const auto tm = tensor_metric(r);
  const double sqrt_dim = std::sqrt(static_cast<double>(r.dim));

  Verdict<S>& v = res.verdict;
  t0 = Clock::now();
  auto sm = sep_membership(j.coords, res.sep, tm, opts);
  res.timings["witnesses"] = seconds_since(t0);
  res.strategy = sm.strategy;
  res.witnesses = std::move(sm.witnesses);
  v.violation = sm.witness_value;
  v.violation_normalized = sm.witness_value / sqrt_dim;
  v.boundary_near = sm.boundary_near;
  const bool classical = sm.member;
  if (!classical) v.witness = std::move(sm.witness);

  if (!classical) {
    v.kind = VerdictKind::NonClassical;
    if constexpr (!Arith<S>::exact) {
      const auto chk = check_witness(v.witness, res.sep, r, opts.tol);
      if (chk.min_generator_value < -opts.tol.verdict_tol) {
        v.kind = VerdictKind::Inconclusive;
        v.reason = "witness failed the soundness replay: " + chk.first_violation;
      }
    }
    return res;
  }
  v.kind = VerdictKind::Classical;
  if (opts.extract_model) {
    t0 = Clock::now();
    v.model = extract_classical_model(j, res.sep, res.polar_states, res.polar_effects, r, opts);
    res.timings["model"] = seconds_since(t0);
    const auto chk = check_model(*v.model, r, opts.tol);
    if (!chk.ok) throw Error("extracted model failed its own check: " + chk.first_violation);
  }
  return res;
}

template <class S>
PipelineResult<S> classify_scenario(const Scenario& sc, const ClassifyOptions& opts) {
  return classify(scenario_reduced_space<S>(sc, opts.swapped, opts.tol), opts);
}

VerdictKind classify_kind(const Scenario& sc, const ClassifyOptions& opts) {
  if (sc.exact_available()) return classify_scenario<Rational>(sc, opts).verdict.kind;
  return classify_scenario<double>(sc, opts).verdict.kind;
}

#define CONEKIT_INSTANTIATE(S)                                                                          \
  template Vec<S> tensor_metric<S>(const ReducedSpace<S>&);                                             \
  template TensorVector<S> choi_identity<S>(const ReducedSpace<S>&);                                    \
  template ConeV<S> polar_state_cone<S>(const ReducedSpace<S>&, const ClassifyOptions&);                \
  template ConeV<S> polar_effect_cone<S>(const ReducedSpace<S>&, const ClassifyOptions&);               \
  template SepGenerators<S> sep_extremal_rays<S>(const ConeV<S>&, const ConeV<S>&);                     \
  template WitnessSet<S> witness_set<S>(const SepGenerators<S>&, const ReducedSpace<S>&,                \
                                        const ClassifyOptions&);                                        \
  template ClassicalModel<S> extract_classical_model<S>(const TensorVector<S>&, const SepGenerators<S>&, \
                                                        const ConeV<S>&, const ConeV<S>&,               \
                                                        const ReducedSpace<S>&, const ClassifyOptions&); \
  template S evaluate_model<S>(const ClassicalModel<S>&, const Vec<S>&, const Vec<S>&, const Vec<S>&);  \
  template ModelCheck check_model<S>(const ClassicalModel<S>&, const ReducedSpace<S>&, const Tolerances&); \
  template WitnessCheck check_witness<S>(const Vec<S>&, const SepGenerators<S>&, const ReducedSpace<S>&, \
                                         const Tolerances&);                                            \
  template SepMembership<S> sep_membership<S>(const Vec<S>&, const SepGenerators<S>&, const Vec<S>&,    \
                                              const ClassifyOptions&, const Vec<S>*);                   \
  template PipelineResult<S> classify<S>(const ReducedSpace<S>&, const ClassifyOptions&);               \
  template ReducedSpace<S> scenario_reduced_space<S>(const Scenario&, bool, const Tolerances&);          \
  template PipelineResult<S> classify_scenario<S>(const Scenario&, const ClassifyOptions&);

CONEKIT_INSTANTIATE(double)
CONEKIT_INSTANTIATE(Rational)

#undef CONEKIT_INSTANTIATE

}  // namespace conekit
