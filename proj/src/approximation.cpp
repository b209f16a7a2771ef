#include "conekit/approximation.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "conekit/linalg.hpp"

namespace conekit {

namespace {

using cd = std::complex<double>;

constexpr std::uint64_t kReplayStream = 0x9E3779B97F4A7C15ULL;

Vec<double> herm_coords(const ComplexMatrix& m) {
  const auto basis = hermitian_basis(static_cast<int>(m.rows()));
  return to_coords(m, basis, 1e-9).coords;
}

ComplexMatrix pauli_combination(double a0, double x, double y, double z) {
  ComplexMatrix m(2, 2);
  m(0, 0) = a0 + z;
  m(1, 1) = a0 - z;
  m(0, 1) = cd(x, -y);
  m(1, 0) = cd(x, y);
  return m;
}

class BlochBallSampler final : public ConeSampler {
 public:
  explicit BlochBallSampler(double eta) : eta_(eta) {
    if (!(eta >= 0 && eta <= 1)) throw std::invalid_argument("bloch_ball_sampler: eta outside [0, 1]");
  }
  int ambient_dim() const override { return 4; }

  Mat<double> rays(std::size_t k, std::uint64_t seed) const override {
    Mat<double> out;
    for (const auto& n : bloch_directions(static_cast<int>(k), seed))
      out.push_back(herm_coords(pauli_combination(0.5, eta_ * n[0] / 2, eta_ * n[1] / 2, eta_ * n[2] / 2)));
    return out;
  }

  // I + n.sigma / eta vanishes on the state pointing along -n.
  Mat<double> faces(std::size_t k, std::uint64_t seed) const override {
    Mat<double> out;
    const double s = eta_ > 0 ? 1.0 / eta_ : 1.0;
    for (const auto& n : bloch_directions(static_cast<int>(k), seed))
      out.push_back(herm_coords(pauli_combination(1, s * n[0], s * n[1], s * n[2])));
    return out;
  }

  std::string describe() const override { return "bloch_ball(eta=" + std::to_string(eta_) + ")"; }

 private:
  double eta_;
};

/// Structured unit vectors (basis, then pairwise real and imaginary
/// superpositions) followed by a seeded Gaussian tail.
std::vector<Eigen::VectorXcd> sample_unit_vectors(int d, std::size_t k, std::uint64_t seed) {
  std::vector<Eigen::VectorXcd> out;
  auto push = [&](Eigen::VectorXcd v) {
    if (out.size() < k) out.push_back(v / v.norm());
  };
  for (int i = 0; i < d; ++i) push(Eigen::VectorXcd::Unit(d, i));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (cd phase : {cd(1, 0), cd(-1, 0), cd(0, 1), cd(0, -1)}) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
        v(i) = 1;
        v(j) = phase;
        push(v);
      }
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53; };
  auto gaussian = [&] { return std::sqrt(-2 * std::log(uniform())) * std::cos(2 * M_PI * uniform()); };
  while (out.size() < k) {
    Eigen::VectorXcd v(d);
    for (int i = 0; i < d; ++i) v(i) = cd(gaussian(), gaussian());
    push(v);
  }
  return out;
}

class PsdConeSampler final : public ConeSampler {
 public:
  explicit PsdConeSampler(int d) : d_(d) {
    if (d < 2) throw std::invalid_argument("psd_cone_sampler: dimension below 2");
  }
  int ambient_dim() const override { return d_ * d_; }

  Mat<double> rays(std::size_t k, std::uint64_t seed) const override {
    if (d_ == 2) return BlochBallSampler(1.0).rays(k, seed);
    Mat<double> out;
    for (const auto& v : sample_unit_vectors(d_, k, seed)) out.push_back(projector_coords(v));
    return out;
  }

  Mat<double> faces(std::size_t k, std::uint64_t seed) const override {
    if (d_ == 2) return BlochBallSampler(1.0).faces(k, seed);
    return rays(k, seed);
  }

  std::string describe() const override { return "psd_cone(d=" + std::to_string(d_) + ")"; }

 private:
  int d_;
};

class PolyhedralSampler final : public ConeSampler {
 public:
  PolyhedralSampler(const Mat<double>& rays, const Vec<double>& metric, std::string label)
      : rays_(rays), label_(std::move(label)) {
    if (rays.empty()) throw std::invalid_argument("polyhedral_sampler: no rays");
    dim_ = static_cast<int>(metric.size());
    const auto sub = span_orthobasis(rays, metric);
    ConeV<double> c;
    c.ambient_dim = sub.rank();
    for (const auto& x : rays) c.rays.push_back(subspace_coords(x, sub, metric));
    const auto polar = vertex_enumeration(c);
    for (const auto& p : polar.rays) faces_.push_back(hadamard(embed(p, sub), metric));
  }
  int ambient_dim() const override { return dim_; }
  Mat<double> rays(std::size_t, std::uint64_t) const override { return rays_; }
  Mat<double> faces(std::size_t, std::uint64_t) const override { return faces_; }
  bool finite() const override { return true; }
  std::string describe() const override { return label_; }

 private:
  int dim_ = 0;
  Mat<double> rays_;
  Mat<double> faces_;
  std::string label_;
};

Mat<double> to_reduced(const Mat<double>& ambient, const ReducedSpace<double>& r) {
  Mat<double> out;
  out.reserve(ambient.size());
  for (const auto& x : ambient) out.push_back(subspace_coords(x, r.subspace, r.metric));
  return out;
}

Vec<double> unit_vector(Vec<double> v) {
  const double n = norm2(v);
  if (n > 0)
    for (auto& x : v) x /= n;
  return v;
}

/** Shared driver for scenario hierarchies and the entanglement recast. The
 * reduced space has gram 1, so every inner product is a plain dot. */
struct Approximator {
  ReducedSpace<double> r;
  std::shared_ptr<const ConeSampler> states, effects;
  Vec<double> target;
  bool choi = true;  // target is J(id_R), so Sep_in memberships give models
  ClassifyOptions opts;

  struct Step {
    bool ok = false;  // approximation could be built
    SepMembership<double> sm;
    ConeV<double> polar_s, polar_e;
    SepGenerators<double> sep;
    ReducedSpace<double> approx_r;
    std::string note;
  };

  Step build(bool outer, const ApproxLevel& lv, const Vec<double>* normalizer) const {
    Step st;
    const std::size_t ks = std::max<std::size_t>(outer ? lv.n_state_faces : lv.n_state_rays, r.dim);
    const std::size_t ke = std::max<std::size_t>(outer ? lv.n_effect_faces : lv.n_effect_rays, r.dim);
    const double tol = opts.tol.polar_tol;
    try {
      const auto cs = outer ? outer_cone_approx(*states, r, ks, lv.seed, tol)
                            : inner_cone_approx(*states, r, ks, lv.seed, tol);
      const auto ce = outer ? outer_cone_approx(*effects, r, ke, lv.seed, tol)
                            : inner_cone_approx(*effects, r, ke, lv.seed, tol);
      st.approx_r = r;
      st.approx_r.states = cs.rays;
      st.approx_r.effects = ce.rays;
      st.polar_s = polar_state_cone(st.approx_r, opts);
      st.polar_e = polar_effect_cone(st.approx_r, opts);
    } catch (const PreconditionError& e) {
      st.note = std::string(outer ? "outer" : "inner") + " approximation unavailable: " + e.what();
      return st;
    }
    st.sep = sep_extremal_rays(st.polar_s, st.polar_e);
    ClassifyOptions lp_opts = opts;
    lp_opts.strategy = WitnessStrategy::LinearProgram;
    st.sm = sep_membership(target, st.sep, tensor_metric(r), lp_opts, normalizer);
    st.ok = true;
    return st;
  }

  /// Minimum of the unit witness over sampled true Sep elements.
  double replay(const Vec<double>& w, std::size_t samples, std::uint64_t seed, std::size_t& used) const {
    const std::uint64_t s = seed ^ kReplayStream;
    const std::size_t side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(samples))));
    Mat<double> fs, gs;
    if (choi) {
      fs = to_reduced(states->faces(side, s), r);
      gs = to_reduced(effects->faces(side, s + 1), r);
    } else {
      fs = to_reduced(states->rays(side, s), r);
      gs = to_reduced(effects->rays(side, s + 1), r);
    }
    for (auto& f : fs) f = unit_vector(f);
    for (auto& g : gs) g = unit_vector(g);
    const bool all = states->finite() && effects->finite();
    double worst = std::numeric_limits<double>::infinity();
    used = 0;
    for (const auto& f : fs)
      for (const auto& g : gs) {
        if (!all && used >= samples) return worst;
        worst = std::min(worst, dot(w, kron(f, g)));
        ++used;
      }
    return worst;
  }

  void certify(const ApproxLevel& lv, const Vec<double>* normalizer, ApproxVerdict& out, LevelRecord& rec) const {
    auto st = build(true, lv, normalizer);
    if (!st.ok) {
      rec.note += st.note;
      return;
    }
    rec.inner_margin = st.sm.lp_margin;
    if (!st.sm.member) return;
    out.kind = ApproxKind::CertifiedClassical;
    out.level = lv.level;
    if (choi && opts.extract_model) {
      out.certificate = extract_classical_model(choi_identity(r), st.sep, st.polar_s, st.polar_e, st.approx_r, opts);
      const auto chk = check_model(*out.certificate, st.approx_r, opts.tol);
      if (!chk.ok) throw Error("certificate model failed its own check: " + chk.first_violation);
    }
  }

  void witness(const ApproxLevel& lv, const Vec<double>* normalizer, std::size_t replay_samples,
               ApproxVerdict& out, LevelRecord& rec) const {
    auto st = build(false, lv, normalizer);
    if (!st.ok) {
      rec.note += st.note;
      return;
    }
    rec.outer_margin = st.sm.lp_margin;
    if (!out.best_outer_margin || st.sm.lp_margin < *out.best_outer_margin) out.best_outer_margin = st.sm.lp_margin;
    if (st.sm.member) return;
    const Vec<double> w = unit_vector(st.sm.witness);
    std::size_t used = 0;
    const double worst = replay(w, replay_samples, lv.seed, used);
    if (worst < -opts.tol.verdict_tol) {
      rec.note += "witness rejected by the replay (min " + std::to_string(worst) + ")";
      return;
    }
    out.kind = ApproxKind::WitnessedNonClassical;
    out.level = lv.level;
    out.witness = w;
    out.violation = dot(w, target);
    out.replay_samples = used;
    out.replay_min = worst;
  }

  Vec<double> normalizer_for(const ApproxLevel& first) const {
    auto st = build(true, first, nullptr);
    if (!st.ok) st = build(false, first, nullptr);
    if (!st.ok) throw PreconditionError("no approximation could be built at level 1: " + st.note);
    Vec<double> c(tensor_metric(r).size(), 0.0);
    for (const auto& g : st.sep.rays) axpy(1.0, unit_vector(g), c);
    return unit_vector(c);
  }

  void guard() const {
    const std::size_t td = static_cast<std::size_t>(r.dim) * r.dim;
    if (td > opts.max_tensor_dim)
      throw ResourceError("dim(R) = " + std::to_string(r.dim) + " gives a tensor space of dimension " +
                          std::to_string(td) + " above the limit " + std::to_string(opts.max_tensor_dim) +
                          " (set CONEKIT_MAX_TENSOR_DIM to raise it)");
  }

  ApproxVerdict run(int max_level, const ApproxSchedule& schedule, ApproxMode mode) const {
    guard();
    if (max_level < 1) throw std::invalid_argument("hierarchy: max_level must be positive");
    ApproxVerdict out;
    const Vec<double> c = normalizer_for(schedule.level(1));
    for (int l = 1; l <= max_level; ++l) {
      const auto lv = schedule.level(l);
      LevelRecord rec;
      rec.level = lv;
      if (mode != ApproxMode::Witness) certify(lv, &c, out, rec);
      if (out.kind == ApproxKind::Inconclusive && mode != ApproxMode::Certify)
        witness(lv, &c, schedule.replay_samples, out, rec);
      out.levels.push_back(rec);
      if (out.kind != ApproxKind::Inconclusive) return out;
    }
    out.level = max_level;
    return out;
  }
};

Approximator scenario_approximator(const ApproxScenario& as, const ClassifyOptions& opts) {
  Approximator a;
  a.r = approx_reduced_space(as, opts.tol);
  a.states = as.states;
  a.effects = as.effects;
  a.target = choi_identity(a.r).coords;
  a.opts = opts;
  return a;
}

}  // namespace

std::shared_ptr<const ConeSampler> bloch_ball_sampler(double eta) { return std::make_shared<BlochBallSampler>(eta); }

std::shared_ptr<const ConeSampler> psd_cone_sampler(int d) { return std::make_shared<PsdConeSampler>(d); }

std::shared_ptr<const ConeSampler> polyhedral_sampler(const Mat<double>& rays, const Vec<double>& metric,
                                                      std::string label) {
  return std::make_shared<PolyhedralSampler>(rays, metric, std::move(label));
}

Vec<double> projector_coords(const Eigen::VectorXcd& psi) {
  const Eigen::VectorXcd u = psi / psi.norm();
  return herm_coords(u * u.adjoint());
}

Vec<double> bipartite_coords(const ComplexMatrix& m, int d) {
  if (m.rows() != d * d || m.cols() != d * d) throw std::invalid_argument("bipartite_coords: size mismatch");
  const auto basis = hermitian_basis(d);
  const int n = d * d;
  Vec<double> out(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto& A = basis.basis[a];
      const auto& B = basis.basis[b];
      // Tr[(A (x) B) M] = sum A_ij B_kl M_{(j,l),(i,k)}
      cd acc = 0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          if (A(i, j) == cd(0)) continue;
          for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) acc += A(i, j) * B(k, l) * m(j * d + l, i * d + k);
        }
      out[a * n + b] = acc.real();
    }
  return out;
}

ComplexMatrix bell_state() {
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
  phi(0) = phi(3) = 1 / std::sqrt(2.0);
  return phi * phi.adjoint();
}

ApproxScenario approx_from_scenario(const Scenario& sc) {
  const auto a = ambient_data<double>(sc);
  ApproxScenario as;
  as.name = "scenario";
  as.metric = a.metric;
  as.unit = a.unit;
  as.states = polyhedral_sampler(a.states, a.metric, "scenario states");
  as.effects = polyhedral_sampler(a.effects, a.metric, "scenario effects");
  return as;
}

ApproxScenario resolve_approx_scenario(const std::string& arg) {
  auto continuous = [](const std::string& name, double eta) {
    ApproxScenario as;
    as.name = name;
    as.metric.assign(4, 1.0);
    as.unit = herm_coords(ComplexMatrix::Identity(2, 2));
    as.states = bloch_ball_sampler(eta);
    as.effects = psd_cone_sampler(2);
    return as;
  };
  if (arg == "builtin:qubit_full") return continuous("qubit_full", 1.0);
  const std::string dep = "builtin:depolarized:qubit_full:";
  if (arg.rfind(dep, 0) == 0) {
    const Rational eta = parse_rational(arg.substr(dep.size()));
    return continuous(arg.substr(8), eta.convert_to<double>());
  }
  auto as = approx_from_scenario(resolve_scenario(arg, ArithmeticPolicy::Float));
  as.name = arg;
  return as;
}

ReducedSpace<double> approx_reduced_space(const ApproxScenario& as, const Tolerances& tol) {
  const std::size_t n = std::max<std::size_t>(64, 4 * as.metric.size());
  const auto s = as.states->rays(n, 0);
  const auto e = as.effects->rays(n, 0);
  auto r = reduced_space(s, e, as.unit, as.metric, tol.rank_tol);
  if (r.dim == 1) return r;
  auto spans_r = [&](const Mat<double>& xs) {
    for (const auto& x : xs) {
      auto d = project(x, r.subspace, r.metric);
      axpy(-1.0, x, d);
      if (norm2(d) > 1e-9 * std::max(1.0, norm2(x))) return false;
    }
    return true;
  };
  if (!spans_r(s)) throw PreconditionError("approximation: the state cone does not span R");
  if (!spans_r(e)) throw PreconditionError("approximation: the effect cone does not span R");
  return r;
}

ApproxLevel ApproxSchedule::level(int l) const {
  ApproxLevel lv;
  lv.level = l;
  const std::size_t extra = static_cast<std::size_t>(l - 1) * step;
  lv.n_state_rays = lv.n_effect_rays = inner_rays + extra;
  lv.n_state_faces = lv.n_effect_faces = outer_faces + extra;
  lv.seed = seed;
  return lv;
}

ConeV<double> inner_cone_approx(const ConeSampler& sampler, const ReducedSpace<double>& r, std::size_t k,
                                std::uint64_t seed, double tol) {
  if (k < static_cast<std::size_t>(r.dim)) throw std::invalid_argument("inner_cone_approx: k below dim(R)");
  for (std::size_t kk = k; kk <= 4 * k; kk += r.dim) {
    const auto pts = to_reduced(sampler.rays(kk, seed), r);
    if (rank(pts, r.dim, tol) == r.dim || sampler.finite()) {
      auto c = extreme_ray_filter(make_cone(r.dim, pts, tol), tol);
      if (rank(c.rays, r.dim, tol) != r.dim) break;
      c.spanning = true;
      return c;
    }
  }
  throw PreconditionError("inner_cone_approx: sampled rays do not span R (retry budget exhausted)");
}

ConeV<double> outer_cone_approx(const ConeSampler& sampler, const ReducedSpace<double>& r, std::size_t k,
                                std::uint64_t seed, double tol) {
  if (k < static_cast<std::size_t>(r.dim)) throw std::invalid_argument("outer_cone_approx: k below dim(R)");
  if (r.dim == 1) return inner_cone_approx(sampler, r, k, seed, tol);
  ConeV<double> faces;
  faces.ambient_dim = r.dim;
  faces.rays = canonicalize(to_reduced(sampler.faces(k, seed), r), tol);
  EnumerationOptions eo;
  eo.tol = tol;
  try {
    auto c = vertex_enumeration(faces, eo);
    c.pointed = c.spanning = true;
    return c;
  } catch (const PreconditionError& e) {
    throw PreconditionError(std::string("outer_cone_approx: too few faces (") + e.what() + ")");
  }
}

std::string to_string(ApproxKind k) {
  switch (k) {
    case ApproxKind::CertifiedClassical:
      return "CertifiedClassical";
    case ApproxKind::WitnessedNonClassical:
      return "WitnessedNonClassical";
    case ApproxKind::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

ApproxVerdict certify_classical(const ApproxScenario& as, const ApproxLevel& level, const ClassifyOptions& opts) {
  const auto a = scenario_approximator(as, opts);
  a.guard();
  ApproxVerdict out;
  LevelRecord rec;
  rec.level = level;
  a.certify(level, nullptr, out, rec);
  out.levels.push_back(rec);
  if (out.kind == ApproxKind::Inconclusive) out.level = level.level;
  return out;
}

ApproxVerdict witness_nonclassical(const ApproxScenario& as, const ApproxLevel& level, const ClassifyOptions& opts,
                                   std::size_t replay_samples) {
  const auto a = scenario_approximator(as, opts);
  a.guard();
  ApproxVerdict out;
  LevelRecord rec;
  rec.level = level;
  a.witness(level, nullptr, replay_samples, out, rec);
  out.levels.push_back(rec);
  if (out.kind == ApproxKind::Inconclusive) out.level = level.level;
  return out;
}

ApproxVerdict hierarchy(const ApproxScenario& as, int max_level, const ApproxSchedule& schedule,
                        const ClassifyOptions& opts, ApproxMode mode) {
  return scenario_approximator(as, opts).run(max_level, schedule, mode);
}

ApproxVerdict entanglement_check(const ComplexMatrix& state, int local_dim, int max_level,
                                 const ApproxSchedule& schedule, const ClassifyOptions& opts) {
  if (local_dim < 2 || local_dim > 3) throw std::invalid_argument("entanglement_check: local dimension must be 2 or 3");
  if (state.rows() != local_dim * local_dim || state.cols() != state.rows())
    throw ValidationError("entanglement_check: state is not a square matrix on C^d (x) C^d");
  if (!is_hermitian(state, opts.tol.herm_tol)) throw ValidationError("entanglement_check: state is not Hermitian");
  const double mev = min_eigenvalue(state);
  if (mev < -opts.tol.psd_tol)
    throw ValidationError("entanglement_check: state is not positive semidefinite (min eigenvalue " +
                          std::to_string(mev) + ")");
  Approximator a;
  const int n = local_dim * local_dim;
  a.r.dim = n;
  a.r.metric.assign(n, 1.0);
  a.r.subspace.ambient_dim = n;
  for (int i = 0; i < n; ++i) {
    Vec<double> e(n, 0.0);
    e[i] = 1;
    a.r.subspace.basis.push_back(e);
    a.r.subspace.gram.push_back(1.0);
  }
  a.r.unit = herm_coords(ComplexMatrix::Identity(local_dim, local_dim));
  a.states = a.effects = psd_cone_sampler(local_dim);
  a.target = bipartite_coords(state, local_dim);
  a.choi = false;
  a.opts = opts;
  return a.run(max_level, schedule, ApproxMode::Auto);
}

}  // namespace conekit
