#include "lieflow/conjugacy.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace lieflow {

EuclideanConjugacy EuclideanConjugacy::build(const Eigen::MatrixXd& a,
                                             const Eigen::MatrixXd& b,
                                             double tol_realpart) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw InputError("EuclideanConjugacy: matrices must be square");
  if (a.rows() != b.rows())
    throw InputError("EuclideanConjugacy: dimension mismatch between the two flows");
  AdaptedForm fa = adapted_form(a, tol_realpart);
  AdaptedForm fb = adapted_form(b, tol_realpart);
  return EuclideanConjugacy(a, b, std::move(fa), std::move(fb));
}

double EuclideanConjugacy::crossing_time_impl(const Eigen::MatrixXd& gen,
                                              const AdaptedForm& form,
                                              const Eigen::VectorXd& x) {
  if (x.norm() == 0.0) throw ZeroVector("crossing_time: zero vector");

  // q(t) = Q(e^{t gen} x) is strictly decreasing from +inf to 0; values that
  // overflow on the way up count as above the level set.
  auto level = [&](double t) -> double {
    Eigen::MatrixXd e = (t * gen).exp();
    if (!e.allFinite()) return std::numeric_limits<double>::infinity();
    Eigen::VectorXd u = e * x;
    double q = form.q(u);
    return std::isfinite(q) ? q : std::numeric_limits<double>::infinity();
  };

  double lo = 0.0, hi = 0.0;  // level(lo) >= 1 >= level(hi)
  if (level(0.0) >= 1.0) {
    hi = 1.0;
    int guard = 0;
    while (level(hi) > 1.0) {
      lo = hi;
      hi *= 2.0;
      if (++guard > 80) throw NonConvergence("crossing_time: no forward bracket");
    }
  } else {
    lo = -1.0;
    int guard = 0;
    while (level(lo) < 1.0) {
      hi = lo;
      lo *= 2.0;
      if (++guard > 80) throw NonConvergence("crossing_time: no backward bracket");
    }
  }

  for (int i = 0; i < 80 && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++i) {
    double mid = 0.5 * (lo + hi);
    if (level(mid) >= 1.0)
      lo = mid;
    else
      hi = mid;
  }

  // Newton polish on q(t) - 1; dq/dt = -||e^{t gen} x||^2 along the flow.
  double t = 0.5 * (lo + hi);
  double best_t = t;
  double best_err = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd u = (t * gen).exp() * x;
    double q = form.q(u);
    double err = std::abs(q - 1.0);
    if (err < best_err) {
      best_err = err;
      best_t = t;
    }
    if (err <= 1e-15) break;
    if (q >= 1.0)
      lo = std::max(lo, t);
    else
      hi = std::min(hi, t);
    double dq = -u.squaredNorm();
    double next = t - (q - 1.0) / dq;
    t = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
  }
  return best_t;
}

double EuclideanConjugacy::crossing_time(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw InputError("crossing_time: vector has wrong length");
  return crossing_time_impl(a_, form_a_, x);
}

Eigen::VectorXd EuclideanConjugacy::map_impl(const Eigen::MatrixXd& a,
                                             const AdaptedForm& fa,
                                             const Eigen::MatrixXd& b,
                                             const AdaptedForm& fb,
                                             const Eigen::VectorXd& x) {
  // Continuity at the fixed point needs no special treatment beyond the
  // floating-point underflow guard.
  if (x.norm() <= 1e-300) return Eigen::VectorXd::Zero(x.size());
  double tau = crossing_time_impl(a, fa, x);
  Eigen::VectorXd u = (tau * a).exp() * x;
  Eigen::VectorXd w = u / std::sqrt(fb.q(u));
  Eigen::VectorXd out = (-tau * b).exp() * w;
  if (!out.allFinite()) throw OverflowError("evaluate_zeta: image overflowed");
  return out;
}

Eigen::VectorXd EuclideanConjugacy::map(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw InputError("evaluate_zeta: vector has wrong length");
  return map_impl(a_, form_a_, b_, form_b_, x);
}

Eigen::VectorXd EuclideanConjugacy::inverse_map(const Eigen::VectorXd& y) const {
  if (y.size() != dim()) throw InputError("evaluate_zeta: vector has wrong length");
  return map_impl(b_, form_b_, a_, form_a_, y);
}

double crossing_time(const EuclideanConjugacy& ec, const Eigen::VectorXd& x) {
  return ec.crossing_time(x);
}

Eigen::VectorXd evaluate_zeta(const EuclideanConjugacy& ec, const Eigen::VectorXd& x) {
  return ec.map(x);
}

HyperbolicSystem HyperbolicSystem::analyze(LieAlgebraPtr alg, const Derivation& d,
                                           double tol_realpart) {
  if (!alg) throw InputError("HyperbolicSystem: null algebra");
  if (d.algebra().get() != alg.get())
    throw InputError("HyperbolicSystem: derivation lives on a different algebra");
  SpectralDecomposition sd = spectral_decompose(d, tol_realpart);
  if (!is_hyperbolic(sd))
    throw NotHyperbolic("HyperbolicSystem: derivation has " +
                        std::to_string(sd.dim_zero()) +
                        " eigenvalue(s) with vanishing real part");
  NilpotentGroupPtr group = NilpotentGroup::create(alg);
  LinearFlow flow(d);
  return HyperbolicSystem{std::move(alg), d, std::move(sd), std::move(group),
                          std::move(flow)};
}

namespace {

Eigen::MatrixXd restrict_to(const Eigen::MatrixXd& m, const Eigen::MatrixXd& basis) {
  return basis.transpose() * m * basis;
}

}  // namespace

GroupConjugacy GroupConjugacy::build(HyperbolicSystem source, HyperbolicSystem target) {
  const int sp = source.sd.dim_plus(), sm = source.sd.dim_minus();
  const int tp = target.sd.dim_plus(), tm = target.sd.dim_minus();
  if (sp != tp || sm != tm)
    throw DimensionMismatch("GroupConjugacy: stable/unstable dimensions differ: (" +
                                std::to_string(sp) + ", " + std::to_string(sm) +
                                ") vs (" + std::to_string(tp) + ", " +
                                std::to_string(tm) + ")",
                            sp, sm, tp, tm);

  std::optional<EuclideanConjugacy> plus, minus;
  if (sm > 0) {
    minus = EuclideanConjugacy::build(
        restrict_to(source.derivation.matrix(), source.sd.minus_basis),
        restrict_to(target.derivation.matrix(), target.sd.minus_basis));
  }
  if (sp > 0) {
    // Expanding layers through time reversal: the conjugacy of the reversed
    // contracting flows conjugates the forward flows as well.
    plus = EuclideanConjugacy::build(
        -restrict_to(source.derivation.matrix(), source.sd.plus_basis),
        -restrict_to(target.derivation.matrix(), target.sd.plus_basis));
  }
  return GroupConjugacy(std::move(source), std::move(target), std::move(plus),
                        std::move(minus));
}

GroupElement GroupConjugacy::map(const GroupElement& g) const {
  if (g.group != source_.group)
    throw InputError("evaluate_pi: element is not in the source group");
  auto [gp, gm] = split_plus_minus(g, source_.sd);
  AlgebraVector hp = AlgebraVector::Zero(target_.sd.dim());
  AlgebraVector hm = hp;
  if (xi_plus_)
    hp = target_.sd.plus_basis * xi_plus_->map(source_.sd.plus_basis.transpose() * gp.coords);
  if (xi_minus_)
    hm = target_.sd.minus_basis *
         xi_minus_->map(source_.sd.minus_basis.transpose() * gm.coords);
  return multiply(target_.group->element(hp), target_.group->element(hm));
}

GroupElement GroupConjugacy::inverse_map(const GroupElement& h) const {
  if (h.group != target_.group)
    throw InputError("evaluate_pi_inverse: element is not in the target group");
  auto [hp, hm] = split_plus_minus(h, target_.sd);
  AlgebraVector gp = AlgebraVector::Zero(source_.sd.dim());
  AlgebraVector gm = gp;
  if (xi_plus_)
    gp = source_.sd.plus_basis *
         xi_plus_->inverse_map(target_.sd.plus_basis.transpose() * hp.coords);
  if (xi_minus_)
    gm = source_.sd.minus_basis *
         xi_minus_->inverse_map(target_.sd.minus_basis.transpose() * hm.coords);
  return multiply(source_.group->element(gp), source_.group->element(gm));
}

GroupElement evaluate_pi(const GroupConjugacy& gc, const GroupElement& g) {
  return gc.map(g);
}

GroupElement evaluate_pi_inverse(const GroupConjugacy& gc, const GroupElement& h) {
  return gc.inverse_map(h);
}

namespace {

// Generator-stable sampling: mt19937_64 output mapped to doubles directly, so
// identical seeds reproduce identical reports.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
  double u1 = 1.0 - uniform01(rng);
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace

VerificationReport verify_conjugacy(const GroupConjugacy& gc, int samples, double t_min,
                                    double t_max, double tol, std::uint64_t seed,
                                    double coordinate_scale) {
  if (samples < 1) throw InputError("verify_conjugacy: need at least one sample");
  if (!(t_min <= t_max)) throw InputError("verify_conjugacy: empty time range");
  if (tol <= 0.0) throw InputError("verify_conjugacy: tol must be positive");

  VerificationReport report;
  report.samples = samples;
  report.t_min = t_min;
  report.t_max = t_max;
  report.tol = tol;
  report.seed = seed;
  report.coordinate_scale = coordinate_scale;

  const HyperbolicSystem& src = gc.source();
  const HyperbolicSystem& dst = gc.target();
  std::mt19937_64 rng(seed);
  std::vector<double> residuals;
  residuals.reserve(samples);

  for (int s = 0; s < samples; ++s) {
    AlgebraVector coords(src.algebra->dim());
    for (int i = 0; i < coords.size(); ++i)
      coords(i) = coordinate_scale * standard_normal(rng);
    double t = t_min + (t_max - t_min) * uniform01(rng);
    GroupElement g = src.group->element(coords);

    GroupElement lhs = gc.map(flow_group(src.flow, t, g));
    GroupElement rhs = flow_group(dst.flow, t, gc.map(g));
    residuals.push_back(gauge(multiply(inverse(lhs), rhs)));

    GroupElement roundtrip = gc.inverse_map(gc.map(g));
    report.max_roundtrip =
        std::max(report.max_roundtrip, (roundtrip.coords - g.coords).norm());
  }

  std::vector<double> sorted = residuals;
  std::sort(sorted.begin(), sorted.end());
  report.max_residual = sorted.back();
  report.median_residual = (samples % 2 == 1)
                               ? sorted[samples / 2]
                               : 0.5 * (sorted[samples / 2 - 1] + sorted[samples / 2]);
  report.pass = report.max_residual <= tol;
  return report;
}

}  // namespace lieflow
