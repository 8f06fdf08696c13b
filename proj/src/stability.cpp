#include "lieflow/stability.hpp"

#include <algorithm>
#include <cmath>

namespace lieflow {

double lyapunov_exact(const SpectralDecomposition& sd, const AlgebraVector& v,
                      double tol_rel) {
  if (v.size() != sd.dim()) throw InputError("lyapunov_exact: vector has wrong length");
  const double scale = v.norm();
  if (scale == 0.0) throw ZeroVector("lyapunov_exact: zero vector");
  bool found = false;
  double rate = 0.0;
  for (const Layer& layer : sd.layers) {
    if ((layer.projection * v).norm() > tol_rel * scale) {
      rate = found ? std::max(rate, layer.real_part) : layer.real_part;
      found = true;
    }
  }
  if (!found)
    // Components below threshold in every layer cannot happen for a genuine
    // decomposition; treat as numerical noise around the dominant layer.
    throw Error("lyapunov_exact: no layer component above threshold");
  return rate;
}

LyapunovResult lyapunov_estimate(const LinearFlow& lf, const AlgebraVector& v,
                                 const std::vector<double>& t_grid) {
  if (v.size() != lf.dim()) throw InputError("lyapunov_estimate: vector has wrong length");
  if (v.norm() == 0.0) throw ZeroVector("lyapunov_estimate: zero vector");
  for (size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] <= 0.0 || (i > 0 && t_grid[i] <= t_grid[i - 1]))
      throw InputError("lyapunov_estimate: grid must be positive and increasing");
  }

  LyapunovResult result;
  result.v = v;
  result.exact = lyapunov_exact(spectral_decompose(lf.derivation()), v);

  // Propagate a unit vector between grid points and accumulate the log of the
  // norm; a single long step never forms e^{TD} v directly.
  AlgebraVector w = v / v.norm();
  double log_norm = std::log(v.norm());
  double prev_t = 0.0;
  for (double t : t_grid) {
    Eigen::MatrixXd stepm;
    try {
      stepm = lf.matrix(t - prev_t);
    } catch (const OverflowError&) {
      result.truncated = true;
      break;
    }
    w = stepm * w;
    double n = w.norm();
    if (!std::isfinite(n) || n == 0.0) {
      result.truncated = true;
      break;
    }
    log_norm += std::log(n);
    w /= n;
    prev_t = t;
    result.estimate_curve.emplace_back(t, log_norm / t);
  }

  for (const auto& [t, estimate] : result.estimate_curve)
    result.bound_constant = std::max(
        result.bound_constant, std::abs(estimate - result.exact) * t / (1.0 + std::log(t)));
  return result;
}

const char* to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::asymptotically_and_exponentially_stable:
      return "asymptotically_and_exponentially_stable";
    case StabilityVerdict::stable:
      return "stable";
    case StabilityVerdict::unstable:
      return "unstable";
    case StabilityVerdict::stable_condition_met_converse_unverified:
      return "stable_condition_met_converse_unverified";
  }
  return "unstable";
}

StabilityCertificate classify_identity_stability(const Derivation& d,
                                                 const SpectralDecomposition& sd) {
  if (sd.dim() != d.dim())
    throw InputError("classify_identity_stability: decomposition does not match derivation");
  StabilityCertificate cert;
  cert.dim_plus = sd.dim_plus();
  cert.dim_zero = sd.dim_zero();
  cert.dim_minus = sd.dim_minus();
  cert.spectrum = sd.eigenvalues;
  cert.algebra_nilpotent = is_nilpotent(*d.algebra());
  if (cert.dim_zero > 0)
    cert.zero_block_semisimple = is_semisimple_on(d, sd.zero_basis);

  if (cert.dim_plus == 0 && cert.dim_zero == 0) {
    cert.verdict = StabilityVerdict::asymptotically_and_exponentially_stable;
    LinearFlow lf(d);
    cert.contraction = contraction_constants(
        lf, Eigen::MatrixXd::Identity(d.dim(), d.dim()));
  } else if (cert.dim_plus > 0) {
    // A nontrivial unstable subgroup leaves only the identity with a bounded
    // forward orbit.
    cert.verdict = StabilityVerdict::unstable;
  } else if (cert.zero_block_semisimple) {
    cert.verdict = StabilityVerdict::stable;
  } else if (cert.algebra_nilpotent) {
    cert.verdict = StabilityVerdict::unstable;
  } else {
    cert.verdict = StabilityVerdict::stable_condition_met_converse_unverified;
  }
  return cert;
}

}  // namespace lieflow
