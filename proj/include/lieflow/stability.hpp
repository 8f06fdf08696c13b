#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "lieflow/flow.hpp"
#include "lieflow/spectral.hpp"

namespace lieflow {

/// The exponential growth rate of e^{tD} v: the largest layer real part over
/// the layers carrying a component of v above tol_rel * ||v||.
double lyapunov_exact(const SpectralDecomposition& sd, const AlgebraVector& v,
                      double tol_rel = 1e-10);

struct LyapunovResult {
  double exact = 0.0;
  std::vector<std::pair<double, double>> estimate_curve;  // (T, log||e^{TD}v|| / T)
  AlgebraVector v;
  /// Instance constant with |estimate(T) - exact| <= C (1 + log T) / T on the
  /// evaluated grid.
  double bound_constant = 0.0;
  bool truncated = false;  // grid cut short by overflow
};

/// Samples the growth-rate curve on the given positive increasing grid, using
/// renormalized propagation between grid points so that long horizons do not
/// overflow. The exact spectral value is authoritative; the curve corroborates
/// it with the reported (1 + log T) / T gap constant.
LyapunovResult lyapunov_estimate(const LinearFlow& lf, const AlgebraVector& v,
                                 const std::vector<double>& t_grid);

enum class StabilityVerdict {
  asymptotically_and_exponentially_stable,
  stable,
  unstable,
  stable_condition_met_converse_unverified,
};

const char* to_string(StabilityVerdict v);

struct StabilityCertificate {
  StabilityVerdict verdict = StabilityVerdict::unstable;
  int dim_plus = 0;
  int dim_zero = 0;
  int dim_minus = 0;
  std::vector<std::complex<double>> spectrum;
  bool zero_block_semisimple = true;  // trivially true when dim_zero == 0
  bool algebra_nilpotent = false;
  /// Present for the asymptotically stable verdict: certificate constants for
  /// the contraction of the full flow.
  std::optional<ContractionEstimate> contraction;
};

/// Classifies Lyapunov stability of the identity:
///  - no eigenvalues with nonnegative real part: asymptotically and
///    exponentially stable;
///  - unstable directions present: unstable;
///  - only central and stable directions with a semisimple central block:
///    stable;
///  - otherwise unstable on nilpotent algebras, where the converse holds,
///    and a sufficient-condition-not-met outcome elsewhere.
StabilityCertificate classify_identity_stability(const Derivation& d,
                                                 const SpectralDecomposition& sd);

}  // namespace lieflow
