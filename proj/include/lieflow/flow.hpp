#pragma once

#include <Eigen/Dense>

#include "lieflow/schur.hpp"
#include "lieflow/spectral.hpp"

namespace lieflow {

/// Matrix exponential (scaling and squaring with Pade evaluation). Throws
/// InputError on non-finite input and OverflowError when the result leaves
/// the representable range.
Eigen::MatrixXd expm(const Eigen::MatrixXd& m);

/// The linearized flow e^{tD} of a derivation. The Schur factorization of D
/// is cached at construction and reused for every evaluation.
class LinearFlow {
public:
  explicit LinearFlow(Derivation d);

  const Derivation& derivation() const { return derivation_; }
  int dim() const { return derivation_.dim(); }

  /// e^{tD} as a matrix.
  Eigen::MatrixXd matrix(double t) const;

  /// e^{tD} v.
  AlgebraVector apply(double t, const AlgebraVector& v) const;

private:
  Derivation derivation_;
  detail::SchurForm schur_;
};

inline AlgebraVector flow_linear(const LinearFlow& lf, double t, const AlgebraVector& v) {
  return lf.apply(t, v);
}

/// Adapted quadratic form Q(x) = x^T P x with A^T P + P A = -I for a
/// contracting A; Q is strictly decreasing along trajectories of x' = Ax and
/// its unit level set meets every nonzero trajectory exactly once.
struct AdaptedForm {
  Eigen::MatrixXd p;
  double lyapunov_residual = 0.0;  // ||A^T P + P A + I||_F
  double lambda_min = 0.0;
  double lambda_max = 0.0;

  double q(const Eigen::VectorXd& x) const { return x.dot(p * x); }
};

/// Solves the Lyapunov equation for A with spectral abscissa below
/// -tol_realpart; throws NotContracting otherwise.
AdaptedForm adapted_form(const Eigen::MatrixXd& a, double tol_realpart = 1e-8);

/// Certificate constants for ||e^{tA} v|| <= (1/c) e^{-mu t} ||v||, certified
/// by sampling t in [0, 50].
struct ContractionEstimate {
  double c = 0.0;
  double mu = 0.0;
};

/// mu is the spectral abscissa magnitude of the restriction minus `slack`;
/// c starts from sqrt(lambda_min(P) / lambda_max(P)) of the adapted form and
/// is lowered until the sampled inequality holds on [0, 50].
ContractionEstimate contraction_constants(const LinearFlow& lf,
                                          const Eigen::MatrixXd& minus_basis,
                                          double slack = 1e-3);

}  // namespace lieflow
