#include "lieflow/flow.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace lieflow {

Eigen::MatrixXd expm(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InputError("expm: matrix must be square");
  if (!m.allFinite()) throw InputError("expm: non-finite entries");
  if (m.rows() == 0) return m;
  Eigen::MatrixXd e = m.exp();
  if (!e.allFinite())
    throw OverflowError("expm: result exceeds the representable range");
  return e;
}

LinearFlow::LinearFlow(Derivation d)
    : derivation_(std::move(d)), schur_(detail::real_schur(derivation_.matrix())) {}

Eigen::MatrixXd LinearFlow::matrix(double t) const {
  if (!std::isfinite(t)) throw InputError("LinearFlow: non-finite time");
  if (t == 0.0) return Eigen::MatrixXd::Identity(dim(), dim());
  Eigen::MatrixXd core = expm(t * schur_.t);
  Eigen::MatrixXd out = schur_.u * core * schur_.u.transpose();
  if (!out.allFinite()) throw OverflowError("LinearFlow: flow overflowed");
  return out;
}

AlgebraVector LinearFlow::apply(double t, const AlgebraVector& v) const {
  if (v.size() != dim()) throw InputError("LinearFlow: vector has wrong length");
  return matrix(t) * v;
}

AdaptedForm adapted_form(const Eigen::MatrixXd& a, double tol_realpart) {
  if (a.rows() != a.cols()) throw InputError("adapted_form: matrix must be square");
  const int n = static_cast<int>(a.rows());
  AdaptedForm form;
  if (n == 0) {
    form.p = Eigen::MatrixXd(0, 0);
    return form;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  double abscissa = es.eigenvalues().real().maxCoeff();
  if (!(abscissa < -tol_realpart))
    throw NotContracting("adapted_form: spectral abscissa " + std::to_string(abscissa) +
                             " is not below " + std::to_string(-tol_realpart),
                         abscissa);

  form.p = detail::solve_lyapunov(a, Eigen::MatrixXd::Identity(n, n));
  form.lyapunov_residual =
      (a.transpose() * form.p + form.p * a + Eigen::MatrixXd::Identity(n, n)).norm();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sa(form.p);
  form.lambda_min = sa.eigenvalues().minCoeff();
  form.lambda_max = sa.eigenvalues().maxCoeff();
  if (!(form.lambda_min > 0.0))
    throw Error("adapted_form: Lyapunov solution is not positive definite");
  return form;
}

ContractionEstimate contraction_constants(const LinearFlow& lf,
                                          const Eigen::MatrixXd& minus_basis,
                                          double slack) {
  if (minus_basis.rows() != lf.dim())
    throw InputError("contraction_constants: basis has wrong row count");
  if (minus_basis.cols() == 0)
    throw InputError("contraction_constants: empty subspace");
  Eigen::MatrixXd basis = detail::orthonormal_columns(minus_basis);
  Eigen::MatrixXd restricted = basis.transpose() * lf.derivation().matrix() * basis;

  Eigen::EigenSolver<Eigen::MatrixXd> es(restricted, false);
  double abscissa = es.eigenvalues().real().maxCoeff();
  if (!(abscissa < 0.0))
    throw NotContracting("contraction_constants: spectral abscissa " +
                             std::to_string(abscissa) + " is not negative",
                         abscissa);
  double mu0 = -abscissa;
  double mu = mu0 - slack;
  if (mu <= 0.0) mu = 0.5 * mu0;  // keep the rate positive for very slow blocks

  AdaptedForm form = adapted_form(restricted, 0.0);
  double c = std::sqrt(form.lambda_min / form.lambda_max);

  // Largest sampled value of e^{mu t} ||e^{tA}||_2 on [0, 50]; the inverse
  // bounds any admissible c.
  const double t_end = 50.0;
  const int steps = 5000;
  double worst = 0.0;
  for (int i = 0; i <= steps; ++i) {
    double t = t_end * static_cast<double>(i) / steps;
    Eigen::MatrixXd e = expm(t * restricted);
    double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(e).singularValues()(0);
    worst = std::max(worst, std::exp(mu * t) * sigma);
  }
  c = std::min(c, 1.0 / worst);
  return {c, mu};
}

}  // namespace lieflow
