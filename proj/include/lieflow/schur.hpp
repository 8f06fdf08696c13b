#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

namespace lieflow::detail {

/// Real Schur factorization a = u t u^T with t quasi upper triangular in
/// canonical form (2x2 blocks standardized, complex conjugate eigenvalues).
struct SchurForm {
  Eigen::MatrixXd t;
  Eigen::MatrixXd u;
  Eigen::VectorXd eig_re;
  Eigen::VectorXd eig_im;
};

SchurForm real_schur(const Eigen::MatrixXd& a);

/// Diagonal block layout of a quasi triangular matrix: (start, size) with
/// size 1 or 2.
std::vector<std::pair<int, int>> diagonal_blocks(const Eigen::MatrixXd& t);

/// Reorders the trailing principal submatrix starting at `offset` so that the
/// eigenvalues flagged in `select_tail` (length n - offset, conjugate pairs
/// flagged together) move to its leading positions. t, u and the coupling
/// block above the submatrix are updated consistently. Returns the number of
/// selected eigenvalues.
int schur_select_to_front(SchurForm& s, int offset, const std::vector<int>& select_tail);

/// Solves a x + x b = c with quasi triangular coefficients by block back
/// substitution. `a` is quasi lower triangular when a_lower is set (the
/// transpose of a Schur factor), quasi upper otherwise; `b` is always quasi
/// upper triangular.
Eigen::MatrixXd solve_sylvester_quasi(const Eigen::MatrixXd& a, bool a_lower,
                                      const Eigen::MatrixXd& b, const Eigen::MatrixXd& c);

/// Solves a^T p + p a = -q, q symmetric, via Schur reduction. Result is
/// symmetrized.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q);

/// Orthonormal basis with the same column span (thin Householder QR).
Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& m);

}  // namespace lieflow::detail
