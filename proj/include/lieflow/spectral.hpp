#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <vector>

#include "lieflow/lie_algebra.hpp"

namespace lieflow {

/// A linear map on the algebra satisfying the Leibniz rule
/// D[X,Y] = [DX,Y] + [X,DY]. Instances are only created by validate_leibniz.
class Derivation {
public:
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const LieAlgebraPtr& algebra() const { return algebra_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  /// Worst Leibniz residual found at validation time.
  double leibniz_residual() const { return residual_; }

private:
  friend Derivation validate_leibniz(const Eigen::MatrixXd&, LieAlgebraPtr, double);
  Derivation(Eigen::MatrixXd m, LieAlgebraPtr a, double r)
      : matrix_(std::move(m)), algebra_(std::move(a)), residual_(r) {}
  Eigen::MatrixXd matrix_;
  LieAlgebraPtr algebra_;
  double residual_;
};

/// Non-throwing Leibniz check over all basis pairs.
struct LeibnizReport {
  bool pass = false;
  double tol = 0.0;
  double max_residual = 0.0;
  int worst_i = -1;
  int worst_j = -1;
};

LeibnizReport leibniz_report(const Eigen::MatrixXd& d, const LieAlgebra& alg, double tol = 1e-9);

/// Returns a Derivation iff max over basis pairs of
/// ||D[e_i,e_j] - [De_i,e_j] - [e_i,De_j]|| <= tol; throws LeibnizViolation
/// with the worst pair otherwise.
Derivation validate_leibniz(const Eigen::MatrixXd& d, LieAlgebraPtr alg, double tol = 1e-9);

/// One group of generalized eigenspaces sharing a real part.
struct Layer {
  double real_part = 0.0;
  Eigen::MatrixXd basis;       // dim x d, orthonormal columns, invariant span
  Eigen::MatrixXd projection;  // spectral projector onto this layer
  std::vector<std::complex<double>> eigenvalues;  // members with multiplicity
  int dimension() const { return static_cast<int>(basis.cols()); }
};

/// Splitting of the algebra by the sign of eigenvalue real parts, with the
/// finer per-real-part layers. Projections resolve the identity exactly:
/// the most negative layer is defined as the complement of the others.
struct SpectralDecomposition {
  std::vector<std::complex<double>> eigenvalues;  // with algebraic multiplicity
  std::vector<Layer> layers;                      // descending real part
  Eigen::MatrixXd plus_basis, zero_basis, minus_basis;
  Eigen::MatrixXd proj_plus, proj_zero, proj_minus;
  double tol_realpart = 1e-8;

  int dim() const { return static_cast<int>(proj_plus.rows()); }
  int dim_plus() const { return static_cast<int>(plus_basis.cols()); }
  int dim_zero() const { return static_cast<int>(zero_basis.cols()); }
  int dim_minus() const { return static_cast<int>(minus_basis.cols()); }
};

/// Groups generalized eigenspaces by real part. Real parts within
/// 2 * tol_realpart of each other merge into one layer; eigenvalues with
/// |Re| <= tol_realpart count as central. Throws ClusterAmbiguity when a
/// merged layer would straddle the classification boundary. Bases come from
/// an ordered real Schur form; projections from the block Sylvester
/// decoupling of the reordered form. Complex pairs stay in real 2x2 blocks.
SpectralDecomposition spectral_decompose(const Derivation& d, double tol_realpart = 1e-8);

bool is_hyperbolic(const SpectralDecomposition& sd);

/// Residuals of [g_a, g_b] against the target layer at real part a + b.
struct GradingPair {
  double lambda_a = 0.0;
  double lambda_b = 0.0;
  bool target_exists = false;
  double residual = 0.0;
};

struct GradingReport {
  std::vector<GradingPair> pairs;
  bool pass = false;
  double tol = 0.0;
  double max_residual = 0.0;
};

/// Brackets of layer basis vectors are projected onto the complement of the
/// layer at the summed real part; if no such layer exists the bracket must
/// vanish and the residual is its full norm.
GradingReport grading_check(const SpectralDecomposition& sd, const LieAlgebra& alg,
                            double tol = 1e-8);

/// True iff the restriction of D to the span of `subspace_basis` (orthonormal
/// columns) is diagonalizable over C: for each eigenvalue cluster alpha,
/// rank(D_restr - alpha I) equals d minus the algebraic multiplicity, ranks by
/// singular value threshold. Throws InvariantSubspaceViolation when D does not
/// preserve the span within tol.
bool is_semisimple_on(const Derivation& d, const Eigen::MatrixXd& subspace_basis,
                      double tol = 1e-8);

}  // namespace lieflow
