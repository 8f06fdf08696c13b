#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lieflow/errors.hpp"

namespace lieflow {

/// Coordinates of an algebra element in the declared ordered basis.
using AlgebraVector = Eigen::VectorXd;

/// Sparse bracket declaration: [e_i, e_j] = result.
struct BracketEntry {
  int i = 0;
  int j = 0;
  Eigen::VectorXd result;
};

/// Finite-dimensional real Lie algebra given by structure constants
/// c[i][j][k] with [e_i, e_j] = sum_k c[i][j][k] e_k.
///
/// Constants are antisymmetrized at construction, (c[i][j][k] - c[j][i][k]) / 2,
/// so the stored bracket is exactly antisymmetric; the deviation of the raw
/// input from antisymmetry is kept for validation reporting. The Jacobi
/// identity is checked separately by validate_jacobi.
class LieAlgebra {
public:
  /// Dense constructor. `constants[i](j, k)` is the raw c[i][j][k].
  LieAlgebra(int dim, std::vector<std::string> basis_labels,
             const std::vector<Eigen::MatrixXd>& constants);

  /// Sparse constructor. Entries declare [e_i, e_j] = result; the antisymmetric
  /// counterpart of an entry is filled in automatically unless the file also
  /// declares it (inconsistent declarations then surface as an antisymmetry
  /// residual). Duplicate declarations of the same ordered pair are rejected.
  static LieAlgebra from_brackets(int dim, std::vector<std::string> basis_labels,
                                  const std::vector<BracketEntry>& entries);

  int dim() const { return dim_; }
  const std::vector<std::string>& basis_labels() const { return basis_labels_; }

  /// Antisymmetrized structure constant c[i][j][k].
  double structure_constant(int i, int j, int k) const { return ad_basis_[i](k, j); }

  /// Matrix of ad(e_i) acting on coordinates: ad_basis(i) * v = [e_i, v].
  const Eigen::MatrixXd& ad_basis(int i) const { return ad_basis_[i]; }

  /// Matrix of ad(a): ad(a) * v = [a, v].
  Eigen::MatrixXd ad(const AlgebraVector& a) const;

  /// Lie bracket of two coordinate vectors.
  AlgebraVector bracket(const AlgebraVector& a, const AlgebraVector& b) const;

  /// Basis vector e_i as a coordinate vector.
  AlgebraVector basis_vector(int i) const;

  /// Largest |c_raw[i][j][k] + c_raw[j][i][k]| over the raw input constants.
  double antisymmetry_residual() const { return antisym_residual_; }
  const std::array<int, 3>& worst_antisymmetry_entry() const { return antisym_entry_; }

  /// Raw constant as given before antisymmetrization.
  double raw_structure_constant(int i, int j, int k) const { return raw_[i](j, k); }

private:
  int dim_;
  std::vector<std::string> basis_labels_;
  std::vector<Eigen::MatrixXd> ad_basis_;  // ad_basis_[i](k, j) = c[i][j][k]
  std::vector<Eigen::MatrixXd> raw_;       // raw_[i](j, k) as given
  double antisym_residual_ = 0.0;
  std::array<int, 3> antisym_entry_{-1, -1, -1};
};

using LieAlgebraPtr = std::shared_ptr<const LieAlgebra>;

/// Result of checking antisymmetry and the Jacobi identity.
struct ValidationReport {
  bool pass = false;
  double tol = 0.0;
  double max_jacobi_residual = 0.0;
  std::array<int, 3> worst_jacobi_triple{-1, -1, -1};
  double max_antisymmetry_residual = 0.0;
  std::array<int, 3> worst_antisymmetry_entry{-1, -1, -1};
  std::vector<std::array<int, 3>> failing_triples;  // Jacobi residual above tol
  std::vector<std::array<int, 3>> failing_entries;  // antisymmetry above tol
};

/// Checks max residual of [[x,y],z] + [[y,z],x] + [[z,x],y] over basis triples,
/// and the antisymmetry of the raw input constants. Never throws; the report
/// carries the offending indices.
ValidationReport validate_jacobi(const LieAlgebra& alg, double tol = 1e-9);

/// Lower central series g_1 = g, g_{m+1} = [g, g_m]. `terms` holds orthonormal
/// bases; when the series reaches zero the trailing dim x 0 term is included
/// and `step` is the k with g_{k+1} = 0. A series that stabilizes at a nonzero
/// subspace leaves `step` empty.
struct Filtration {
  std::vector<Eigen::MatrixXd> terms;
  std::optional<int> step;
  bool nilpotent() const { return step.has_value(); }
  std::vector<int> term_dims() const {
    std::vector<int> d;
    d.reserve(terms.size());
    for (const auto& t : terms) d.push_back(static_cast<int>(t.cols()));
    return d;
  }
};

/// Rank decisions use singular values above rank_tol_rel times the largest one.
Filtration lower_central_series(const LieAlgebra& alg, double rank_tol_rel = 1e-10);

bool is_nilpotent(const LieAlgebra& alg);

/// Free-function form of the bracket with explicit dimension checks.
AlgebraVector bracket(const AlgebraVector& a, const AlgebraVector& b, const LieAlgebra& alg);

}  // namespace lieflow
