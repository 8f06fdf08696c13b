#include "lieflow/lie_algebra.hpp"

#include <cmath>
#include <set>
#include <utility>

namespace lieflow {

LieAlgebra::LieAlgebra(int dim, std::vector<std::string> basis_labels,
                       const std::vector<Eigen::MatrixXd>& constants)
    : dim_(dim), basis_labels_(std::move(basis_labels)) {
  if (dim < 1) throw InputError("LieAlgebra: dimension must be positive");
  if (static_cast<int>(constants.size()) != dim)
    throw InputError("LieAlgebra: expected one constant matrix per basis vector");
  for (const auto& c : constants) {
    if (c.rows() != dim || c.cols() != dim)
      throw InputError("LieAlgebra: constant matrices must be dim x dim");
    if (!c.allFinite()) throw InputError("LieAlgebra: non-finite structure constant");
  }
  if (basis_labels_.empty()) {
    for (int i = 0; i < dim; ++i) basis_labels_.push_back("e" + std::to_string(i + 1));
  }
  if (static_cast<int>(basis_labels_.size()) != dim)
    throw InputError("LieAlgebra: expected one label per basis vector");

  raw_ = constants;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        double s = std::abs(raw_[i](j, k) + raw_[j](i, k));
        if (s > antisym_residual_) {
          antisym_residual_ = s;
          antisym_entry_ = {i, j, k};
        }
      }

  // Store ad(e_i) built from the antisymmetrized constants.
  ad_basis_.assign(dim, Eigen::MatrixXd::Zero(dim, dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        ad_basis_[i](k, j) = 0.5 * (raw_[i](j, k) - raw_[j](i, k));
}

LieAlgebra LieAlgebra::from_brackets(int dim, std::vector<std::string> basis_labels,
                                     const std::vector<BracketEntry>& entries) {
  if (dim < 1) throw InputError("LieAlgebra: dimension must be positive");
  std::vector<Eigen::MatrixXd> raw(dim, Eigen::MatrixXd::Zero(dim, dim));
  std::set<std::pair<int, int>> declared;
  for (const auto& e : entries) {
    if (e.i < 0 || e.i >= dim || e.j < 0 || e.j >= dim)
      throw InputError("LieAlgebra: bracket index out of range");
    if (e.result.size() != dim)
      throw InputError("LieAlgebra: bracket result has wrong length");
    if (!declared.insert({e.i, e.j}).second)
      throw InputError("LieAlgebra: duplicate bracket entry");
    for (int k = 0; k < dim; ++k) raw[e.i](e.j, k) = e.result(k);
  }
  // Complete undeclared counterparts so that single-sided files are exactly
  // antisymmetric; inconsistent double declarations are left as given and
  // surface in the antisymmetry residual.
  for (const auto& e : entries) {
    if (e.i != e.j && !declared.count({e.j, e.i}))
      for (int k = 0; k < dim; ++k) raw[e.j](e.i, k) = -e.result(k);
  }
  return LieAlgebra(dim, std::move(basis_labels), raw);
}

Eigen::MatrixXd LieAlgebra::ad(const AlgebraVector& a) const {
  if (a.size() != dim_) throw InputError("ad: vector does not belong to this algebra");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    if (a(i) != 0.0) m += a(i) * ad_basis_[i];
  return m;
}

AlgebraVector LieAlgebra::bracket(const AlgebraVector& a, const AlgebraVector& b) const {
  if (a.size() != dim_ || b.size() != dim_)
    throw InputError("bracket: vector does not belong to this algebra");
  AlgebraVector out = AlgebraVector::Zero(dim_);
  for (int i = 0; i < dim_; ++i)
    if (a(i) != 0.0) out += a(i) * (ad_basis_[i] * b);
  return out;
}

AlgebraVector LieAlgebra::basis_vector(int i) const {
  if (i < 0 || i >= dim_) throw InputError("basis_vector: index out of range");
  AlgebraVector v = AlgebraVector::Zero(dim_);
  v(i) = 1.0;
  return v;
}

AlgebraVector bracket(const AlgebraVector& a, const AlgebraVector& b, const LieAlgebra& alg) {
  return alg.bracket(a, b);
}

ValidationReport validate_jacobi(const LieAlgebra& alg, double tol) {
  if (tol <= 0.0) throw InputError("validate_jacobi: tolerance must be positive");
  ValidationReport report;
  report.tol = tol;
  const int n = alg.dim();

  report.max_antisymmetry_residual = alg.antisymmetry_residual();
  report.worst_antisymmetry_entry = alg.worst_antisymmetry_entry();
  if (report.max_antisymmetry_residual > tol) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (std::abs(alg.raw_structure_constant(i, j, k) +
                       alg.raw_structure_constant(j, i, k)) > tol)
            report.failing_entries.push_back({i, j, k});
  }

  // Jacobi on i < j < k is enough: with exact antisymmetry every other triple
  // is a signed copy or vanishes identically.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        AlgebraVector ei = alg.basis_vector(i), ej = alg.basis_vector(j),
                      ek = alg.basis_vector(k);
        AlgebraVector r = alg.bracket(alg.bracket(ei, ej), ek) +
                          alg.bracket(alg.bracket(ej, ek), ei) +
                          alg.bracket(alg.bracket(ek, ei), ej);
        double res = r.norm();
        if (res > report.max_jacobi_residual) {
          report.max_jacobi_residual = res;
          report.worst_jacobi_triple = {i, j, k};
        }
        if (res > tol) report.failing_triples.push_back({i, j, k});
      }

  report.pass = report.max_jacobi_residual <= tol && report.max_antisymmetry_residual <= tol;
  return report;
}

namespace {

// Orthonormal basis of the column span, cut at rank_tol_rel * sigma_max.
Eigen::MatrixXd column_span(const Eigen::MatrixXd& m, double rank_tol_rel) {
  if (m.cols() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return Eigen::MatrixXd(m.rows(), 0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol_rel * sv(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

Filtration lower_central_series(const LieAlgebra& alg, double rank_tol_rel) {
  const int n = alg.dim();
  Filtration f;
  f.terms.push_back(Eigen::MatrixXd::Identity(n, n));
  while (true) {
    const Eigen::MatrixXd& prev = f.terms.back();
    const int m = static_cast<int>(prev.cols());
    Eigen::MatrixXd brackets(n, static_cast<Eigen::Index>(n) * m);
    for (int i = 0; i < n; ++i) brackets.middleCols(i * m, m) = alg.ad_basis(i) * prev;
    Eigen::MatrixXd next = column_span(brackets, rank_tol_rel);
    if (next.cols() == 0) {
      f.terms.push_back(next);
      f.step = static_cast<int>(f.terms.size()) - 1;
      return f;
    }
    if (next.cols() >= m) {
      // The series stabilized at a nonzero ideal; the algebra is not nilpotent.
      f.terms.push_back(next);
      return f;
    }
    f.terms.push_back(next);
  }
}

bool is_nilpotent(const LieAlgebra& alg) { return lower_central_series(alg).nilpotent(); }

}  // namespace lieflow
