#pragma once

#include <Eigen/Dense>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "lieflow/lie_algebra.hpp"
#include "lieflow/spectral.hpp"

namespace fixtures {

using lieflow::AlgebraVector;
using lieflow::BracketEntry;
using lieflow::Derivation;
using lieflow::LieAlgebra;
using lieflow::LieAlgebraPtr;

inline LieAlgebraPtr heisenberg() {
  Eigen::VectorXd e3 = Eigen::VectorXd::Zero(3);
  e3(2) = 1.0;
  std::vector<BracketEntry> entries{{0, 1, e3}};
  return std::make_shared<const LieAlgebra>(
      LieAlgebra::from_brackets(3, {"e1", "e2", "e3"}, entries));
}

inline LieAlgebraPtr abelian(int n) {
  return std::make_shared<const LieAlgebra>(LieAlgebra::from_brackets(n, {}, {}));
}

// Step-3 filiform: [e1, e2] = e3, [e1, e3] = e4.
inline LieAlgebraPtr filiform4() {
  Eigen::VectorXd e3 = Eigen::VectorXd::Zero(4), e4 = Eigen::VectorXd::Zero(4);
  e3(2) = 1.0;
  e4(3) = 1.0;
  std::vector<BracketEntry> entries{{0, 1, e3}, {0, 2, e4}};
  return std::make_shared<const LieAlgebra>(
      LieAlgebra::from_brackets(4, {"e1", "e2", "e3", "e4"}, entries));
}

// Basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h.
inline LieAlgebraPtr sl2() {
  Eigen::VectorXd two_e = Eigen::VectorXd::Zero(3), minus_two_f = Eigen::VectorXd::Zero(3),
                  h = Eigen::VectorXd::Zero(3);
  two_e(1) = 2.0;
  minus_two_f(2) = -2.0;
  h(0) = 1.0;
  std::vector<BracketEntry> entries{{0, 1, two_e}, {0, 2, minus_two_f}, {1, 2, h}};
  return std::make_shared<const LieAlgebra>(
      LieAlgebra::from_brackets(3, {"h", "e", "f"}, entries));
}

inline Derivation make_derivation(const LieAlgebraPtr& alg, const Eigen::MatrixXd& d) {
  return lieflow::validate_leibniz(d, alg);
}

// diag(d1, d2, d1 + d2) is a derivation of the Heisenberg algebra.
inline Derivation heis_diag(const LieAlgebraPtr& alg, double d1, double d2) {
  Eigen::Vector3d diag(d1, d2, d1 + d2);
  return make_derivation(alg, diag.asDiagonal());
}

// diag(a, b, a + b, 2a + b) is a derivation of the step-3 filiform algebra.
inline Derivation fili_diag(const LieAlgebraPtr& alg, double a, double b) {
  Eigen::Vector4d diag(a, b, a + b, 2.0 * a + b);
  return make_derivation(alg, diag.asDiagonal());
}

// ad(e) on sl2: nilpotent, nonzero, all eigenvalues 0.
inline Derivation sl2_ad_e(const LieAlgebraPtr& alg) {
  Eigen::MatrixXd d(3, 3);
  d << 0, 0, 1, -2, 0, 0, 0, 0, 0;
  return make_derivation(alg, d);
}

// The algebra of strictly upper triangular n x n matrices (step n - 1), with
// the coordinate <-> matrix maps used by the multiplication oracle.
struct UpperTriangular {
  int n = 0;
  LieAlgebraPtr algebra;
  std::vector<std::pair<int, int>> positions;  // coordinate index -> (row, col)

  Eigen::MatrixXd to_matrix(const Eigen::VectorXd& v) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (size_t k = 0; k < positions.size(); ++k)
      m(positions[k].first, positions[k].second) = v(static_cast<int>(k));
    return m;
  }

  Eigen::VectorXd to_coords(const Eigen::MatrixXd& m) const {
    Eigen::VectorXd v(static_cast<int>(positions.size()));
    for (size_t k = 0; k < positions.size(); ++k)
      v(static_cast<int>(k)) = m(positions[k].first, positions[k].second);
    return v;
  }
};

inline UpperTriangular strictly_upper(int n) {
  UpperTriangular out;
  out.n = n;
  std::vector<std::vector<int>> index(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      index[a][b] = static_cast<int>(out.positions.size());
      out.positions.emplace_back(a, b);
    }
  const int dim = static_cast<int>(out.positions.size());
  std::vector<Eigen::MatrixXd> raw(dim, Eigen::MatrixXd::Zero(dim, dim));
  // [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb
  for (int p = 0; p < dim; ++p)
    for (int q = 0; q < dim; ++q) {
      auto [a, b] = out.positions[p];
      auto [c, d] = out.positions[q];
      if (b == c) raw[p](q, index[a][d]) += 1.0;
      if (d == a) raw[p](q, index[c][b]) -= 1.0;
    }
  out.algebra = std::make_shared<const LieAlgebra>(LieAlgebra(dim, {}, raw));
  return out;
}

// Exact exponential of a nilpotent matrix (the Taylor sum terminates).
inline Eigen::MatrixXd nilpotent_expm(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd powtk = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    powtk = powtk * m / static_cast<double>(k);
    sum += powtk;
  }
  return sum;
}

// Exact logarithm of a unipotent matrix.
inline Eigen::MatrixXd unipotent_logm(const Eigen::MatrixXd& u) {
  const int n = static_cast<int>(u.rows());
  Eigen::MatrixXd x = u - Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd powk = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    powk = powk * x;
    sum += (k % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(k) * powk;
  }
  return sum;
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double normal(std::mt19937_64& rng) {
  double u1 = 1.0 - uniform01(rng);
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, int n, double scale = 1.0) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = scale * normal(rng);
  return v;
}

}  // namespace fixtures
