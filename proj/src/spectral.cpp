#include "lieflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "lieflow/schur.hpp"

namespace lieflow {

LeibnizReport leibniz_report(const Eigen::MatrixXd& d, const LieAlgebra& alg, double tol) {
  if (d.rows() != alg.dim() || d.cols() != alg.dim())
    throw InputError("leibniz_report: matrix must be dim x dim");
  if (!d.allFinite()) throw InputError("leibniz_report: non-finite entries");
  LeibnizReport report;
  report.tol = tol;
  const int n = alg.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      AlgebraVector ei = alg.basis_vector(i), ej = alg.basis_vector(j);
      AlgebraVector r = d * alg.bracket(ei, ej) - alg.bracket(d * ei, ej) -
                        alg.bracket(ei, d * ej);
      double res = r.norm();
      if (res > report.max_residual) {
        report.max_residual = res;
        report.worst_i = i;
        report.worst_j = j;
      }
    }
  report.pass = report.max_residual <= tol;
  return report;
}

Derivation validate_leibniz(const Eigen::MatrixXd& d, LieAlgebraPtr alg, double tol) {
  if (!alg) throw InputError("validate_leibniz: null algebra");
  LeibnizReport report = leibniz_report(d, *alg, tol);
  if (!report.pass)
    throw LeibnizViolation("Leibniz rule fails on basis pair (" +
                               std::to_string(report.worst_i) + ", " +
                               std::to_string(report.worst_j) + ") with residual " +
                               std::to_string(report.max_residual),
                           report.worst_i, report.worst_j, report.max_residual);
  return Derivation(d, std::move(alg), report.max_residual);
}

namespace {

struct Cluster {
  double mean = 0.0;          // multiplicity-weighted mean real part
  int multiplicity = 0;       // eigenvalue count
  int sign_class = 0;         // +1, 0, -1
};

int classify_real_part(double re, double tol) {
  if (re > tol) return 1;
  if (re < -tol) return -1;
  return 0;
}

// Merge real parts within 2 * tol of each other (transitively): walk the
// sorted values and start a new cluster whenever the gap exceeds 2 * tol.
std::vector<Cluster> build_clusters(const Eigen::VectorXd& eig_re, double tol) {
  const int n = static_cast<int>(eig_re.size());
  std::vector<double> res(eig_re.data(), eig_re.data() + n);
  std::sort(res.begin(), res.end());

  std::vector<std::vector<double>> groups;
  for (double re : res) {
    if (groups.empty() || re - groups.back().back() > 2.0 * tol)
      groups.push_back({re});
    else
      groups.back().push_back(re);
  }

  std::vector<Cluster> clusters;
  for (const auto& g : groups) {
    Cluster c;
    c.multiplicity = static_cast<int>(g.size());
    c.mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    c.sign_class = classify_real_part(g.front(), tol);
    for (double re : g) {
      if (classify_real_part(re, tol) != c.sign_class) {
        double gap = 0.0;
        for (double a : g)
          for (double b : g)
            if (classify_real_part(a, tol) != classify_real_part(b, tol))
              gap = gap == 0.0 ? std::abs(a - b) : std::min(gap, std::abs(a - b));
        throw ClusterAmbiguity(
            "eigenvalue cluster at real part " + std::to_string(c.mean) +
                " straddles the sign classification band (gap " + std::to_string(gap) + ")",
            gap);
      }
    }
    clusters.push_back(c);
  }
  // Descending real part.
  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.mean > b.mean; });
  return clusters;
}

}  // namespace

SpectralDecomposition spectral_decompose(const Derivation& d, double tol_realpart) {
  if (tol_realpart <= 0.0) throw InputError("spectral_decompose: tolerance must be positive");
  const int n = d.dim();
  detail::SchurForm s = detail::real_schur(d.matrix());
  std::vector<Cluster> clusters = build_clusters(s.eig_re, tol_realpart);
  const int k = static_cast<int>(clusters.size());

  // Bring each cluster in turn to the front of the trailing submatrix.
  std::vector<std::pair<int, int>> ranges;  // (start, size) in the reordered form
  int offset = 0;
  for (int c = 0; c < k; ++c) {
    const int tail = n - offset;
    if (clusters[c].multiplicity == tail) {
      ranges.emplace_back(offset, tail);
      offset = n;
      break;
    }
    std::vector<int> select(tail, 0);
    for (int p = 0; p < tail; ++p) {
      double re = s.eig_re(offset + p);
      int nearest = c;
      double best = std::abs(re - clusters[c].mean);
      for (int c2 = 0; c2 < k; ++c2) {
        double dist = std::abs(re - clusters[c2].mean);
        if (dist < best) {
          best = dist;
          nearest = c2;
        }
      }
      if (nearest == c) select[p] = 1;
    }
    int m = detail::schur_select_to_front(s, offset, select);
    if (m != clusters[c].multiplicity)
      throw Error("spectral_decompose: cluster reordering lost eigenvalues");
    ranges.emplace_back(offset, m);
    offset += m;
  }

  // Decouple the reordered quasi triangular form: t * S = S * blockdiag, with
  // S unit upper triangular solved block column by block column.
  Eigen::MatrixXd S = Eigen::MatrixXd::Identity(n, n);
  for (int j = 1; j < k; ++j) {
    const auto [cj, sj] = ranges[j];
    for (int i = j - 1; i >= 0; --i) {
      const auto [ci, si] = ranges[i];
      Eigen::MatrixXd rhs = -s.t.block(ci, cj, si, sj);
      for (int l = i + 1; l < j; ++l) {
        const auto [cl, sl] = ranges[l];
        rhs -= s.t.block(ci, cl, si, sl) * S.block(cl, cj, sl, sj);
      }
      Eigen::MatrixXd tjj = -s.t.block(cj, cj, sj, sj);
      S.block(ci, cj, si, sj) =
          detail::solve_sylvester_quasi(s.t.block(ci, ci, si, si), false, tjj, rhs);
    }
  }

  Eigen::MatrixXd m_full = s.u * S;
  Eigen::MatrixXd m_inv = S.triangularView<Eigen::Upper>().solve(s.u.transpose());

  SpectralDecomposition sd;
  sd.tol_realpart = tol_realpart;
  sd.layers.resize(k);
  Eigen::MatrixXd proj_sum = Eigen::MatrixXd::Zero(n, n);
  for (int c = 0; c < k; ++c) {
    const auto [start, size] = ranges[c];
    Layer& layer = sd.layers[c];
    layer.real_part = clusters[c].mean;
    layer.basis = detail::orthonormal_columns(m_full.middleCols(start, size));
    for (int p = start; p < start + size; ++p)
      layer.eigenvalues.emplace_back(s.eig_re(p), s.eig_im(p));
    if (c + 1 < k) {
      layer.projection = m_full.middleCols(start, size) * m_inv.middleRows(start, size);
      proj_sum += layer.projection;
    } else {
      // Close the resolution of the identity exactly.
      layer.projection = Eigen::MatrixXd::Identity(n, n) - proj_sum;
    }
    for (const auto& ev : layer.eigenvalues) sd.eigenvalues.push_back(ev);
  }

  auto class_range = [&](int sign_class) {
    int start = 0, size = 0;
    for (int c = 0; c < k; ++c) {
      if (clusters[c].sign_class == sign_class) {
        if (size == 0) start = ranges[c].first;
        size += ranges[c].second;
      }
    }
    return std::pair<int, int>(start, size);
  };
  auto class_basis = [&](int sign_class) {
    auto [start, size] = class_range(sign_class);
    if (size == 0) return Eigen::MatrixXd(n, 0);
    return detail::orthonormal_columns(m_full.middleCols(start, size));
  };
  auto class_proj = [&](int sign_class) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (int c = 0; c < k; ++c)
      if (clusters[c].sign_class == sign_class) p += sd.layers[c].projection;
    return p;
  };
  sd.plus_basis = class_basis(1);
  sd.zero_basis = class_basis(0);
  sd.minus_basis = class_basis(-1);
  sd.proj_plus = class_proj(1);
  sd.proj_zero = class_proj(0);
  sd.proj_minus = class_proj(-1);
  return sd;
}

bool is_hyperbolic(const SpectralDecomposition& sd) { return sd.dim_zero() == 0; }

GradingReport grading_check(const SpectralDecomposition& sd, const LieAlgebra& alg,
                            double tol) {
  if (sd.dim() != alg.dim()) throw InputError("grading_check: dimension mismatch");
  GradingReport report;
  report.tol = tol;
  const int k = static_cast<int>(sd.layers.size());
  const int n = alg.dim();
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      GradingPair pair;
      pair.lambda_a = sd.layers[a].real_part;
      pair.lambda_b = sd.layers[b].real_part;
      double target = pair.lambda_a + pair.lambda_b;
      int target_layer = -1;
      double best = 2.0 * sd.tol_realpart;
      for (int c = 0; c < k; ++c) {
        double dist = std::abs(sd.layers[c].real_part - target);
        if (dist <= best) {
          best = dist;
          target_layer = c;
        }
      }
      pair.target_exists = target_layer >= 0;

      const Eigen::MatrixXd& ba = sd.layers[a].basis;
      const Eigen::MatrixXd& bb = sd.layers[b].basis;
      Eigen::MatrixXd brackets(n, ba.cols() * bb.cols());
      for (int p = 0; p < ba.cols(); ++p)
        for (int q = 0; q < bb.cols(); ++q)
          brackets.col(p * bb.cols() + q) = alg.bracket(ba.col(p), bb.col(q));
      if (pair.target_exists)
        brackets -= sd.layers[target_layer].projection * brackets;
      pair.residual =
          brackets.cols() == 0 ? 0.0 : brackets.colwise().norm().maxCoeff();
      report.max_residual = std::max(report.max_residual, pair.residual);
      report.pairs.push_back(pair);
    }
  report.pass = report.max_residual <= tol;
  return report;
}

bool is_semisimple_on(const Derivation& d, const Eigen::MatrixXd& subspace_basis,
                      double tol) {
  const Eigen::MatrixXd& m = d.matrix();
  if (subspace_basis.rows() != m.rows())
    throw InputError("is_semisimple_on: basis has wrong row count");
  const int sub = static_cast<int>(subspace_basis.cols());
  if (sub == 0) return true;

  Eigen::MatrixXd q = detail::orthonormal_columns(subspace_basis);
  Eigen::MatrixXd dq = m * q;
  double inv_residual =
      ((Eigen::MatrixXd::Identity(m.rows(), m.rows()) - q * q.transpose()) * dq)
          .colwise()
          .norm()
          .maxCoeff();
  if (inv_residual > tol)
    throw InvariantSubspaceViolation(
        "subspace is not invariant under the derivation (residual " +
            std::to_string(inv_residual) + ")",
        inv_residual);

  Eigen::MatrixXd restricted = q.transpose() * dq;
  Eigen::EigenSolver<Eigen::MatrixXd> es(restricted);
  std::vector<std::complex<double>> eig(es.eigenvalues().data(),
                                        es.eigenvalues().data() + sub);

  // Cluster eigenvalues within tol (transitive closure).
  std::vector<int> owner(sub);
  std::iota(owner.begin(), owner.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return owner[x] == x ? x : owner[x] = find(owner[x]);
  };
  for (int i = 0; i < sub; ++i)
    for (int j = i + 1; j < sub; ++j)
      if (std::abs(eig[i] - eig[j]) <= tol) owner[find(i)] = find(j);

  std::map<int, std::vector<int>> clusters;
  for (int i = 0; i < sub; ++i) clusters[find(i)].push_back(i);

  for (const auto& [root, members] : clusters) {
    std::complex<double> alpha(0.0, 0.0);
    for (int i : members) alpha += eig[i];
    alpha /= static_cast<double>(members.size());
    Eigen::MatrixXcd shifted = restricted.cast<std::complex<double>>();
    shifted.diagonal().array() -= alpha;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
    const auto& sv = svd.singularValues();
    double threshold = tol * std::max(sv.size() > 0 ? sv(0) : 0.0, 1.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > threshold) ++rank;
    if (rank != sub - static_cast<int>(members.size())) return false;
  }
  return true;
}

}  // namespace lieflow
