#include "lieflow/schur.hpp"

#include <lapacke.h>

#include <cmath>
#include <string>

#include "lieflow/errors.hpp"

namespace lieflow::detail {

SchurForm real_schur(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw InputError("real_schur: matrix must be square");
  if (!a.allFinite()) throw InputError("real_schur: non-finite entries");
  const int n = static_cast<int>(a.rows());
  SchurForm s;
  s.t = a;
  s.u.resize(n, n);
  s.eig_re.resize(n);
  s.eig_im.resize(n);
  int sdim = 0;
  int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, s.t.data(), n, &sdim,
                           s.eig_re.data(), s.eig_im.data(), s.u.data(), n);
  if (info != 0)
    throw Error("real_schur: dgees failed with info " + std::to_string(info));
  return s;
}

std::vector<std::pair<int, int>> diagonal_blocks(const Eigen::MatrixXd& t) {
  std::vector<std::pair<int, int>> blocks;
  const int n = static_cast<int>(t.rows());
  int p = 0;
  while (p < n) {
    if (p + 1 < n && t(p + 1, p) != 0.0) {
      blocks.emplace_back(p, 2);
      p += 2;
    } else {
      blocks.emplace_back(p, 1);
      p += 1;
    }
  }
  return blocks;
}

int schur_select_to_front(SchurForm& s, int offset, const std::vector<int>& select_tail) {
  const int n = static_cast<int>(s.t.rows());
  const int m = n - offset;
  if (m <= 0 || static_cast<int>(select_tail.size()) != m)
    throw InputError("schur_select_to_front: bad selection length");

  Eigen::MatrixXd t_tail = s.t.block(offset, offset, m, m);
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd wr(m), wi(m);
  std::vector<lapack_logical> select(m);
  for (int i = 0; i < m; ++i) select[i] = select_tail[i] ? 1 : 0;

  // Job 'B' also returns the condition numbers; the cheaper 'N'/'E' variants
  // trip a workspace-query defect in the system LAPACKE.
  int sdim = 0;
  double cond_s = 0.0, cond_sep = 0.0;
  int info = LAPACKE_dtrsen(LAPACK_COL_MAJOR, 'B', 'V', select.data(), m, t_tail.data(), m,
                            q.data(), m, wr.data(), wi.data(), &sdim, &cond_s, &cond_sep);
  if (info != 0)
    throw Error("schur_select_to_front: dtrsen failed with info " + std::to_string(info));

  s.t.block(offset, offset, m, m) = t_tail;
  if (offset > 0)
    s.t.block(0, offset, offset, m) = s.t.block(0, offset, offset, m) * q;
  s.u.middleCols(offset, m) = s.u.middleCols(offset, m) * q;
  s.eig_re.segment(offset, m) = wr;
  s.eig_im.segment(offset, m) = wi;
  return sdim;
}

namespace {

// Solve the small (up to 4x4) system for a_ii y + y b_ll = r via vec().
Eigen::MatrixXd solve_small_sylvester(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                      const Eigen::MatrixXd& r) {
  const int p = static_cast<int>(a.rows());
  const int q = static_cast<int>(b.rows());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(p * q, p * q);
  // vec(a y) = (I (x) a) vec(y), vec(y b) = (b^T (x) I) vec(y), columns stacked.
  for (int col = 0; col < q; ++col) k.block(col * p, col * p, p, p) += a;
  for (int cb = 0; cb < q; ++cb)
    for (int rb = 0; rb < q; ++rb)
      k.block(cb * p, rb * p, p, p) += b(rb, cb) * Eigen::MatrixXd::Identity(p, p);
  Eigen::VectorXd rhs(p * q);
  for (int col = 0; col < q; ++col) rhs.segment(col * p, p) = r.col(col);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
  if (!lu.isInvertible())
    throw Error("solve_sylvester_quasi: coefficient spectra are not disjoint");
  Eigen::VectorXd y = lu.solve(rhs);
  Eigen::MatrixXd out(p, q);
  for (int col = 0; col < q; ++col) out.col(col) = y.segment(col * p, p);
  return out;
}

std::vector<std::pair<int, int>> blocks_of(const Eigen::MatrixXd& m, bool lower) {
  // For the quasi lower triangular case the 2x2 markers sit above the diagonal.
  std::vector<std::pair<int, int>> blocks;
  const int n = static_cast<int>(m.rows());
  int p = 0;
  while (p < n) {
    bool two = p + 1 < n && (lower ? m(p, p + 1) != 0.0 : m(p + 1, p) != 0.0);
    blocks.emplace_back(p, two ? 2 : 1);
    p += two ? 2 : 1;
  }
  return blocks;
}

}  // namespace

Eigen::MatrixXd solve_sylvester_quasi(const Eigen::MatrixXd& a, bool a_lower,
                                      const Eigen::MatrixXd& b, const Eigen::MatrixXd& c) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(b.rows());
  if (c.rows() != m || c.cols() != n)
    throw InputError("solve_sylvester_quasi: inconsistent shapes");
  if (m == 0 || n == 0) return Eigen::MatrixXd(m, n);

  auto ab = blocks_of(a, a_lower);
  auto bb = blocks_of(b, false);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, n);

  // Dependency order: rows from the closed end of a, columns left to right.
  std::vector<int> row_order(ab.size());
  for (size_t i = 0; i < ab.size(); ++i)
    row_order[i] = a_lower ? static_cast<int>(i) : static_cast<int>(ab.size() - 1 - i);

  for (size_t lb = 0; lb < bb.size(); ++lb) {
    const auto [cstart, csize] = bb[lb];
    for (int ib : row_order) {
      const auto [rstart, rsize] = ab[ib];
      // Entries of x not yet computed contribute zero and carry zero
      // coefficients in this order, so the full products are safe.
      Eigen::MatrixXd r = c.block(rstart, cstart, rsize, csize) -
                          a.middleRows(rstart, rsize) * x.middleCols(cstart, csize) -
                          x.middleRows(rstart, rsize) * b.middleCols(cstart, csize);
      x.block(rstart, cstart, rsize, csize) =
          solve_small_sylvester(a.block(rstart, rstart, rsize, rsize),
                                b.block(cstart, cstart, csize, csize), r);
    }
  }
  return x;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q) {
  if (a.rows() != a.cols() || q.rows() != a.rows() || q.cols() != a.cols())
    throw InputError("solve_lyapunov: inconsistent shapes");
  if (a.rows() == 0) return Eigen::MatrixXd(0, 0);
  SchurForm s = real_schur(a);
  Eigen::MatrixXd c = -s.u.transpose() * q * s.u;
  Eigen::MatrixXd y = solve_sylvester_quasi(s.t.transpose(), true, s.t, c);
  Eigen::MatrixXd p = s.u * y * s.u.transpose();
  return 0.5 * (p + p.transpose());
}

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& m) {
  if (m.cols() == 0) return m;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

}  // namespace lieflow::detail
