#include "lieflow/group.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace lieflow {

namespace {

// Exact fractions for the series coefficients. All denominators here are
// products of small factorials and indices, so int64 with gcd reduction is
// plenty.
struct Rational {
  long long num = 0;
  long long den = 1;

  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(std::abs(num), den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  Rational& operator+=(const Rational& other) {
    long long g = std::gcd(den, other.den);
    long long scale = other.den / g;
    num = num * scale + other.num * (den / g);
    den = den * scale;
    reduce();
    return *this;
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

long long factorial(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

using Word = std::vector<std::uint8_t>;

// Enumerate the sequences (r_1, s_1)...(r_n, s_n), r_i + s_i >= 1, of total
// degree <= depth, and accumulate the coefficient
//   (-1)^{n-1} / (n * m * prod r_i! s_i!)
// onto the word X^{r_1} Y^{s_1} ... X^{r_n} Y^{s_n} of length m.
void enumerate_terms(int remaining, int groups, Word& word,
                     long long factorial_product, std::map<Word, Rational>& table) {
  if (!word.empty()) {
    const int m = static_cast<int>(word.size());
    Rational coeff{(groups % 2 == 1) ? 1 : -1,
                   static_cast<long long>(groups) * m * factorial_product};
    coeff.reduce();
    table[word] += coeff;
  }
  if (remaining == 0) return;
  for (int p = 1; p <= remaining; ++p) {
    for (int r = 0; r <= p; ++r) {
      const int s = p - r;
      for (int q = 0; q < r; ++q) word.push_back(0);
      for (int q = 0; q < s; ++q) word.push_back(1);
      enumerate_terms(remaining - p, groups + 1, word,
                      factorial_product * factorial(r) * factorial(s), table);
      word.resize(word.size() - p);
    }
  }
}

}  // namespace

BchTable BchTable::build(int depth) {
  if (depth < 1) throw InputError("BchTable: depth must be at least 1");
  if (depth > 6)
    throw StepTooLarge("BchTable: series truncation supports step at most 6, got " +
                           std::to_string(depth),
                       depth);
  std::map<Word, Rational> table;
  Word word;
  enumerate_terms(depth, 0, word, 1, table);

  BchTable out;
  out.depth_ = depth;
  for (const auto& [w, coeff] : table) {
    if (coeff.num == 0) continue;
    // The right-nested bracket ends in [a, a] when the last two letters agree;
    // such words evaluate to zero identically.
    if (w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2]) continue;
    out.terms_.push_back({w, coeff.value()});
  }
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const BchTerm& a, const BchTerm& b) {
              if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
              return a.word < b.word;
            });
  return out;
}

AlgebraVector BchTable::evaluate(const LieAlgebra& alg, const AlgebraVector& x,
                                 const AlgebraVector& y) const {
  if (x.size() != alg.dim() || y.size() != alg.dim())
    throw InputError("bch: vector does not belong to the algebra");
  const Eigen::MatrixXd ad_x = alg.ad(x);
  const Eigen::MatrixXd ad_y = alg.ad(y);
  AlgebraVector z = AlgebraVector::Zero(alg.dim());
  for (const BchTerm& term : terms_) {
    AlgebraVector v = term.word.back() ? y : x;
    for (int i = static_cast<int>(term.word.size()) - 2; i >= 0; --i)
      v = (term.word[i] ? ad_y : ad_x) * v;
    z += term.coefficient * v;
  }
  return z;
}

NilpotentGroupPtr NilpotentGroup::create(LieAlgebraPtr alg) {
  if (!alg) throw InputError("NilpotentGroup: null algebra");
  Filtration series = lower_central_series(*alg);
  if (!series.nilpotent())
    throw NotNilpotent("NilpotentGroup: the algebra is not nilpotent (series stabilizes at dimension " +
                       std::to_string(series.terms.back().cols()) + ")");
  const int step = *series.step;
  BchTable table = BchTable::build(step);
  return NilpotentGroupPtr(new NilpotentGroup(std::move(alg), step, std::move(table)));
}

AlgebraVector NilpotentGroup::bch(const AlgebraVector& x, const AlgebraVector& y) const {
  return table_.evaluate(*algebra_, x, y);
}

GroupElement NilpotentGroup::element(AlgebraVector coords) const {
  if (coords.size() != dim())
    throw InputError("NilpotentGroup: coordinates have wrong length");
  return {std::move(coords), shared_from_this()};
}

GroupElement NilpotentGroup::identity() const {
  return {AlgebraVector::Zero(dim()), shared_from_this()};
}

GroupElement multiply(const GroupElement& g, const GroupElement& h) {
  if (!g.group || g.group != h.group)
    throw InputError("multiply: elements belong to different groups");
  return {g.group->bch(g.coords, h.coords), g.group};
}

GroupElement inverse(const GroupElement& g) {
  if (!g.group) throw InputError("inverse: detached element");
  return {-g.coords, g.group};
}

double gauge(const GroupElement& g) { return g.coords.norm(); }

GroupElement flow_group(const LinearFlow& lf, double t, const GroupElement& g) {
  if (!g.group) throw InputError("flow_group: detached element");
  if (lf.derivation().algebra().get() != &g.group->algebra())
    throw InputError("flow_group: derivation lives on a different algebra");
  return {lf.apply(t, g.coords), g.group};
}

std::pair<GroupElement, GroupElement> split_plus_minus(const GroupElement& g,
                                                       const SpectralDecomposition& sd) {
  if (!g.group) throw InputError("split_plus_minus: detached element");
  const NilpotentGroup& group = *g.group;
  if (sd.dim() != group.dim())
    throw InputError("split_plus_minus: decomposition has wrong dimension");
  if (sd.dim_zero() > 0)
    throw NotHyperbolic("split_plus_minus: decomposition has a nonzero central part");

  const AlgebraVector& x = g.coords;
  const double scale = std::max(1.0, x.norm());
  AlgebraVector xp = sd.proj_plus * x;
  AlgebraVector xm = sd.proj_minus * x;

  const int max_iters = group.step() + 2;
  double residual = (group.bch(xp, xm) - x).norm();
  for (int iter = 0; iter < max_iters && residual > 1e-13 * scale; ++iter) {
    AlgebraVector r = group.bch(xp, xm) - xp - xm;
    xp = sd.proj_plus * (x - r);
    xm = sd.proj_minus * (x - r);
    residual = (group.bch(xp, xm) - x).norm();
  }
  if (residual > 1e-8 * scale)
    throw NonConvergence("split_plus_minus: residual " + std::to_string(residual) +
                         " after " + std::to_string(max_iters) + " iterations");
  return {group.element(std::move(xp)), group.element(std::move(xm))};
}

AttractorReport attractor_test(const LinearFlow& lf, const SpectralDecomposition& sd,
                               const GroupElement& g, double t_max, double tol) {
  if (t_max <= 0.0) throw InputError("attractor_test: t_max must be positive");
  if (tol <= 0.0) throw InputError("attractor_test: tol must be positive");
  if (sd.dim_zero() > 0)
    throw NotHyperbolic("attractor_test: decomposition has a nonzero central part");

  AttractorReport report;
  report.initial_gauge = gauge(g);
  const int grid = 64;
  for (int i = 1; i <= grid; ++i) {
    double t = t_max * static_cast<double>(i) / grid;
    report.final_gauge = gauge(flow_group(lf, t, g));
  }
  auto [gp, gm] = split_plus_minus(g, sd);
  report.plus_factor_gauge = gauge(gp);
  report.minus_factor_gauge = gauge(gm);

  const bool decayed = report.final_gauge <= tol;
  const bool no_unstable_factor = report.plus_factor_gauge <= tol;
  if (decayed && no_unstable_factor)
    report.classification = Classification::stable_point;
  else if (!no_unstable_factor &&
           report.final_gauge > std::max(report.initial_gauge, tol))
    report.classification = Classification::unstable_component;
  else
    report.classification = Classification::inconclusive;
  return report;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::stable_point: return "stable_point";
    case Classification::unstable_component: return "unstable_component";
    case Classification::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace lieflow
