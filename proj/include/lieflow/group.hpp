#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "lieflow/flow.hpp"
#include "lieflow/lie_algebra.hpp"
#include "lieflow/spectral.hpp"

namespace lieflow {

/// One aggregated term of the truncated series for log(exp X exp Y): the word
/// over the letters {0 = X, 1 = Y} names the right-nested bracket
/// [w_0, [w_1, ... [w_{m-2}, w_{m-1}] ...]], single letters stand for
/// themselves.
struct BchTerm {
  std::vector<std::uint8_t> word;
  double coefficient;
};

/// Coefficient table of the series truncated at bracket depth `depth`. On an
/// algebra of nilpotency step k the truncation at depth k is exact: every
/// deeper bracket vanishes. Supported depths are 1..6.
class BchTable {
public:
  static BchTable build(int depth);

  int depth() const { return depth_; }
  const std::vector<BchTerm>& terms() const { return terms_; }

  /// Z with exp(Z) = exp(X) exp(Y), evaluated through the algebra's bracket.
  AlgebraVector evaluate(const LieAlgebra& alg, const AlgebraVector& x,
                         const AlgebraVector& y) const;

private:
  int depth_ = 0;
  std::vector<BchTerm> terms_;
};

class NilpotentGroup;
using NilpotentGroupPtr = std::shared_ptr<const NilpotentGroup>;

/// A point exp(X) of the simply connected nilpotent group, stored as the
/// exponential coordinates X of the first kind. The identity has coords 0.
struct GroupElement {
  AlgebraVector coords;
  NilpotentGroupPtr group;
};

/// The simply connected nilpotent Lie group of a nilpotent algebra, realized
/// in exponential coordinates: multiplication is the truncated series on
/// coordinates, inversion is negation. Construction verifies nilpotency and
/// builds the coefficient table once; the object is immutable afterwards.
class NilpotentGroup : public std::enable_shared_from_this<NilpotentGroup> {
public:
  /// Throws NotNilpotent when the lower central series does not reach zero
  /// and StepTooLarge when the step exceeds the supported truncation depth.
  static NilpotentGroupPtr create(LieAlgebraPtr alg);

  const LieAlgebra& algebra() const { return *algebra_; }
  const LieAlgebraPtr& algebra_ptr() const { return algebra_; }
  int dim() const { return algebra_->dim(); }
  int step() const { return step_; }
  const BchTable& table() const { return table_; }

  AlgebraVector bch(const AlgebraVector& x, const AlgebraVector& y) const;

  GroupElement element(AlgebraVector coords) const;
  GroupElement identity() const;

private:
  NilpotentGroup(LieAlgebraPtr alg, int step, BchTable table)
      : algebra_(std::move(alg)), step_(step), table_(std::move(table)) {}
  LieAlgebraPtr algebra_;
  int step_;
  BchTable table_;
};

/// Group product in exponential coordinates. Throws InputError when the
/// factors live in different groups.
GroupElement multiply(const GroupElement& g, const GroupElement& h);

/// exp(-X) = exp(X)^{-1}.
GroupElement inverse(const GroupElement& g);

/// Coordinate norm ||log g||; vanishes exactly at the identity and tends to
/// zero iff g tends to the identity in the group topology.
double gauge(const GroupElement& g);

/// The group flow g = exp(X) -> exp(e^{tD} X); each time slice is a group
/// automorphism. The derivation must live on the group's algebra.
GroupElement flow_group(const LinearFlow& lf, double t, const GroupElement& g);

/// Factors g = g_plus * g_minus with log g_plus in the unstable span and
/// log g_minus in the stable span of a hyperbolic decomposition, by the
/// fixed-point iteration
///   X+ <- P+ (X - R),  X- <- P- (X - R),  R = bch(X+, X-) - X+ - X-,
/// both components updated from the same R. R gains bracket depth each round,
/// so step + 2 iterations suffice; NonConvergence past that is defensive.
std::pair<GroupElement, GroupElement> split_plus_minus(const GroupElement& g,
                                                       const SpectralDecomposition& sd);

enum class Classification { stable_point, unstable_component, inconclusive };

struct AttractorReport {
  Classification classification = Classification::inconclusive;
  double initial_gauge = 0.0;
  double final_gauge = 0.0;     // gauge(flow(t_max, g))
  double plus_factor_gauge = 0.0;
  double minus_factor_gauge = 0.0;
};

/// Tracks gauge(flow(t, g)) on a grid up to t_max and cross-checks the
/// observed decay or growth against the splitter: a stable point must both
/// decay below tol and carry no unstable factor.
AttractorReport attractor_test(const LinearFlow& lf, const SpectralDecomposition& sd,
                               const GroupElement& g, double t_max, double tol);

const char* to_string(Classification c);

}  // namespace lieflow
