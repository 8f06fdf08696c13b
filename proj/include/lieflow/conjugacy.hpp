#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "lieflow/flow.hpp"
#include "lieflow/group.hpp"

namespace lieflow {

/// Homeomorphism zeta between two contracting linear flows x' = Ax and
/// y' = By of equal dimension with zeta(e^{tA} x) = e^{tB} zeta(x):
/// trajectories are parametrized by the unique time tau at which they cross
/// the unit level set of the adapted form of A, the level sets are matched by
/// the radial map u -> u / sqrt(Q_B(u)), and the crossing is undone with
/// e^{-tau B}. Expanding flows reuse the construction on (-A, -B).
class EuclideanConjugacy {
public:
  /// Both matrices must be contracting (spectral abscissa below -tol_realpart).
  static EuclideanConjugacy build(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                  double tol_realpart = 1e-8);

  int dim() const { return static_cast<int>(a_.rows()); }
  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::MatrixXd& b() const { return b_; }
  const AdaptedForm& form_a() const { return form_a_; }
  const AdaptedForm& form_b() const { return form_b_; }

  /// Unique tau with Q_A(e^{tau A} x) = 1 for x != 0, found by bracketing the
  /// strictly decreasing map t -> Q_A(e^{tA} x) and safeguarded Newton
  /// refinement; |Q - 1| <= 1e-12 at the returned time.
  double crossing_time(const Eigen::VectorXd& x) const;

  /// zeta(x); zeta(0) = 0 exactly.
  Eigen::VectorXd map(const Eigen::VectorXd& x) const;

  /// The inverse map (the same construction with the roles swapped).
  Eigen::VectorXd inverse_map(const Eigen::VectorXd& y) const;

private:
  EuclideanConjugacy(Eigen::MatrixXd a, Eigen::MatrixXd b, AdaptedForm fa, AdaptedForm fb)
      : a_(std::move(a)), b_(std::move(b)), form_a_(std::move(fa)), form_b_(std::move(fb)) {}

  static double crossing_time_impl(const Eigen::MatrixXd& gen, const AdaptedForm& form,
                                   const Eigen::VectorXd& x);
  static Eigen::VectorXd map_impl(const Eigen::MatrixXd& a, const AdaptedForm& fa,
                                  const Eigen::MatrixXd& b, const AdaptedForm& fb,
                                  const Eigen::VectorXd& x);

  Eigen::MatrixXd a_, b_;
  AdaptedForm form_a_, form_b_;
};

double crossing_time(const EuclideanConjugacy& ec, const Eigen::VectorXd& x);
Eigen::VectorXd evaluate_zeta(const EuclideanConjugacy& ec, const Eigen::VectorXd& x);

/// A hyperbolic linear flow on a nilpotent group, bundled with its spectral
/// decomposition and the group realization.
struct HyperbolicSystem {
  LieAlgebraPtr algebra;
  Derivation derivation;
  SpectralDecomposition sd;
  NilpotentGroupPtr group;
  LinearFlow flow;

  /// Decomposes, then rejects non-hyperbolic or non-nilpotent input.
  static HyperbolicSystem analyze(LieAlgebraPtr alg, const Derivation& d,
                                  double tol_realpart = 1e-8);
};

/// Topological conjugacy pi between two hyperbolic flows with matching
/// stable/unstable dimensions: pi(g) = pi_u(g+) * pi_s(g-), the factors mapped
/// through the layer conjugacies in exponential coordinates. pi(e) = e
/// exactly.
class GroupConjugacy {
public:
  static GroupConjugacy build(HyperbolicSystem source, HyperbolicSystem target);

  const HyperbolicSystem& source() const { return source_; }
  const HyperbolicSystem& target() const { return target_; }
  const std::optional<EuclideanConjugacy>& xi_plus() const { return xi_plus_; }
  const std::optional<EuclideanConjugacy>& xi_minus() const { return xi_minus_; }

  GroupElement map(const GroupElement& g) const;
  GroupElement inverse_map(const GroupElement& h) const;

private:
  GroupConjugacy(HyperbolicSystem src, HyperbolicSystem dst,
                 std::optional<EuclideanConjugacy> plus,
                 std::optional<EuclideanConjugacy> minus)
      : source_(std::move(src)), target_(std::move(dst)),
        xi_plus_(std::move(plus)), xi_minus_(std::move(minus)) {}

  HyperbolicSystem source_, target_;
  std::optional<EuclideanConjugacy> xi_plus_, xi_minus_;
};

GroupElement evaluate_pi(const GroupConjugacy& gc, const GroupElement& g);
GroupElement evaluate_pi_inverse(const GroupConjugacy& gc, const GroupElement& h);

struct VerificationReport {
  int samples = 0;
  double t_min = 0.0, t_max = 0.0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  double coordinate_scale = 1.0;
  double max_residual = 0.0;
  double median_residual = 0.0;
  double max_roundtrip = 0.0;  // worst || coords(pi^{-1}(pi(g))) - coords(g) ||
  bool pass = false;
};

/// Draws (g, t) samples with normal coordinates of the given scale and
/// uniform times, and reports the gauge distance between pi(flow_t(g)) and
/// flow'_t(pi(g)). Passes iff the max residual stays within tol.
VerificationReport verify_conjugacy(const GroupConjugacy& gc, int samples, double t_min,
                                    double t_max, double tol, std::uint64_t seed,
                                    double coordinate_scale = 1.0);

}  // namespace lieflow
