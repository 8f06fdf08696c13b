#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace lieflow {

/// Base class for all domain errors thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed call-level input: dimension mismatches, bad indices, foreign parents.
class InputError : public Error {
public:
  using Error::Error;
};

/// Unreadable or structurally invalid system file.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Bracket axioms (antisymmetry or the Jacobi identity) fail beyond tolerance.
class JacobiViolation : public Error {
public:
  JacobiViolation(const std::string& what, std::array<int, 3> indices, double residual)
      : Error(what), indices(indices), residual(residual) {}
  std::array<int, 3> indices;
  double residual;
};

/// The Leibniz rule fails on a basis pair.
class LeibnizViolation : public Error {
public:
  LeibnizViolation(const std::string& what, int i, int j, double residual)
      : Error(what), i(i), j(j), residual(residual) {}
  int i;
  int j;
  double residual;
};

/// Two eigenvalue clusters are separated by less than the classification band
/// but would have to be split; the sign classification is ill posed.
class ClusterAmbiguity : public Error {
public:
  ClusterAmbiguity(const std::string& what, double gap) : Error(what), gap(gap) {}
  double gap;
};

class NotHyperbolic : public Error {
public:
  using Error::Error;
};

class NotNilpotent : public Error {
public:
  using Error::Error;
};

/// The spectral abscissa is not strictly negative.
class NotContracting : public Error {
public:
  NotContracting(const std::string& what, double abscissa)
      : Error(what), spectral_abscissa(abscissa) {}
  double spectral_abscissa;
};

/// Nilpotency step exceeds the supported truncation depth.
class StepTooLarge : public Error {
public:
  StepTooLarge(const std::string& what, int step) : Error(what), step(step) {}
  int step;
};

class NonConvergence : public Error {
public:
  using Error::Error;
};

/// A map does not preserve the given subspace within tolerance.
class InvariantSubspaceViolation : public Error {
public:
  InvariantSubspaceViolation(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

class ZeroVector : public Error {
public:
  using Error::Error;
};

/// A flow or exponential left the representable floating-point range.
class OverflowError : public Error {
public:
  using Error::Error;
};

/// Stable/unstable dimension signatures of two systems differ.
class DimensionMismatch : public Error {
public:
  DimensionMismatch(const std::string& what, int source_plus, int source_minus,
                    int target_plus, int target_minus)
      : Error(what),
        source_plus(source_plus),
        source_minus(source_minus),
        target_plus(target_plus),
        target_minus(target_minus) {}
  int source_plus;
  int source_minus;
  int target_plus;
  int target_minus;
};

}  // namespace lieflow
