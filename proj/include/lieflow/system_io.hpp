#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "lieflow/lie_algebra.hpp"
#include "lieflow/spectral.hpp"

namespace lieflow {

inline constexpr const char* kToolVersion = "0.1.0";

struct Tolerances {
  double jacobi = 1e-9;
  double leibniz = 1e-9;
  double realpart = 1e-8;
  double rank = 1e-10;
  double grading = 1e-8;
};

/// Parsed but not yet validated system file.
struct SystemSpec {
  int dimension = 0;
  std::vector<std::string> basis;
  std::vector<BracketEntry> brackets;
  Eigen::MatrixXd derivation;
  Tolerances tolerances;
};

/// Parses the JSON system format:
/// {
///   "dimension": 3,
///   "basis": ["e1", "e2", "e3"],            // optional, defaults to e1..eN
///   "brackets": [{"i": 0, "j": 1, "result": [0, 0, 1]}],
///   "derivation": [[1,0,0],[0,-2,0],[0,0,-1]],
///   "tolerances": {"jacobi": 1e-9, ...}     // optional, all fields optional
/// }
/// Structural problems (missing fields, bad shapes, indices out of range)
/// raise ParseError; axiom checks happen in validate_system.
SystemSpec parse_system_json(const nlohmann::json& j);
SystemSpec load_system_file(const std::string& path);

nlohmann::json to_json(const SystemSpec& spec);

/// Axiom-checked system: Jacobi (including antisymmetry of the raw constants)
/// then Leibniz, with the file's tolerances. Throws JacobiViolation or
/// LeibnizViolation naming the offending indices.
struct ValidatedSystem {
  LieAlgebraPtr algebra;
  Derivation derivation;
  Tolerances tolerances;
  ValidationReport jacobi;
};

ValidatedSystem validate_system(const SystemSpec& spec);

/// load + validate in one step.
ValidatedSystem parse_system(const std::string& path);

/// JSON serialization with sorted keys and floats written with 17 significant
/// digits, so identical content produces identical bytes and every float
/// round-trips exactly.
std::string write_json(const nlohmann::json& j, int indent = 2);

/// FNV-1a 64-bit content hash as 16 hex characters.
std::string content_digest(const std::string& bytes);

}  // namespace lieflow
