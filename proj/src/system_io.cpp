#include "lieflow/system_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lieflow {

namespace {

double require_positive(const nlohmann::json& block, const char* key, double fallback) {
  if (!block.contains(key)) return fallback;
  const auto& v = block.at(key);
  if (!v.is_number() || v.get<double>() <= 0.0)
    throw ParseError(std::string("tolerances.") + key + " must be a positive number");
  return v.get<double>();
}

}  // namespace

SystemSpec parse_system_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("system file must be a JSON object");
  SystemSpec spec;

  if (!j.contains("dimension") || !j.at("dimension").is_number_integer())
    throw ParseError("missing integer field 'dimension'");
  spec.dimension = j.at("dimension").get<int>();
  if (spec.dimension < 1) throw ParseError("'dimension' must be at least 1");
  const int n = spec.dimension;

  if (j.contains("basis")) {
    if (!j.at("basis").is_array() || static_cast<int>(j.at("basis").size()) != n)
      throw ParseError("'basis' must list one label per dimension");
    for (const auto& label : j.at("basis")) {
      if (!label.is_string()) throw ParseError("'basis' entries must be strings");
      spec.basis.push_back(label.get<std::string>());
    }
  } else {
    for (int i = 0; i < n; ++i) spec.basis.push_back("e" + std::to_string(i + 1));
  }

  if (!j.contains("brackets") || !j.at("brackets").is_array())
    throw ParseError("missing array field 'brackets'");
  for (const auto& entry : j.at("brackets")) {
    if (!entry.is_object() || !entry.contains("i") || !entry.contains("j") ||
        !entry.contains("result"))
      throw ParseError("bracket entries need fields i, j, result");
    BracketEntry b;
    b.i = entry.at("i").get<int>();
    b.j = entry.at("j").get<int>();
    if (b.i < 0 || b.i >= n || b.j < 0 || b.j >= n)
      throw ParseError("bracket index out of range");
    const auto& res = entry.at("result");
    if (!res.is_array() || static_cast<int>(res.size()) != n)
      throw ParseError("bracket result must have length 'dimension'");
    b.result.resize(n);
    for (int k = 0; k < n; ++k) {
      if (!res.at(k).is_number()) throw ParseError("bracket result entries must be numbers");
      b.result(k) = res.at(k).get<double>();
    }
    spec.brackets.push_back(std::move(b));
  }

  if (!j.contains("derivation") || !j.at("derivation").is_array() ||
      static_cast<int>(j.at("derivation").size()) != n)
    throw ParseError("missing dim x dim field 'derivation'");
  spec.derivation.resize(n, n);
  for (int r = 0; r < n; ++r) {
    const auto& row = j.at("derivation").at(r);
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ParseError("derivation rows must have length 'dimension'");
    for (int c = 0; c < n; ++c) {
      if (!row.at(c).is_number()) throw ParseError("derivation entries must be numbers");
      spec.derivation(r, c) = row.at(c).get<double>();
    }
  }

  if (j.contains("tolerances")) {
    const auto& tb = j.at("tolerances");
    if (!tb.is_object()) throw ParseError("'tolerances' must be an object");
    spec.tolerances.jacobi = require_positive(tb, "jacobi", spec.tolerances.jacobi);
    spec.tolerances.leibniz = require_positive(tb, "leibniz", spec.tolerances.leibniz);
    spec.tolerances.realpart = require_positive(tb, "realpart", spec.tolerances.realpart);
    spec.tolerances.rank = require_positive(tb, "rank", spec.tolerances.rank);
    spec.tolerances.grading = require_positive(tb, "grading", spec.tolerances.grading);
  }
  return spec;
}

SystemSpec load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return parse_system_json(j);
}

nlohmann::json to_json(const SystemSpec& spec) {
  nlohmann::json j;
  j["dimension"] = spec.dimension;
  j["basis"] = spec.basis;
  auto brackets = nlohmann::json::array();
  for (const auto& b : spec.brackets) {
    nlohmann::json entry;
    entry["i"] = b.i;
    entry["j"] = b.j;
    entry["result"] = std::vector<double>(b.result.data(), b.result.data() + b.result.size());
    brackets.push_back(entry);
  }
  j["brackets"] = brackets;
  auto rows = nlohmann::json::array();
  for (int r = 0; r < spec.derivation.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (int c = 0; c < spec.derivation.cols(); ++c) row.push_back(spec.derivation(r, c));
    rows.push_back(row);
  }
  j["derivation"] = rows;
  j["tolerances"] = {{"jacobi", spec.tolerances.jacobi},
                     {"leibniz", spec.tolerances.leibniz},
                     {"realpart", spec.tolerances.realpart},
                     {"rank", spec.tolerances.rank},
                     {"grading", spec.tolerances.grading}};
  return j;
}

ValidatedSystem validate_system(const SystemSpec& spec) {
  auto algebra = std::make_shared<const LieAlgebra>(
      LieAlgebra::from_brackets(spec.dimension, spec.basis, spec.brackets));
  ValidationReport jacobi = validate_jacobi(*algebra, spec.tolerances.jacobi);
  if (!jacobi.pass) {
    if (jacobi.max_antisymmetry_residual > spec.tolerances.jacobi)
      throw JacobiViolation(
          "antisymmetry fails at constant (" +
              std::to_string(jacobi.worst_antisymmetry_entry[0]) + ", " +
              std::to_string(jacobi.worst_antisymmetry_entry[1]) + ", " +
              std::to_string(jacobi.worst_antisymmetry_entry[2]) + ") with residual " +
              std::to_string(jacobi.max_antisymmetry_residual),
          jacobi.worst_antisymmetry_entry, jacobi.max_antisymmetry_residual);
    throw JacobiViolation("Jacobi identity fails on triple (" +
                              std::to_string(jacobi.worst_jacobi_triple[0]) + ", " +
                              std::to_string(jacobi.worst_jacobi_triple[1]) + ", " +
                              std::to_string(jacobi.worst_jacobi_triple[2]) +
                              ") with residual " +
                              std::to_string(jacobi.max_jacobi_residual),
                          jacobi.worst_jacobi_triple, jacobi.max_jacobi_residual);
  }
  Derivation derivation =
      validate_leibniz(spec.derivation, algebra, spec.tolerances.leibniz);
  return ValidatedSystem{std::move(algebra), std::move(derivation), spec.tolerances,
                         std::move(jacobi)};
}

ValidatedSystem parse_system(const std::string& path) {
  return validate_system(load_system_file(path));
}

namespace {

void write_value(const nlohmann::json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // keys iterate sorted
        if (!first) out += ",\n";
        first = false;
        out += pad_in + nlohmann::json(it.key()).dump() + ": ";
        write_value(it.value(), out, indent, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ",\n";
        out += pad_in;
        write_value(j.at(i), out, indent, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
      out += buf;
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string write_json(const nlohmann::json& j, int indent) {
  std::string out;
  write_value(j, out, indent, 0);
  return out;
}

std::string content_digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 0; i < 16; ++i) out[i] = hex[(h >> (60 - 4 * i)) & 0xF];
  return out;
}

}  // namespace lieflow
