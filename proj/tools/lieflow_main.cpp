#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "lieflow/conjugacy.hpp"
#include "lieflow/flow.hpp"
#include "lieflow/group.hpp"
#include "lieflow/lie_algebra.hpp"
#include "lieflow/spectral.hpp"
#include "lieflow/stability.hpp"
#include "lieflow/system_io.hpp"

namespace {

using nlohmann::json;

struct GlobalOptions {
  bool timing = false;
  bool text = false;
};

json file_ref(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lieflow::ParseError("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return json{{"path", path}, {"digest", lieflow::content_digest(buffer.str())}};
}

json complex_list(const std::vector<std::complex<double>>& values) {
  auto arr = json::array();
  for (const auto& v : values) arr.push_back(json{{"re", v.real()}, {"im", v.imag()}});
  return arr;
}

json matrix_json(const Eigen::MatrixXd& m) {
  auto rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    auto row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  auto arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vector_from(const std::vector<double>& values) {
  Eigen::VectorXd v(static_cast<int>(values.size()));
  for (size_t i = 0; i < values.size(); ++i) v(static_cast<int>(i)) = values[i];
  return v;
}

void emit(const json& report, const GlobalOptions& opts,
          std::chrono::steady_clock::time_point started) {
  json out = report;
  out["version"] = lieflow::kToolVersion;
  if (opts.timing) {
    auto elapsed = std::chrono::duration<double, std::milli>(
        std::chrono::steady_clock::now() - started);
    out["timing_ms"] = elapsed.count();
  }
  std::cout << lieflow::write_json(out) << "\n";
}

int emit_error(const std::string& command, const std::string& type,
               const std::string& message, const json& data, int code,
               const GlobalOptions& opts,
               std::chrono::steady_clock::time_point started) {
  json report{{"command", command},
              {"error", json{{"type", type}, {"message", message}, {"data", data}}}};
  emit(report, opts, started);
  std::cerr << "error (" << type << "): " << message << "\n";
  return code;
}

json jacobi_json(const lieflow::ValidationReport& r) {
  return json{{"pass", r.pass},
              {"tol", r.tol},
              {"max_jacobi_residual", r.max_jacobi_residual},
              {"worst_jacobi_triple", r.worst_jacobi_triple},
              {"max_antisymmetry_residual", r.max_antisymmetry_residual},
              {"worst_antisymmetry_entry", r.worst_antisymmetry_entry}};
}

json leibniz_json(const lieflow::LeibnizReport& r) {
  return json{{"pass", r.pass},
              {"tol", r.tol},
              {"max_residual", r.max_residual},
              {"worst_pair", json::array({r.worst_i, r.worst_j})}};
}

int run_check(const std::string& path, const GlobalOptions& opts,
              std::chrono::steady_clock::time_point started) {
  lieflow::SystemSpec spec = lieflow::load_system_file(path);
  auto algebra = lieflow::LieAlgebra::from_brackets(spec.dimension, spec.basis, spec.brackets);
  auto jacobi = lieflow::validate_jacobi(algebra, spec.tolerances.jacobi);
  auto leibniz = lieflow::leibniz_report(spec.derivation, algebra, spec.tolerances.leibniz);
  bool pass = jacobi.pass && leibniz.pass;
  json report{{"command", "check"},
              {"inputs", json::array({file_ref(path)})},
              {"result", json{{"pass", pass},
                              {"jacobi", jacobi_json(jacobi)},
                              {"leibniz", leibniz_json(leibniz)}}}};
  emit(report, opts, started);
  if (opts.text)
    std::cerr << "check: " << (pass ? "pass" : "FAIL") << " (jacobi residual "
              << jacobi.max_jacobi_residual << ", antisymmetry "
              << jacobi.max_antisymmetry_residual << ", leibniz "
              << leibniz.max_residual << ")\n";
  return pass ? 0 : 1;
}

int run_decompose(const std::string& path, bool full, const GlobalOptions& opts,
                  std::chrono::steady_clock::time_point started) {
  lieflow::ValidatedSystem sys = lieflow::parse_system(path);
  auto sd = lieflow::spectral_decompose(sys.derivation, sys.tolerances.realpart);
  auto grading = lieflow::grading_check(sd, *sys.algebra, sys.tolerances.grading);
  auto series = lieflow::lower_central_series(*sys.algebra, sys.tolerances.rank);

  auto layers = json::array();
  for (const auto& layer : sd.layers)
    layers.push_back(json{{"real_part", layer.real_part},
                          {"dim", layer.dimension()},
                          {"eigenvalues", complex_list(layer.eigenvalues)}});
  auto grading_pairs = json::array();
  for (const auto& p : grading.pairs)
    grading_pairs.push_back(json{{"lambda_a", p.lambda_a},
                                 {"lambda_b", p.lambda_b},
                                 {"target_exists", p.target_exists},
                                 {"residual", p.residual}});
  json result{
      {"dims", json{{"plus", sd.dim_plus()}, {"zero", sd.dim_zero()}, {"minus", sd.dim_minus()}}},
      {"eigenvalues", complex_list(sd.eigenvalues)},
      {"layers", layers},
      {"hyperbolic", lieflow::is_hyperbolic(sd)},
      {"nilpotent", json{{"is_nilpotent", series.nilpotent()},
                         {"step", series.nilpotent() ? json(*series.step) : json()},
                         {"series_dims", series.term_dims()}}},
      {"grading", json{{"pass", grading.pass},
                       {"max_residual", grading.max_residual},
                       {"pairs", grading_pairs}}}};
  if (full) {
    result["plus_basis"] = matrix_json(sd.plus_basis);
    result["zero_basis"] = matrix_json(sd.zero_basis);
    result["minus_basis"] = matrix_json(sd.minus_basis);
    result["proj_plus"] = matrix_json(sd.proj_plus);
    result["proj_zero"] = matrix_json(sd.proj_zero);
    result["proj_minus"] = matrix_json(sd.proj_minus);
  }
  json report{{"command", "decompose"},
              {"inputs", json::array({file_ref(path)})},
              {"result", result}};
  emit(report, opts, started);
  if (opts.text)
    std::cerr << "decompose: (d+, d0, d-) = (" << sd.dim_plus() << ", " << sd.dim_zero()
              << ", " << sd.dim_minus() << "), "
              << (lieflow::is_hyperbolic(sd) ? "hyperbolic" : "not hyperbolic") << "\n";
  return 0;
}

int run_classify(const std::string& path, const GlobalOptions& opts,
                 std::chrono::steady_clock::time_point started) {
  lieflow::ValidatedSystem sys = lieflow::parse_system(path);
  auto sd = lieflow::spectral_decompose(sys.derivation, sys.tolerances.realpart);
  auto cert = lieflow::classify_identity_stability(sys.derivation, sd);
  json result{{"verdict", lieflow::to_string(cert.verdict)},
              {"dims", json{{"plus", cert.dim_plus},
                            {"zero", cert.dim_zero},
                            {"minus", cert.dim_minus}}},
              {"spectrum", complex_list(cert.spectrum)},
              {"zero_block_semisimple", cert.zero_block_semisimple},
              {"algebra_nilpotent", cert.algebra_nilpotent}};
  if (cert.contraction)
    result["contraction"] = json{{"c", cert.contraction->c}, {"mu", cert.contraction->mu}};
  json report{{"command", "classify"},
              {"inputs", json::array({file_ref(path)})},
              {"result", result}};
  emit(report, opts, started);
  if (opts.text) std::cerr << "classify: " << lieflow::to_string(cert.verdict) << "\n";
  return 0;
}

int run_lyapunov(const std::string& path, const std::vector<double>& vec,
                 const std::vector<double>& grid, const GlobalOptions& opts,
                 std::chrono::steady_clock::time_point started) {
  lieflow::ValidatedSystem sys = lieflow::parse_system(path);
  lieflow::LinearFlow lf(sys.derivation);
  auto result = lieflow::lyapunov_estimate(lf, vector_from(vec), grid);
  auto curve = json::array();
  for (const auto& [t, value] : result.estimate_curve)
    curve.push_back(json::array({t, value}));
  json report{{"command", "lyapunov"},
              {"inputs", json::array({file_ref(path)})},
              {"result", json{{"exact", result.exact},
                              {"curve", curve},
                              {"bound_constant", result.bound_constant},
                              {"truncated", result.truncated},
                              {"vector", vector_json(result.v)}}}};
  emit(report, opts, started);
  if (opts.text) std::cerr << "lyapunov: exact exponent " << result.exact << "\n";
  return 0;
}

int run_flow(const std::string& path, const std::vector<double>& point, double time,
             const GlobalOptions& opts, std::chrono::steady_clock::time_point started) {
  lieflow::ValidatedSystem sys = lieflow::parse_system(path);
  auto group = lieflow::NilpotentGroup::create(sys.algebra);
  lieflow::LinearFlow lf(sys.derivation);
  auto g = group->element(vector_from(point));
  auto image = lieflow::flow_group(lf, time, g);
  json report{{"command", "flow"},
              {"inputs", json::array({file_ref(path)})},
              {"result", json{{"point", vector_json(g.coords)},
                              {"time", time},
                              {"image", vector_json(image.coords)},
                              {"gauge", lieflow::gauge(image)}}}};
  emit(report, opts, started);
  if (opts.text) std::cerr << "flow: gauge " << lieflow::gauge(image) << "\n";
  return 0;
}

lieflow::GroupConjugacy build_conjugacy(const std::string& path_a,
                                        const std::string& path_b) {
  lieflow::ValidatedSystem a = lieflow::parse_system(path_a);
  lieflow::ValidatedSystem b = lieflow::parse_system(path_b);
  auto src = lieflow::HyperbolicSystem::analyze(a.algebra, a.derivation, a.tolerances.realpart);
  auto dst = lieflow::HyperbolicSystem::analyze(b.algebra, b.derivation, b.tolerances.realpart);
  return lieflow::GroupConjugacy::build(std::move(src), std::move(dst));
}

int run_conjugacy_build(const std::string& path_a, const std::string& path_b,
                        const GlobalOptions& opts,
                        std::chrono::steady_clock::time_point started) {
  auto gc = build_conjugacy(path_a, path_b);
  double identity_gauge = lieflow::gauge(gc.map(gc.source().group->identity()));
  json report{
      {"command", "conjugacy build"},
      {"inputs", json::array({file_ref(path_a), file_ref(path_b)})},
      {"result",
       json{{"built", true},
            {"dims", json{{"source", json{{"plus", gc.source().sd.dim_plus()},
                                          {"minus", gc.source().sd.dim_minus()}}},
                          {"target", json{{"plus", gc.target().sd.dim_plus()},
                                          {"minus", gc.target().sd.dim_minus()}}}}},
            {"identity_image_gauge", identity_gauge}}}};
  emit(report, opts, started);
  if (opts.text) std::cerr << "conjugacy build: ok\n";
  return 0;
}

int run_conjugacy_verify(const std::string& path_a, const std::string& path_b, int samples,
                         const std::vector<double>& trange, double tol, std::uint64_t seed,
                         double scale, const GlobalOptions& opts,
                         std::chrono::steady_clock::time_point started) {
  auto gc = build_conjugacy(path_a, path_b);
  auto vr = lieflow::verify_conjugacy(gc, samples, trange.at(0), trange.at(1), tol, seed,
                                      scale);
  json report{{"command", "conjugacy verify"},
              {"inputs", json::array({file_ref(path_a), file_ref(path_b)})},
              {"result", json{{"pass", vr.pass},
                              {"samples", vr.samples},
                              {"seed", vr.seed},
                              {"t_range", json::array({vr.t_min, vr.t_max})},
                              {"tol", vr.tol},
                              {"coordinate_scale", vr.coordinate_scale},
                              {"max_residual", vr.max_residual},
                              {"median_residual", vr.median_residual},
                              {"max_roundtrip", vr.max_roundtrip}}}};
  emit(report, opts, started);
  if (opts.text)
    std::cerr << "conjugacy verify: " << (vr.pass ? "pass" : "FAIL") << " (max residual "
              << vr.max_residual << ")\n";
  return vr.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  auto started = std::chrono::steady_clock::now();
  GlobalOptions opts;

  CLI::App app{"analysis of linear flows induced by derivations on Lie algebras"};
  app.require_subcommand(1);
  app.add_flag("--timing", opts.timing, "include wall-clock timing in the report");
  app.add_flag("--text", opts.text, "print a human-readable summary on stderr");

  std::string path, path_b;
  bool full = false;
  std::vector<double> vec, point, trange{-5.0, 5.0};
  std::vector<double> grid{1, 2, 5, 10, 20, 50, 100, 200};
  double time = 1.0, tol = 1e-6, scale = 1.0;
  int samples = 100;
  std::uint64_t seed = 0;

  auto* check = app.add_subcommand("check", "validate the bracket and derivation axioms");
  check->add_option("system", path, "system JSON file")->required();

  auto* decompose = app.add_subcommand("decompose", "stable/center/unstable decomposition");
  decompose->add_option("system", path, "system JSON file")->required();
  decompose->add_flag("--full", full, "include bases and projections in the report");

  auto* classify = app.add_subcommand("classify", "Lyapunov stability of the identity");
  classify->add_option("system", path, "system JSON file")->required();

  auto* lyapunov = app.add_subcommand("lyapunov", "Lyapunov exponent of a direction");
  lyapunov->add_option("system", path, "system JSON file")->required();
  lyapunov->add_option("--vector", vec, "direction coordinates")
      ->required()
      ->delimiter(',');
  lyapunov->add_option("--tgrid", grid, "sampling horizons")->delimiter(',');

  auto* flow = app.add_subcommand("flow", "group flow of a point in exponential coordinates");
  flow->add_option("system", path, "system JSON file")->required();
  flow->add_option("--point", point, "exponential coordinates")->required()->delimiter(',');
  flow->add_option("--time", time, "flow time")->required();

  auto* conjugacy = app.add_subcommand("conjugacy", "topological conjugacy of two systems");
  conjugacy->require_subcommand(1);
  auto* cbuild = conjugacy->add_subcommand("build", "construct the conjugacy");
  cbuild->add_option("source", path, "source system JSON file")->required();
  cbuild->add_option("target", path_b, "target system JSON file")->required();
  auto* cverify = conjugacy->add_subcommand("verify", "sample the conjugacy identity");
  cverify->add_option("source", path, "source system JSON file")->required();
  cverify->add_option("target", path_b, "target system JSON file")->required();
  cverify->add_option("--samples", samples, "number of (g, t) samples");
  cverify->add_option("--trange", trange, "time range: low high")->expected(2);
  cverify->add_option("--tol", tol, "max residual tolerance");
  cverify->add_option("--seed", seed, "sampling seed (echoed in the report)");
  cverify->add_option("--scale", scale, "coordinate scale of the samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cout << lieflow::write_json(
                     nlohmann::json{{"error", nlohmann::json{{"type", "UsageError"},
                                                             {"message", e.what()}}}})
              << "\n";
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  std::string command =
      app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();
  try {
    if (check->parsed()) return run_check(path, opts, started);
    if (decompose->parsed()) return run_decompose(path, full, opts, started);
    if (classify->parsed()) return run_classify(path, opts, started);
    if (lyapunov->parsed()) return run_lyapunov(path, vec, grid, opts, started);
    if (flow->parsed()) return run_flow(path, point, time, opts, started);
    if (cbuild->parsed()) return run_conjugacy_build(path, path_b, opts, started);
    if (cverify->parsed())
      return run_conjugacy_verify(path, path_b, samples, trange, tol, seed, scale, opts,
                                  started);
    std::cerr << "no command\n";
    return 2;
  } catch (const lieflow::ParseError& e) {
    return emit_error(command, "ParseError", e.what(), {}, 2, opts, started);
  } catch (const lieflow::InputError& e) {
    return emit_error(command, "InputError", e.what(), {}, 2, opts, started);
  } catch (const lieflow::JacobiViolation& e) {
    return emit_error(command, "JacobiViolation", e.what(),
                      {{"indices", e.indices}, {"residual", e.residual}}, 1, opts, started);
  } catch (const lieflow::LeibnizViolation& e) {
    return emit_error(command, "LeibnizViolation", e.what(),
                      {{"pair", nlohmann::json::array({e.i, e.j})}, {"residual", e.residual}},
                      1, opts, started);
  } catch (const lieflow::DimensionMismatch& e) {
    return emit_error(command, "DimensionMismatch", e.what(),
                      {{"source", nlohmann::json::array({e.source_plus, e.source_minus})},
                       {"target", nlohmann::json::array({e.target_plus, e.target_minus})}},
                      1, opts, started);
  } catch (const lieflow::ClusterAmbiguity& e) {
    return emit_error(command, "ClusterAmbiguity", e.what(), {{"gap", e.gap}}, 1, opts,
                      started);
  } catch (const lieflow::NotHyperbolic& e) {
    return emit_error(command, "NotHyperbolic", e.what(), {}, 1, opts, started);
  } catch (const lieflow::NotNilpotent& e) {
    return emit_error(command, "NotNilpotent", e.what(), {}, 1, opts, started);
  } catch (const lieflow::NotContracting& e) {
    return emit_error(command, "NotContracting", e.what(),
                      {{"spectral_abscissa", e.spectral_abscissa}}, 1, opts, started);
  } catch (const lieflow::StepTooLarge& e) {
    return emit_error(command, "StepTooLarge", e.what(), {{"step", e.step}}, 1, opts,
                      started);
  } catch (const lieflow::OverflowError& e) {
    return emit_error(command, "OverflowError", e.what(), {}, 1, opts, started);
  } catch (const lieflow::Error& e) {
    return emit_error(command, "Error", e.what(), {}, 1, opts, started);
  }
}
