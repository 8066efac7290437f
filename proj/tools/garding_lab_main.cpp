// garding-lab: construct polynomial operators on symmetric matrices, compute
// their Garding eigenvalues, and run the verification suites.
//
//   garding-lab check --spec FILE [--suite NAME]... [--seed INT]
//                     [--samples INT] [--refine INT] [--out FILE]
//   garding-lab eval --spec FILE --matrix FILE
//   garding-lab eigen --spec FILE --matrix FILE [--direction FILE]
//   garding-lab restrict-diag --spec FILE [--h FILE]
//
// Exit codes: 0 success / all suites pass, 1 a suite or computation reports
// failure, 2 configuration or parse error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "garding/cli_runner.hpp"
#include "garding/garding_analysis.hpp"
#include "garding/majorization.hpp"
#include "garding/operator.hpp"
#include "garding/poly_core.hpp"
#include "garding/report.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw garding::parse_error("cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw garding::parse_error("cannot write file: " + path);
  }
  out << text;
}

// General (not necessarily symmetric) square matrix from the row-array
// format, used for the orthogonal conjugation matrix h.
garding::Mat square_matrix_from_json(const std::string& text,
                                     const std::string& what) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw garding::parse_error(what + ": JSON parse error: " + e.what());
  }
  if (!doc.is_array() || doc.empty()) {
    throw garding::parse_error(what + " must be a nonempty array of rows");
  }
  const int n = static_cast<int>(doc.size());
  garding::Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    if (!doc[i].is_array() || static_cast<int>(doc[i].size()) != n) {
      throw garding::parse_error(what + " rows must all have length n");
    }
    for (int j = 0; j < n; ++j) {
      if (!doc[i][j].is_number()) {
        throw garding::parse_error(what + " entries must be numbers");
      }
      m(i, j) = doc[i][j].get<double>();
    }
  }
  return m;
}

garding::JsonValue operator_info(const garding::OpPtr& op) {
  garding::JsonValue info = garding::JsonValue::object();
  info.set("name", garding::JsonValue::string(op->name()));
  info.set("n", garding::JsonValue::integer(op->n()));
  info.set("N", garding::JsonValue::integer(op->N()));
  return info;
}

int run_check(const std::string& spec_path,
              const std::vector<std::string>& suites, std::uint64_t seed,
              int samples, int refine, const std::string& out_path) {
  garding::RunConfig config;
  config.spec_text = read_file(spec_path);
  config.suites = suites.empty() ? std::vector<std::string>{"all"} : suites;
  config.seed = seed;
  config.samples = samples;
  config.refine_iters = refine;
  garding::RunResult result = garding::run(config);
  if (out_path.empty()) {
    std::cout << result.report_json;
  } else {
    write_text(out_path, result.report_json);
  }
  return result.exit_code;
}

int run_eval(const std::string& spec_path, const std::string& matrix_path) {
  garding::OpPtr op = garding::parse_spec(read_file(spec_path));
  garding::SymMatrix A = garding::matrix_from_json_text(read_file(matrix_path));
  garding::JsonValue doc = garding::JsonValue::object();
  doc.set("operator", operator_info(op));
  doc.set("value", garding::JsonValue::number(op->evaluate(A)));
  std::cout << doc.dump();
  return 0;
}

int run_eigen(const std::string& spec_path, const std::string& matrix_path,
              const std::string& direction_path) {
  garding::OpPtr op = garding::parse_spec(read_file(spec_path));
  garding::SymMatrix A = garding::matrix_from_json_text(read_file(matrix_path));
  garding::SymMatrix B =
      direction_path.empty()
          ? garding::SymMatrix::identity(op->n())
          : garding::matrix_from_json_text(read_file(direction_path));
  garding::JsonValue doc = garding::JsonValue::object();
  doc.set("operator", operator_info(op));
  doc.set("direction", garding::JsonValue::string(
                           direction_path.empty() ? "identity" : "file"));
  try {
    garding::EigenList ev = garding::garding_eigenvalues(op, B, A);
    garding::JsonValue vals = garding::JsonValue::array();
    for (double v : ev.values) vals.push(garding::JsonValue::number(v));
    doc.set("eigenvalues", std::move(vals));
    doc.set("realness_residual",
            garding::JsonValue::number(ev.realness_residual));
  } catch (const garding::non_real_spectrum& e) {
    doc.set("error", garding::JsonValue::string(e.what()));
    doc.set("imag_residual", garding::JsonValue::number(e.residual));
    std::cout << doc.dump();
    return 1;
  }
  std::cout << doc.dump();
  return 0;
}

int run_restrict_diag(const std::string& spec_path,
                      const std::string& h_path) {
  garding::OpPtr op = garding::parse_spec(read_file(spec_path));
  if (!h_path.empty()) {
    garding::Mat h = square_matrix_from_json(read_file(h_path), "--h matrix");
    op = garding::GardingOperator::conjugate(op, h);
  }
  garding::SparsePoly p = garding::diagonal_restriction(op);
  std::cout << garding::poly_to_json_text(p) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Garding operator laboratory: construction, eigenvalues, and "
               "verification suites for polynomial operators on symmetric "
               "matrices"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string matrix_path;
  std::string direction_path;
  std::string h_path;
  std::string out_path;
  std::vector<std::string> suites;
  std::uint64_t seed = 42;
  int samples = 2000;
  int refine = 500;

  CLI::App* check = app.add_subcommand("check", "Run verification suites");
  check->add_option("--spec", spec_path, "Operator construction tree (JSON)")
      ->required();
  check->add_option("--suite", suites,
                    "Suite name (repeatable); default: all");
  check->add_option("--seed", seed, "Base seed for all sampling")
      ->envname("GARDING_LAB_SEED");
  check->add_option("--samples", samples, "Sample count for sampled suites");
  check->add_option("--refine", refine,
                    "Refinement iterations for the majorization search");
  check->add_option("--out", out_path, "Write the report here (else stdout)");

  CLI::App* eval = app.add_subcommand("eval", "Evaluate the operator");
  eval->add_option("--spec", spec_path, "Operator construction tree (JSON)")
      ->required();
  eval->add_option("--matrix", matrix_path, "Symmetric matrix (JSON rows)")
      ->required();

  CLI::App* eigen = app.add_subcommand("eigen", "Garding eigenvalues");
  eigen->add_option("--spec", spec_path, "Operator construction tree (JSON)")
      ->required();
  eigen->add_option("--matrix", matrix_path, "Symmetric matrix (JSON rows)")
      ->required();
  eigen->add_option("--direction", direction_path,
                    "Direction matrix B (default: identity)");

  CLI::App* restrict_diag =
      app.add_subcommand("restrict-diag", "Diagonal restriction polynomial");
  restrict_diag->set_help_flag("--help", "Print help");  // frees -h for --h
  restrict_diag
      ->add_option("--spec", spec_path, "Operator construction tree (JSON)")
      ->required();
  restrict_diag->add_option(
      "--h", h_path, "Orthogonal conjugation matrix (JSON rows, optional)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help / --version
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (check->parsed()) {
      return run_check(spec_path, suites, seed, samples, refine, out_path);
    }
    if (eval->parsed()) {
      return run_eval(spec_path, matrix_path);
    }
    if (eigen->parsed()) {
      return run_eigen(spec_path, matrix_path, direction_path);
    }
    if (restrict_diag->parsed()) {
      return run_restrict_diag(spec_path, h_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
