#include "garding/cli_runner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "garding/report.hpp"

namespace garding {

namespace {

using nlohmann::json;

SparsePoly poly_from_json_terms(int nvars, const json& terms) {
  if (!terms.is_array()) {
    throw parse_error("\"terms\" must be an array of {alpha, coeff}");
  }
  std::vector<std::pair<std::vector<int>, double>> list;
  for (const auto& t : terms) {
    if (!t.contains("alpha") || !t.contains("coeff")) {
      throw parse_error("each term needs \"alpha\" and \"coeff\"");
    }
    list.emplace_back(t["alpha"].get<std::vector<int>>(),
                      t["coeff"].get<double>());
  }
  return SparsePoly(nvars, list);
}

Mat matrix_from_json(const json& rows, const std::string& what) {
  if (!rows.is_array() || rows.empty()) {
    throw parse_error(what + " must be a nonempty array of rows");
  }
  const int r = static_cast<int>(rows.size());
  const int c = static_cast<int>(rows[0].size());
  Mat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != c) {
      throw parse_error(what + " has ragged rows");
    }
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

OpPtr build_operator(const json& node, const std::string& path) {
  if (!node.is_object() || !node.contains("op")) {
    throw parse_error("expected an object with an \"op\" field at " + path);
  }
  const std::string op = node["op"].get<std::string>();
  const auto require = [&](const char* field) -> const json& {
    if (!node.contains(field)) {
      throw parse_error("op \"" + op + "\" at " + path +
                        " is missing field \"" + field + "\"");
    }
    return node[field];
  };
  const auto child = [&](size_t count) {
    const json& args = require("args");
    if (!args.is_array() || args.size() != count) {
      std::ostringstream msg;
      msg << "op \"" << op << "\" at " << path << " needs exactly " << count
          << " args";
      throw parse_error(msg.str());
    }
    std::vector<OpPtr> out;
    for (size_t i = 0; i < count; ++i) {
      out.push_back(
          build_operator(args[i], path + "/args[" + std::to_string(i) + "]"));
    }
    return out;
  };

  if (op == "det") return GardingOperator::det(require("n").get<int>());
  if (op == "sigma_k") {
    return GardingOperator::sigma(require("n").get<int>(),
                                  require("k").get<int>());
  }
  if (op == "ma_lag") return GardingOperator::ma_lag(require("n").get<int>());
  if (op == "quad_c") return GardingOperator::quad_c(require("c").get<double>());
  if (op == "norm2_det") {
    return GardingOperator::norm2_det(require("n").get<int>());
  }
  if (op == "symbolic") {
    const int n = require("nvars_n").get<int>();
    return GardingOperator::symbolic(
        n, poly_from_json_terms(entry_space_dim(n), require("terms")));
  }
  if (op == "product") {
    auto c = child(2);
    return GardingOperator::product(c[0], c[1]);
  }
  if (op == "radial_derivative") {
    return GardingOperator::radial_derivative(child(1)[0]);
  }
  if (op == "conjugate") {
    const Mat h = matrix_from_json(require("h"), "\"h\" at " + path);
    return GardingOperator::conjugate(child(1)[0], h);
  }
  if (op == "linear_transform") {
    const json& Lnode = require("L");
    if (!Lnode.is_object() || !Lnode.contains("action")) {
      throw parse_error("\"L\" at " + path + " must be {\"action\": [[...]]}");
    }
    auto inner = child(1)[0];
    const Mat action =
        matrix_from_json(Lnode["action"], "\"L.action\" at " + path);
    if (action.rows() != action.cols() ||
        action.rows() != entry_space_dim(inner->n())) {
      throw parse_error("\"L.action\" at " + path +
                        " must be square of size n(n+1)/2");
    }
    return GardingOperator::linear_transform(inner,
                                             LinearMap(inner->n(), action));
  }
  throw parse_error("unknown op name \"" + op + "\" at " + path);
}

CheckReport central_suite(const OpPtr& g) {
  const CentralityResult res = check_central(g);
  CheckReport rep;
  rep.suite = "central";
  rep.pass = res.central;
  rep.margin("k", res.k);
  rep.margin("offdiag_residual", res.offdiag_residual);
  rep.margin("diag_residual", res.diag_residual);
  rep.margin("euler_residual", res.euler_residual);
  rep.margin("laplacian_available", res.laplacian_available ? 1.0 : 0.0);
  if (res.laplacian_available) {
    rep.margin("laplacian_tracefree_max", res.laplacian_tracefree_max);
    rep.margin("laplacian_ratio_spread", res.laplacian_ratio_spread);
  } else {
    rep.note("Laplacian form unavailable (no real I-eigenvalues)");
  }
  if (!res.central) {
    rep.witness = res.gradient_at_I.mat();
    rep.note("gradient at I is not a positive multiple of I");
  }
  return rep;
}

CheckReport majorization_suite(const OpPtr& g, int samples, int refine_iters,
                               std::uint64_t seed) {
  const MajorizationReport res =
      check_majorization(g, samples, refine_iters, seed);
  CheckReport rep;
  rep.suite = "majorization";
  rep.pass = res.pass;
  rep.margin("min_ratio", res.min_ratio);
  rep.margin("gamma", res.gamma);
  rep.margin("samples_used", res.samples_used);
  rep.margin("refinement_steps", res.refinement_steps);
  rep.margin("sharp_at_identity", res.sharp_at_identity ? 1.0 : 0.0);
  rep.witness = res.argmin.mat();
  if (res.pass) {
    rep.note("numerically certified at " + std::to_string(res.samples_used) +
             " samples, min margin " + format_number(res.min_ratio - 1.0));
  } else {
    rep.note("majorization ratio below 1 at the witness matrix");
  }
  return rep;
}

CheckReport interlace_suite(const OpPtr& g, std::uint64_t seed) {
  CheckReport rep;
  rep.suite = "interlace";
  if (g->N() < 2) {
    rep.pass = true;
    rep.note("not applicable (degree 1)");
    return rep;
  }
  double min_gap = std::numeric_limits<double>::infinity();
  const int kSamples = 200;
  for (int i = 0; i < kSamples; ++i) {
    const SymMatrix A = random_symmetric(g->n(), Rng::derive(seed, 100, i));
    const CheckReport one = interlace_check(g, A);
    for (const auto& [name, value] : one.margins) {
      if (name == "min_interlace_gap") min_gap = std::min(min_gap, value);
    }
    if (!one.pass) {
      CheckReport fail = one;
      fail.suite = "interlace";
      fail.margin("samples_checked", i);
      return fail;
    }
  }
  rep.pass = true;
  rep.margin("samples_checked", kSamples);
  rep.margin("min_interlace_gap", min_gap);
  return rep;
}

CheckReport run_suite(const std::string& name, const OpPtr& g,
                      const RunConfig& config) {
  const std::uint64_t seed = config.seed;
  if (name == "hyperbolic") {
    return check_hyperbolic(g, SymMatrix::identity(g->n()), config.samples,
                            seed);
  }
  if (name == "dirichlet") return check_dirichlet(g, config.samples, seed);
  if (name == "central") return central_suite(g);
  if (name == "majorization") {
    return majorization_suite(g, config.samples, config.refine_iters, seed);
  }
  if (name == "gradient-det") return check_prop16_consistency(g, 200, seed);
  if (name == "interlace") return interlace_suite(g, seed);
  if (name == "diag-coeffs") return diag_coefficient_check(g, 20, seed);
  if (name == "lemma22") return lemma22_check(g, 50, seed);
  if (name == "basic-lemma") {
    return basic_lemma_check(diagonal_restriction(g), config.samples, seed);
  }
  throw parse_error("unknown suite \"" + name + "\"");
}

}  // namespace

const std::vector<std::string>& suite_order() {
  static const std::vector<std::string> order = {
      "hyperbolic", "dirichlet",   "central", "majorization", "gradient-det",
      "interlace",  "diag-coeffs", "lemma22", "basic-lemma"};
  return order;
}

OpPtr parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("operator spec: ") + e.what());
  }
  return build_operator(doc, "$");
}

RunResult run(const RunConfig& config) {
  if (config.suites.empty()) throw parse_error("no suites selected");
  if (config.samples < 1) throw parse_error("samples must be >= 1");
  if (config.refine_iters < 0) throw parse_error("refine_iters must be >= 0");

  std::vector<std::string> suites;
  for (const std::string& s : config.suites) {
    if (s == "all") {
      for (const std::string& o : suite_order()) {
        if (std::find(suites.begin(), suites.end(), o) == suites.end()) {
          suites.push_back(o);
        }
      }
      continue;
    }
    if (std::find(suite_order().begin(), suite_order().end(), s) ==
        suite_order().end()) {
      throw parse_error("unknown suite \"" + s + "\"");
    }
    if (std::find(suites.begin(), suites.end(), s) == suites.end()) {
      suites.push_back(s);
    }
  }

  const OpPtr g = parse_spec(config.spec_text);

  JsonValue doc = JsonValue::object();
  {
    JsonValue opinfo = JsonValue::object();
    opinfo.set("name", JsonValue::string(g->name()));
    opinfo.set("n", JsonValue::integer(g->n()));
    opinfo.set("N", JsonValue::integer(g->N()));
    JsonValue flags = JsonValue::object();
    flags.set("garding_dirichlet",
              JsonValue::boolean(g->flags().garding_dirichlet));
    flags.set("i_central", JsonValue::boolean(g->flags().i_central));
    JsonValue notes = JsonValue::array();
    for (const std::string& note : g->flags().notes) {
      notes.push(JsonValue::string(note));
    }
    flags.set("notes", std::move(notes));
    opinfo.set("flags", std::move(flags));
    doc.set("operator", std::move(opinfo));
  }
  doc.set("seed", JsonValue::integer(static_cast<long long>(config.seed)));
  doc.set("samples", JsonValue::integer(config.samples));
  doc.set("refine_iters", JsonValue::integer(config.refine_iters));

  bool all_pass = true;
  JsonValue suite_array = JsonValue::array();
  for (const std::string& name : suites) {
    CheckReport rep;
    try {
      rep = run_suite(name, g, config);
    } catch (const std::exception& e) {
      rep = CheckReport{};
      rep.suite = name;
      rep.pass = false;
      rep.note(std::string("suite aborted: ") + e.what());
    }
    all_pass = all_pass && rep.pass;
    suite_array.push(JsonValue::from_report(rep));
  }
  doc.set("suites", std::move(suite_array));

  {
    JsonValue versions = JsonValue::object();
    versions.set("garding_lab", JsonValue::string("0.1.0"));
    versions.set("report_format", JsonValue::integer(1));
    std::ostringstream eig;
    eig << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "."
        << EIGEN_MINOR_VERSION;
    versions.set("eigen", JsonValue::string(eig.str()));
    doc.set("versions", std::move(versions));
  }

  RunResult result;
  result.all_pass = all_pass;
  result.exit_code = all_pass ? 0 : 1;
  result.report_json = doc.dump();
  return result;
}

}  // namespace garding
