// Acceptance gate for the operator lab: eight criteria, one PASS/FAIL line
// each, exit 0 iff all pass. argv[1] names the directory holding the golden
// reports used by the determinism criterion.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "garding/cli_runner.hpp"

using namespace garding;

namespace {

struct CatalogEntry {
  OpPtr op;
  bool certified;  // garding_dirichlet and i_central both set
};

OpPtr trace_shift_det3() {
  const LinearMap L = LinearMap::from_action_on_matrices(
      3, [](const SymMatrix& A) {
        return SymMatrix(A.mat() + A.mat().trace() * Mat::Identity(3, 3));
      });
  return GardingOperator::linear_transform(GardingOperator::det(3), L);
}

std::vector<CatalogEntry> catalog() {
  std::vector<OpPtr> ops = {
      GardingOperator::det(2),
      GardingOperator::det(3),
      GardingOperator::det(4),
      GardingOperator::sigma(3, 2),
      GardingOperator::sigma(4, 2),
      GardingOperator::sigma(4, 3),
      GardingOperator::ma_lag(4),
      GardingOperator::ma_lag(6),
      GardingOperator::quad_c(0.0),
      GardingOperator::quad_c(0.5),
      GardingOperator::quad_c(0.9),
      GardingOperator::norm2_det(3),
      trace_shift_det3(),
      GardingOperator::product(GardingOperator::sigma(3, 2),
                               GardingOperator::det(3)),
      GardingOperator::radial_derivative(GardingOperator::det(4)),
  };
  std::vector<CatalogEntry> out;
  for (OpPtr& g : ops) {
    const bool cert = g->flags().garding_dirichlet && g->flags().i_central;
    out.push_back({std::move(g), cert});
  }
  return out;
}

double margin_of(const CheckReport& rep, const std::string& name,
                 double fallback) {
  for (const auto& [key, value] : rep.margins) {
    if (key == name) return value;
  }
  return fallback;
}

bool has_note(const CheckReport& rep, const std::string& needle) {
  for (const std::string& s : rep.notes) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Gate {
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  bool pass() const { return failures.empty(); }
};

// --- criterion 1: determinant majorization across the catalog -------------

Gate criterion_majorization(const std::vector<CatalogEntry>& cat) {
  Gate gate;
  for (const CatalogEntry& e : cat) {
    const MajorizationReport rep = check_majorization(e.op, 2000, 500, 42);
    std::ostringstream tag;
    tag << e.op->name() << ": min_ratio " << rep.min_ratio;
    gate.require(rep.pass && rep.min_ratio >= 1.0 - 1e-6, tag.str());
    const double at_identity = ratio(e.op, SymMatrix::identity(e.op->n()));
    gate.require(std::abs(at_identity - 1.0) <= 1e-12,
                 e.op->name() + ": ratio at I not sharp");
  }
  return gate;
}

// --- criterion 2: gradient-determinant bound at interior cone points ------

Gate criterion_gradient_det(const std::vector<CatalogEntry>& cat) {
  Gate gate;
  int idx = 0;
  for (const CatalogEntry& e : cat) {
    ++idx;
    if (!e.certified) continue;
    const double spreads[3] = {1.0, 2.0, 3.0};
    for (int j = 0; j < 200; ++j) {
      const SymMatrix B = random_spd(
          e.op->n(), Rng::derive(42, 210 + idx, j), spreads[j % 3]);
      try {
        const GradientDetBound bound = gradient_det_bound(e.op, B);
        if (!bound.pass) {
          std::ostringstream tag;
          tag << e.op->name() << ": det M / gamma = "
              << bound.det_value / bound.gamma << " at point " << j;
          gate.require(false, tag.str());
          break;
        }
        if (e.op->kind() == GardingOperator::Kind::det &&
            std::abs(bound.det_value - bound.gamma) > 1e-8) {
          std::ostringstream tag;
          tag << e.op->name() << ": closed-form equality off by "
              << bound.det_value - bound.gamma;
          gate.require(false, tag.str());
          break;
        }
      } catch (const std::exception& ex) {
        gate.require(false, e.op->name() + ": " + ex.what());
        break;
      }
    }
  }
  return gate;
}

// --- criterion 3: centrality constants ------------------------------------

Gate criterion_centrality() {
  Gate gate;
  const auto binom = [](int a, int b) {
    double r = 1.0;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  const std::vector<std::pair<int, int>> sigmas = {{3, 2}, {4, 2}, {4, 3}};
  for (const auto& [n, k] : sigmas) {
    const CentralityResult res = check_central(GardingOperator::sigma(n, k));
    const double want = binom(n - 1, k - 1);
    std::ostringstream tag;
    tag << "sigma_" << k << "(" << n << "): k = " << res.k << ", want "
        << want;
    gate.require(res.central && std::abs(res.k - want) <= 1e-8, tag.str());
  }

  // ma_lag factors as a product of 2^m linear forms whose values at A are
  // the factor eigenvalues Lambda_j; each is m times a profile-normalized
  // eigenvalue (the factor of t is m, the leading coefficient m^N), so the
  // sign-sum identity sum_j Lambda_j = 2^{m-1} tr A reads
  // m * garding_laplacian(A) = 2^{m-1} tr A.
  for (const int n : {4, 6}) {
    const int m = n / 2;
    const OpPtr ml = GardingOperator::ma_lag(n);
    const double factor = std::pow(2.0, m - 1);
    for (int i = 0; i < 100; ++i) {
      const SymMatrix A = random_symmetric(n, Rng::derive(42, 230 + n, i));
      const double want = factor * A.mat().trace();
      const double got = m * garding_laplacian(ml, A);
      if (std::abs(got - want) > 1e-8 * std::max(1.0, std::abs(want))) {
        std::ostringstream tag;
        tag << "ma_lag(" << n << "): factor-eigenvalue sum " << got << " vs "
            << want;
        gate.require(false, tag.str());
        break;
      }
    }
  }

  // a11 (a11 + a22): gradient at I is diag(3,1), not a multiple of I.
  const OpPtr fixture = GardingOperator::symbolic(
      2, SparsePoly(3, {{{2, 0, 0}, 1.0}, {{1, 0, 1}, 1.0}}));
  const CentralityResult res = check_central(fixture);
  gate.require(!res.central, "fixture accepted as central");
  gate.require(res.gradient_at_I(0, 0) == 3.0 &&
                   res.gradient_at_I(1, 1) == 1.0 &&
                   res.gradient_at_I(0, 1) == 0.0,
               "fixture gradient is not diag(3,1)");
  return gate;
}

// --- criterion 4: negative controls ---------------------------------------

Gate criterion_negative_controls() {
  Gate gate;
  const CheckReport hyp = check_hyperbolic(GardingOperator::quad_c(-1.0),
                                           SymMatrix::identity(2), 500, 42);
  gate.require(!hyp.pass, "quad_c(-1) passed check_hyperbolic");
  gate.require(hyp.witness.has_value(), "quad_c(-1) failure lacks a witness");

  const CheckReport dir = check_dirichlet(GardingOperator::quad_c(1.5), 500, 42);
  gate.require(!dir.pass, "quad_c(1.5) passed check_dirichlet");

  for (const double eps : {0.1, 1.0}) {
    const SparsePoly p(2, {{{2, 0}, eps}, {{1, 1}, 1.0}});
    const CheckReport rep = basic_lemma_check(p, 100, 42);
    std::ostringstream tag;
    tag << "x1(" << eps << " x1 + x2)";
    gate.require(!rep.pass, tag.str() + " passed basic_lemma_check");
    gate.require(has_note(rep, "hypothesis (2)"),
                 tag.str() + ": no hypothesis (2) note");
  }
  return gate;
}

// --- criterion 5: diagonal-restriction coefficients -----------------------

Gate criterion_coefficients(const std::vector<CatalogEntry>& cat) {
  Gate gate;
  for (const CatalogEntry& e : cat) {
    if (!e.certified) continue;
    const CheckReport rep = diag_coefficient_check(e.op, 20, 42);
    gate.require(rep.pass, e.op->name() + ": negative diagonal coefficient");
  }

  const double r = 1.0 / std::sqrt(2.0);
  Mat h(2, 2);
  h << r, -r, r, r;
  const SparsePoly ph = diagonal_restriction(
      GardingOperator::conjugate(GardingOperator::quad_c(0.5), h));
  gate.require(std::abs(ph.coeff({2, 0}) - 0.125) <= 1e-9 &&
                   std::abs(ph.coeff({1, 1}) - 0.75) <= 1e-9 &&
                   std::abs(ph.coeff({0, 2}) - 0.125) <= 1e-9,
               "rotated quad_c(0.5) coefficients differ from {1/8, 3/4, 1/8}");
  return gate;
}

// --- criterion 6: structural lemmas ---------------------------------------

Gate criterion_structural(const std::vector<CatalogEntry>& cat,
                          const OpPtr& lt) {
  Gate gate;
  int idx = 0;
  for (const CatalogEntry& e : cat) {
    ++idx;
    const CheckReport rep = lemma22_check(e.op, 50, 42);
    const double rel = margin_of(rep, "max_rel_error", 1.0);
    std::ostringstream tag;
    tag << e.op->name() << ": lemma22 max_rel_error " << rel;
    gate.require(rep.pass && rel <= 1e-6, tag.str());
  }

  idx = 0;
  for (const CatalogEntry& e : cat) {
    ++idx;
    if (!e.certified) continue;
    for (int j = 0; j < 200; ++j) {
      const SymMatrix A =
          random_symmetric(e.op->n(), Rng::derive(42, 240 + idx, j));
      const CheckReport rep = interlace_check(e.op, A);
      if (!rep.pass) {
        std::ostringstream tag;
        tag << e.op->name() << ": interlacing fails at sample " << j;
        gate.require(false, tag.str());
        break;
      }
    }
  }

  idx = 0;
  for (const CatalogEntry& e : cat) {
    ++idx;
    if (!e.certified) continue;
    const int n = e.op->n();
    const SymMatrix I = SymMatrix::identity(n);
    for (int j = 0; j < 100; ++j) {
      const Mat h = random_orthogonal(n, Rng::derive(42, 250 + idx, j));
      const SymMatrix A = random_symmetric(n, Rng::derive(42, 265 + idx, j));
      const SymMatrix hAh(h * A.mat() * h.transpose());
      const std::vector<double> left =
          garding_eigenvalues(GardingOperator::conjugate(e.op, h), I, A).values;
      const std::vector<double> right =
          garding_eigenvalues(e.op, I, hAh).values;
      double err = 0.0;
      double scale = 1.0;
      for (size_t t = 0; t < left.size(); ++t) {
        err = std::max(err, std::abs(left[t] - right[t]));
        scale = std::max(scale, std::abs(right[t]));
      }
      if (err > 1e-8 * scale) {
        std::ostringstream tag;
        tag << e.op->name() << ": conjugation transfer error " << err;
        gate.require(false, tag.str());
        break;
      }
    }
  }

  gate.require(chain_rule_check(lt, 50, 42).pass, "chain rule fails");
  gate.require(cone_transfer_check(lt, 200, 42).pass, "cone transfer fails");
  return gate;
}

// --- criterion 7: independent collapse identities -------------------------

Gate criterion_collapse() {
  Gate gate;
  const OpPtr ml2 = GardingOperator::ma_lag(2);
  const OpPtr d2 = GardingOperator::det(2);
  for (int i = 0; i < 1000; ++i) {
    const SymMatrix A = random_symmetric(2, Rng::derive(42, 300, i));
    const double want = d2->evaluate(A);
    if (std::abs(ml2->evaluate(A) - want) >
        1e-10 * std::max(1.0, std::abs(want))) {
      gate.require(false, "ma_lag(2) deviates from det on S(2)");
      break;
    }
  }
  gate.require(ml2->evaluate(SymMatrix::identity(2)) == 1.0,
               "ma_lag(2) at I is not exactly 1");
  gate.require(GardingOperator::ma_lag(4)->evaluate(SymMatrix::identity(4)) ==
                   16.0,
               "ma_lag(4) at I is not exactly 16");
  gate.require(GardingOperator::ma_lag(6)->evaluate(SymMatrix::identity(6)) ==
                   6561.0,
               "ma_lag(6) at I is not exactly 6561");
  return gate;
}

// --- criterion 8: determinism and golden reports --------------------------

Gate criterion_determinism(const std::string& golden_dir) {
  Gate gate;
  struct Case {
    const char* spec;
    std::vector<std::string> suites;
    int exit_code;
    const char* golden;
  };
  const std::vector<Case> cases = {
      {R"({"op": "det", "n": 3})", {"all"}, 0, "det3_all.report.json"},
      {R"({"op": "ma_lag", "n": 4})",
       {"majorization", "central"},
       0,
       "malag4_major_central.report.json"},
      {R"({"op": "quad_c", "c": -1})",
       {"hyperbolic"},
       1,
       "quadm1_hyperbolic.report.json"},
  };
  for (const Case& c : cases) {
    RunConfig cfg;
    cfg.spec_text = c.spec;
    cfg.suites = c.suites;
    cfg.seed = 42;
    cfg.samples = 2000;
    cfg.refine_iters = 500;
    const RunResult first = run(cfg);
    const RunResult second = run(cfg);
    gate.require(first.report_json == second.report_json,
                 std::string(c.golden) + ": repeated runs differ");
    gate.require(first.exit_code == c.exit_code,
                 std::string(c.golden) + ": unexpected exit code");
    const std::string golden = read_file(golden_dir + "/" + c.golden);
    if (golden.empty()) {
      gate.require(false, std::string(c.golden) + ": golden file missing");
    } else {
      gate.require(first.report_json == golden,
                   std::string(c.golden) + ": report differs from golden");
    }
  }
  return gate;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string golden_dir = argc > 1 ? argv[1] : "tests/golden";
  const std::vector<CatalogEntry> cat = catalog();
  const OpPtr lt = trace_shift_det3();

  struct Row {
    const char* label;
    std::function<Gate()> body;
  };
  const std::vector<Row> rows = {
      {"1 determinant majorization, 2000 samples + 500 refinements",
       [&] { return criterion_majorization(cat); }},
      {"2 gradient-determinant bound at 200 interior cone points",
       [&] { return criterion_gradient_det(cat); }},
      {"3 central-ray constants and the non-central fixture",
       [&] { return criterion_centrality(); }},
      {"4 negative controls (quad_c(-1), quad_c(1.5), basic lemma)",
       [&] { return criterion_negative_controls(); }},
      {"5 diagonal-restriction coefficient condition",
       [&] { return criterion_coefficients(cat); }},
      {"6 structural lemmas (lemma22, interlacing, conjugation, chain rule)",
       [&] { return criterion_structural(cat, lt); }},
      {"7 collapse identities against independent values",
       [&] { return criterion_collapse(); }},
      {"8 byte-determinism and golden reports",
       [&] { return criterion_determinism(golden_dir); }},
  };

  int failures = 0;
  for (const Row& row : rows) {
    Gate gate;
    try {
      gate = row.body();
    } catch (const std::exception& e) {
      gate.require(false, std::string("uncaught: ") + e.what());
    }
    std::printf("criterion %s: %s\n", row.label,
                gate.pass() ? "PASS" : "FAIL");
    for (const std::string& why : gate.failures) {
      std::printf("    %s\n", why.c_str());
    }
    if (!gate.pass()) ++failures;
  }
  if (failures > 0) {
    std::printf("%d of 8 criteria failed\n", failures);
    return 1;
  }
  std::printf("all 8 criteria passed\n");
  return 0;
}
