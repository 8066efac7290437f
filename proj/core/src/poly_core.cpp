#include "garding/poly_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <json.hpp>

#include "garding/report.hpp"

namespace garding {

bool GradedLex::operator()(const std::vector<int>& a,
                           const std::vector<int>& b) const {
  const int da = std::accumulate(a.begin(), a.end(), 0);
  const int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da < db;
  return a < b;
}

SparsePoly::SparsePoly(int nvars) : nvars_(nvars) {
  if (nvars < 1) throw dimension_error("SparsePoly requires nvars >= 1");
}

SparsePoly::SparsePoly(
    int nvars, const std::vector<std::pair<std::vector<int>, double>>& terms)
    : SparsePoly(nvars) {
  for (const auto& [alpha, c] : terms) add_term(alpha, c);
  prune_and_finalize();
}

void SparsePoly::add_term(std::vector<int> alpha, double c) {
  if (static_cast<int>(alpha.size()) != nvars_) {
    throw dimension_error("exponent vector length must equal nvars");
  }
  for (int e : alpha) {
    if (e < 0) throw dimension_error("exponents must be nonnegative");
  }
  terms_[std::move(alpha)] += c;
}

void SparsePoly::prune_and_finalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < kPruneThreshold) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  degree_ = 0;
  for (const auto& [alpha, c] : terms_) {
    degree_ = std::max(degree_,
                       std::accumulate(alpha.begin(), alpha.end(), 0));
  }
}

double SparsePoly::coeff(const std::vector<int>& alpha) const {
  const auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

bool SparsePoly::is_homogeneous() const {
  for (const auto& [alpha, c] : terms_) {
    if (std::accumulate(alpha.begin(), alpha.end(), 0) != degree_) {
      return false;
    }
  }
  return true;
}

double poly_eval(const SparsePoly& p, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != p.nvars()) {
    throw dimension_error("poly_eval: point dimension mismatch");
  }
  double sum = 0.0;
  for (const auto& [alpha, c] : p.terms()) {
    double term = c;
    for (int v = 0; v < p.nvars(); ++v) {
      for (int e = 0; e < alpha[v]; ++e) term *= x[v];
    }
    sum += term;
  }
  return sum;
}

SparsePoly poly_mul(const SparsePoly& p, const SparsePoly& q) {
  if (p.nvars() != q.nvars()) {
    throw dimension_error("poly_mul: nvars mismatch");
  }
  SparsePoly out(p.nvars());
  for (const auto& [a, ca] : p.terms()) {
    for (const auto& [b, cb] : q.terms()) {
      std::vector<int> alpha(a.size());
      for (size_t i = 0; i < a.size(); ++i) alpha[i] = a[i] + b[i];
      out.add_term(std::move(alpha), ca * cb);
    }
  }
  out.prune_and_finalize();
  return out;
}

SparsePoly poly_directional_derivative(const SparsePoly& p,
                                       const std::vector<double>& a) {
  if (static_cast<int>(a.size()) != p.nvars()) {
    throw dimension_error("directional derivative: direction dimension mismatch");
  }
  SparsePoly out(p.nvars());
  for (const auto& [alpha, c] : p.terms()) {
    for (int v = 0; v < p.nvars(); ++v) {
      if (alpha[v] == 0 || a[v] == 0.0) continue;
      std::vector<int> beta = alpha;
      beta[v] -= 1;
      out.add_term(std::move(beta), c * alpha[v] * a[v]);
    }
  }
  out.prune_and_finalize();
  return out;
}

SparsePoly coefficients_from_evaluator(
    const std::function<double(const std::vector<double>&)>& f, int N, int n) {
  if (N < 0 || n < 1) {
    throw dimension_error("coefficients_from_evaluator: need N >= 0, n >= 1");
  }
  SparsePoly out(n);
  if (N == 0) {
    const double v = f(std::vector<double>(n, 0.0));
    if (std::abs(v) >= SparsePoly::kPruneThreshold) {
      out.add_term(std::vector<int>(n, 0), v);
    }
    out.prune_and_finalize();
    return out;
  }

  // Dense tensor T over {0..N}^n, but only simplex slots are ever written.
  std::vector<int> stride(n);
  stride[n - 1] = 1;
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * (N + 1);
  std::vector<double> T(stride[0] * (N + 1), 0.0);

  {
    std::vector<double> x(n);
    std::vector<int> pt(n, 0);
    // simple recursive fill via explicit stack
    std::function<void(int, int, long)> fill = [&](int d, int budget, long off) {
      if (d == n) {
        for (int i = 0; i < n; ++i) x[i] = pt[i];
        T[off] = f(x);
        return;
      }
      for (int v = 0; v <= budget; ++v) {
        pt[d] = v;
        fill(d + 1, budget - v, off + v * stride[d]);
      }
      pt[d] = 0;
    };
    fill(0, N, 0);
  }

  // Axis-wise Newton divided differences on integer nodes, truncated along
  // each line to the remaining total-degree budget.
  std::vector<double> line(N + 1);
  for (int ax = 0; ax < n; ++ax) {
    std::vector<int> base(n, 0);
    std::function<void(int, int, long)> walk = [&](int d, int budget, long off) {
      if (d == n) {
        const int L = budget;  // node budget left for this axis
        if (L < 0) return;
        for (int t = 0; t <= L; ++t) line[t] = T[off + t * stride[ax]];
        for (int k = 1; k <= L; ++k) {
          for (int j = L; j >= k; --j) {
            line[j] = (line[j] - line[j - 1]) / k;  // nodes j, j-k differ by k
          }
        }
        for (int t = 0; t <= L; ++t) T[off + t * stride[ax]] = line[t];
        return;
      }
      if (d == ax) {
        walk(d + 1, budget, off);
        return;
      }
      for (int v = 0; v <= budget; ++v) {
        walk(d + 1, budget - v, off + v * stride[d]);
      }
    };
    walk(0, N, 0);
  }

  // Newton basis psi_k(t) = prod_{j<k}(t-j) expanded to monomials once.
  std::vector<std::vector<double>> psi(N + 1);
  psi[0] = {1.0};
  for (int k = 1; k <= N; ++k) {
    const auto& prev = psi[k - 1];
    std::vector<double> cur(prev.size() + 1, 0.0);
    for (size_t i = 0; i < prev.size(); ++i) {
      cur[i + 1] += prev[i];
      cur[i] -= (k - 1) * prev[i];
    }
    psi[k] = std::move(cur);
  }

  // Convert the Newton-tensor coefficients to monomial coefficients.
  std::vector<int> alpha(n, 0);
  std::function<void(int, int, long)> emit = [&](int d, int budget, long off) {
    if (d == n) {
      const double c = T[off];
      if (std::abs(c) < SparsePoly::kPruneThreshold) return;
      // tensor product of the psi expansions for this multi-index
      std::vector<std::pair<std::vector<int>, double>> acc = {
          {std::vector<int>(n, 0), c}};
      for (int v = 0; v < n; ++v) {
        const auto& pv = psi[alpha[v]];
        std::vector<std::pair<std::vector<int>, double>> next;
        next.reserve(acc.size() * pv.size());
        for (const auto& [mono, coeff] : acc) {
          for (size_t e = 0; e < pv.size(); ++e) {
            if (pv[e] == 0.0) continue;
            auto m2 = mono;
            m2[v] = static_cast<int>(e);
            next.emplace_back(std::move(m2), coeff * pv[e]);
          }
        }
        acc = std::move(next);
      }
      for (auto& [mono, coeff] : acc) out.add_term(std::move(mono), coeff);
      return;
    }
    for (int v = 0; v <= budget; ++v) {
      alpha[d] = v;
      emit(d + 1, budget - v, off + v * stride[d]);
    }
    alpha[d] = 0;
  };
  emit(0, N, 0);

  out.prune_and_finalize();
  return out;
}

std::string poly_to_json_text(const SparsePoly& p) {
  JsonValue arr = JsonValue::array();
  for (const auto& [alpha, c] : p.terms()) {
    JsonValue term = JsonValue::object();
    JsonValue exps = JsonValue::array();
    for (int e : alpha) exps.push(JsonValue::integer(e));
    term.set("alpha", std::move(exps));
    term.set("coeff", JsonValue::number(c));
    arr.push(std::move(term));
  }
  return arr.dump();
}

SparsePoly poly_from_json_terms_text(int nvars, const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw dimension_error(std::string("terms JSON parse error: ") + e.what());
  }
  if (!doc.is_array()) {
    throw dimension_error("terms JSON must be an array of {alpha, coeff}");
  }
  std::vector<std::pair<std::vector<int>, double>> terms;
  for (const auto& t : doc) {
    if (!t.contains("alpha") || !t.contains("coeff")) {
      throw dimension_error("each term needs \"alpha\" and \"coeff\"");
    }
    terms.emplace_back(t["alpha"].get<std::vector<int>>(),
                       t["coeff"].get<double>());
  }
  return SparsePoly(nvars, terms);
}

}  // namespace garding
