#include "garding/operator.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "garding/garding_analysis.hpp"
#include "univariate_fit.hpp"

namespace garding {

namespace {

std::string num_to_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

SymMatrix symmetrized(const Mat& m) {
  return SymMatrix((m + m.transpose()) / 2.0);
}

// Elementary symmetric functions e_0..e_n of the given values, by the
// coefficient recursion for prod (1 + v_i x).
std::vector<double> elementary_symmetric(const Vec& v) {
  std::vector<double> e(v.size() + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < v.size(); ++i) {
    for (int k = i + 1; k >= 1; --k) e[k] += e[k - 1] * v(i);
  }
  return e;
}

constexpr std::uint64_t kConstructionSeed = 0x67617264696e6721ull;

}  // namespace

int entry_space_dim(int n) { return n * (n + 1) / 2; }

std::vector<double> sym_to_entries(const SymMatrix& A) {
  const int n = A.n();
  std::vector<double> v;
  v.reserve(entry_space_dim(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) v.push_back(A(i, j));
  }
  return v;
}

SymMatrix entries_to_sym(int n, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != entry_space_dim(n)) {
    throw dimension_error("entries_to_sym: expected n(n+1)/2 values");
  }
  Mat m(n, n);
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      m(i, j) = v[idx];
      m(j, i) = v[idx];
      ++idx;
    }
  }
  return SymMatrix(std::move(m));
}

LinearMap::LinearMap(int n, Mat action) : n_(n), action_(std::move(action)) {
  const int d = entry_space_dim(n);
  if (action_.rows() != d || action_.cols() != d) {
    throw dimension_error("LinearMap: action matrix must be n(n+1)/2 square");
  }
}

LinearMap LinearMap::identity(int n) {
  return LinearMap(n, Mat::Identity(entry_space_dim(n), entry_space_dim(n)));
}

LinearMap LinearMap::from_action_on_matrices(
    int n, const std::function<SymMatrix(const SymMatrix&)>& f) {
  const int d = entry_space_dim(n);
  Mat action(d, d);
  std::vector<double> basis(d, 0.0);
  for (int col = 0; col < d; ++col) {
    basis[col] = 1.0;
    const SymMatrix image = f(entries_to_sym(n, basis));
    basis[col] = 0.0;
    const std::vector<double> img = sym_to_entries(image);
    for (int row = 0; row < d; ++row) action(row, col) = img[row];
  }
  return LinearMap(n, std::move(action));
}

SymMatrix LinearMap::apply(const SymMatrix& A) const {
  if (A.n() != n_) throw dimension_error("LinearMap::apply: dimension mismatch");
  const std::vector<double> x = sym_to_entries(A);
  Vec xv = Eigen::Map<const Vec>(x.data(), x.size());
  Vec yv = action_ * xv;
  return entries_to_sym(n_, std::vector<double>(yv.data(), yv.data() + yv.size()));
}

LinearMap LinearMap::adjoint() const {
  const int d = entry_space_dim(n_);
  Vec w(d);
  int idx = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      w(idx++) = (i == j) ? 1.0 : 2.0;
    }
  }
  Mat adj = w.cwiseInverse().asDiagonal() * action_.transpose() * w.asDiagonal();
  return LinearMap(n_, std::move(adj));
}

double LinearMap::operator_norm_bound() const { return action_.norm(); }

double LogValue::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_abs);
}

namespace {

LogValue log_from_value(double v) {
  LogValue out;
  if (v > 0) {
    out.sign = 1;
    out.log_abs = std::log(v);
  } else if (v < 0) {
    out.sign = -1;
    out.log_abs = std::log(-v);
  }
  return out;
}

// Accumulates a product of real factors in sign/log form.
struct LogProduct {
  int sign = 1;
  double log_abs = 0.0;
  void factor(double f) {
    if (sign == 0) return;
    if (f == 0.0) {
      sign = 0;
      return;
    }
    if (f < 0) {
      sign = -sign;
      f = -f;
    }
    log_abs += std::log(f);
  }
  LogValue done() const {
    LogValue out;
    out.sign = sign;
    out.log_abs = (sign == 0) ? 0.0 : log_abs;
    return out;
  }
};

// d/dt g(A + tI) at t = 0, in closed form per kind. A fitted profile
// coefficient carries absolute noise on the order of eps * max|profile|,
// which swamps small values once the degree is large; the closed forms keep
// radial-derivative operators as accurate as their inner operator.
double radial_value(const GardingOperator& g, const SymMatrix& A) {
  using Kind = GardingOperator::Kind;
  const int n = g.n();
  switch (g.kind()) {
    case Kind::symbolic: {
      const std::vector<double> dir = sym_to_entries(SymMatrix::identity(n));
      const SparsePoly d = poly_directional_derivative(*g.entry_poly(), dir);
      return poly_eval(d, sym_to_entries(A));
    }
    case Kind::det: {
      const SpectralDecomposition d = sym_eigen(A);
      return elementary_symmetric(d.eigenvalues)[n - 1];
    }
    case Kind::sigma_k: {
      // d/dt sigma_k(lambda + t*1) = (n - k + 1) sigma_{k-1}(lambda).
      const SpectralDecomposition d = sym_eigen(A);
      const int k = g.param_k();
      return (n - k + 1.0) * elementary_symmetric(d.eigenvalues)[k - 1];
    }
    case Kind::ma_lag: {
      // Every linear factor gains m*t under A -> A + tI, so the derivative
      // is m times the sum of the all-but-one factor products.
      const SkewPart sp = skew_hermitian_part(A);
      const int m = n / 2;
      const double half_tr = A.trace() / 2.0;
      const int count = 1 << m;
      std::vector<double> f(count);
      for (int mask = 0; mask < count; ++mask) {
        double factor = half_tr;
        for (int j = 0; j < m; ++j) {
          factor += (mask & (1 << j)) ? sp.nonneg_eigs(j) : -sp.nonneg_eigs(j);
        }
        f[mask] = factor;
      }
      std::vector<double> suffix(count + 1, 1.0);
      for (int i = count - 1; i >= 0; --i) suffix[i] = suffix[i + 1] * f[i];
      double prefix = 1.0;
      double sum = 0.0;
      for (int i = 0; i < count; ++i) {
        sum += prefix * suffix[i + 1];
        prefix *= f[i];
      }
      return m * sum;
    }
    case Kind::quad_c:
      // d/dt [(a11 + t)(a22 + t) - c a12^2] = a11 + a22.
      return A(0, 0) + A(1, 1);
    case Kind::norm2_det: {
      const SpectralDecomposition d = sym_eigen(A);
      const std::vector<double> e = elementary_symmetric(d.eigenvalues);
      return 2.0 * A.trace() * e[n] + A.norm() * A.norm() * e[n - 1];
    }
    case Kind::product: {
      const GardingOperator& a = *g.children()[0];
      const GardingOperator& b = *g.children()[1];
      return radial_value(a, A) * b.evaluate(A) +
             a.evaluate(A) * radial_value(b, A);
    }
    case Kind::conjugate: {
      // h (A + tI) h^t = h A h^t + tI for orthogonal h.
      const Mat& h = *g.conjugation();
      return radial_value(*g.children()[0],
                          symmetrized(h * A.mat() * h.transpose()));
    }
    case Kind::linear_transform: {
      // L(A + tI) = L(A) + t L(I). When L fixes the identity ray this is
      // k times the inner radial derivative at L(A); otherwise fall back to
      // a Richardson-extrapolated central difference along L(I).
      const LinearMap& L = *g.transform();
      const SymMatrix LA = L.apply(A);
      const SymMatrix LI = L.apply(SymMatrix::identity(n));
      const double k = LI.trace() / n;
      const double defect =
          (LI.mat() - k * Mat::Identity(n, n)).cwiseAbs().maxCoeff();
      const GardingOperator& inner = *g.children()[0];
      if (defect <= 1e-12 * (1.0 + LI.norm())) {
        return k * radial_value(inner, LA);
      }
      const double h = 1e-5 * (1.0 + LA.norm());
      const auto f = [&](double t) {
        return inner.evaluate(symmetrized(LA.mat() + t * LI.mat()));
      };
      const double d1 = (f(h) - f(-h)) / (2.0 * h);
      const double d2 = (f(h / 2) - f(-h / 2)) / h;
      return (4.0 * d2 - d1) / 3.0;
    }
    case Kind::radial_derivative: {
      // g is already a depth-fold radial derivative of some base operator;
      // one more is (depth + 1)! times Taylor coefficient depth + 1 of the
      // base profile.
      const GardingOperator* base = &g;
      int depth = 0;
      while (base->kind() == Kind::radial_derivative) {
        base = base->children()[0].get();
        ++depth;
      }
      const double R = 2.0 * (1.0 + A.norm() / std::sqrt(double(n)));
      const SymMatrix I = SymMatrix::identity(n);
      const auto profile = detail::fit_polynomial(
          [&](double t) {
            return base->evaluate(symmetrized(A.mat() + t * I.mat()));
          },
          base->N(), R);
      double fact = 1.0;
      for (int j = 2; j <= depth + 1; ++j) fact *= j;
      return fact * profile[depth + 1];
    }
  }
  throw std::logic_error("radial_value: unhandled operator kind");
}

}  // namespace

double GardingOperator::evaluate(const SymMatrix& A) const {
  if (A.n() != n_) {
    throw dimension_error("evaluate: matrix dimension does not match operator");
  }
  switch (kind_) {
    case Kind::symbolic:
      return poly_eval(*poly_, sym_to_entries(A));
    case Kind::det: {
      const SpectralDecomposition d = sym_eigen(A);
      double prod = 1.0;
      for (int i = 0; i < d.eigenvalues.size(); ++i) prod *= d.eigenvalues(i);
      return prod;
    }
    case Kind::sigma_k: {
      const SpectralDecomposition d = sym_eigen(A);
      return elementary_symmetric(d.eigenvalues)[k_];
    }
    case Kind::ma_lag: {
      const SkewPart sp = skew_hermitian_part(A);
      const int m = n_ / 2;
      const double half_tr = A.trace() / 2.0;
      double prod = 1.0;
      for (int mask = 0; mask < (1 << m); ++mask) {
        double factor = half_tr;
        for (int j = 0; j < m; ++j) {
          factor += (mask & (1 << j)) ? sp.nonneg_eigs(j) : -sp.nonneg_eigs(j);
        }
        prod *= factor;
      }
      return prod;
    }
    case Kind::quad_c:
      return A(0, 0) * A(1, 1) - c_ * A(0, 1) * A(0, 1);
    case Kind::norm2_det: {
      const SpectralDecomposition d = sym_eigen(A);
      double det = 1.0;
      for (int i = 0; i < d.eigenvalues.size(); ++i) det *= d.eigenvalues(i);
      return A.norm() * A.norm() * det;
    }
    case Kind::product:
      return children_[0]->evaluate(A) * children_[1]->evaluate(A);
    case Kind::radial_derivative:
      return radial_value(*children_[0], A);
    case Kind::conjugate:
      return children_[0]->evaluate(
          symmetrized(*h_ * A.mat() * h_->transpose()));
    case Kind::linear_transform:
      return children_[0]->evaluate(L_->apply(A));
  }
  throw std::logic_error("evaluate: unhandled operator kind");
}

LogValue GardingOperator::evaluate_log(const SymMatrix& A) const {
  if (A.n() != n_) {
    throw dimension_error("evaluate_log: matrix dimension does not match operator");
  }
  switch (kind_) {
    case Kind::det: {
      const SpectralDecomposition d = sym_eigen(A);
      LogProduct p;
      for (int i = 0; i < d.eigenvalues.size(); ++i) p.factor(d.eigenvalues(i));
      return p.done();
    }
    case Kind::ma_lag: {
      const SkewPart sp = skew_hermitian_part(A);
      const int m = n_ / 2;
      const double half_tr = A.trace() / 2.0;
      LogProduct p;
      for (int mask = 0; mask < (1 << m); ++mask) {
        double factor = half_tr;
        for (int j = 0; j < m; ++j) {
          factor += (mask & (1 << j)) ? sp.nonneg_eigs(j) : -sp.nonneg_eigs(j);
        }
        p.factor(factor);
      }
      return p.done();
    }
    case Kind::norm2_det: {
      const SpectralDecomposition d = sym_eigen(A);
      LogProduct p;
      p.factor(A.norm() * A.norm());
      for (int i = 0; i < d.eigenvalues.size(); ++i) p.factor(d.eigenvalues(i));
      return p.done();
    }
    case Kind::product: {
      const LogValue a = children_[0]->evaluate_log(A);
      const LogValue b = children_[1]->evaluate_log(A);
      LogValue out;
      out.sign = a.sign * b.sign;
      out.log_abs = (out.sign == 0) ? 0.0 : a.log_abs + b.log_abs;
      return out;
    }
    case Kind::conjugate:
      return children_[0]->evaluate_log(
          symmetrized(*h_ * A.mat() * h_->transpose()));
    case Kind::linear_transform:
      return children_[0]->evaluate_log(L_->apply(A));
    default:
      return log_from_value(evaluate(A));
  }
}

OpPtr GardingOperator::finalize(std::shared_ptr<GardingOperator> op) {
  op->check_homogeneity();
  return op;
}

void GardingOperator::check_homogeneity() const {
  for (int trial = 0; trial < 50; ++trial) {
    const SymMatrix A =
        random_symmetric(n_, Rng::derive(kConstructionSeed, 1, trial));
    Rng rng(Rng::derive(kConstructionSeed, 2, trial));
    const double c = rng.uniform(0.5, 2.0);
    const double gA = evaluate(A);
    const double gcA = evaluate(SymMatrix(c * A.mat()));
    const double cN = std::pow(c, N_);
    if (std::abs(gcA - cN * gA) > 1e-9 * (1.0 + std::abs(gA)) * cN) {
      std::ostringstream msg;
      msg << "operator '" << name_ << "' is not homogeneous of degree " << N_
          << ": |g(cA) - c^N g(A)| = " << std::abs(gcA - cN * gA)
          << " at trial " << trial;
      throw dimension_error(msg.str());
    }
  }
}

OpPtr GardingOperator::det(int n) {
  if (n < 1) throw dimension_error("det: need n >= 1");
  auto op = std::shared_ptr<GardingOperator>(new GardingOperator());
  op->kind_ = Kind::det;
  op->n_ = n;
  op->N_ = n;
  op->name_ = "det(" + std::to_string(n) + ")";
  op->flags_.garding_dirichlet = true;
  op->flags_.i_central = true;
  return finalize(op);
}

OpPtr GardingOperator::sigma(int n, int k) {
  if (n < 1 || k < 1 || k > n) {
    throw dimension_error("sigma: need 1 <= k <= n");
  }
  auto op = std::shared_ptr<GardingOperator>(new GardingOperator());
  op->kind_ = Kind::sigma_k;
  op->n_ = n;
  op->N_ = k;
  op->k_ = k;
  op->name_ = "sigma_" + std::to_string(k) + "(" + std::to_string(n) + ")";
  op->flags_.garding_dirichlet = true;
  op->flags_.i_central = true;
  return finalize(op);
}

OpPtr GardingOperator::ma_lag(int n) {
  if (n < 2 || n % 2 != 0) throw dimension_error("ma_lag: need even n >= 2");
  auto op = std::shared_ptr<GardingOperator>(new GardingOperator());
  op->kind_ = Kind::ma_lag;
  op->n_ = n;
  op->N_ = 1 << (n / 2);
  op->name_ = "ma_lag(" + std::to_string(n) + ")";
  op->flags_.garding_dirichlet = true;
  op->flags_.i_central = true;
  return finalize(op);
}

OpPtr GardingOperator::quad_c(double c) {
  auto op = std::shared_ptr<GardingOperator>(new GardingOperator());
  op->kind_ = Kind::quad_c;
  op->n_ = 2;
  op->N_ = 2;
  op->c_ = c;
  op->name_ = "quad_c(" + num_to_text(c) + ")";
  op->flags_.garding_dirichlet = (c >= 0.0 && c <= 1.0);
  op->flags_.i_central = true;  // D_I g = I for every c
  if (!op->flags_.garding_dirichlet) {
    op->flags_.notes.push_back("c outside [0,1]: hyperbolicity/positivity expected to fail");
  }
  return finalize(op);
}

OpPtr GardingOperator::norm2_det(int n) {
  if (n < 1) throw dimension_error("norm2_det: need n >= 1");
  auto op = std::shared_ptr<GardingOperator>(new GardingOperator());
  op->kind_ = Kind::norm2_det;
  op->n_ = n;
  op->N_ = n + 2;
  op->name_ = "norm2_det(" + std::to_string(n) + ")";
  op->flags_.garding_dirichlet = false;
  op->flags_.i_central = true;
  op->flags_.notes.push_back(
      "I-central but not Garding hyperbolic; eigenvalue-based checks do not apply");
  return finalize(op);
}

OpPtr GardingOperator::symbolic(int n, SparsePoly p, std::string display_name) {
  if (n < 1) throw dimension_error("symbolic: need n >= 1");
  if (p.nvars() != entry_space_dim(n)) {
    throw dimension_error("symbolic: polynomial must have n(n+1)/2 variables");
  }
  if (p.is_zero()) throw dimension_error("symbolic: zero polynomial");
  if (!p.is_homogeneous()) {
    throw dimension_error("symbolic: polynomial is not homogeneous");
  }
  auto op = std::shared_ptr<GardingOperator>(new GardingOperator());
  op->kind_ = Kind::symbolic;
  op->n_ = n;
  op->N_ = p.degree();
  op->poly_ = std::move(p);
  op->name_ = display_name.empty() ? "symbolic(" + std::to_string(n) + ")"
                                   : std::move(display_name);
  return finalize(op);
}

OpPtr GardingOperator::product(OpPtr a, OpPtr b) {
  if (!a || !b) throw dimension_error("product: null operand");
  if (a->n() != b->n()) throw dimension_error("product: dimension mismatch");
  auto op = std::shared_ptr<GardingOperator>(new GardingOperator());
  op->kind_ = Kind::product;
  op->n_ = a->n();
  op->N_ = a->N() + b->N();
  op->name_ = "product(" + a->name() + "," + b->name() + ")";
  op->flags_.garding_dirichlet =
      a->flags().garding_dirichlet && b->flags().garding_dirichlet;
  op->flags_.i_central = a->flags().i_central && b->flags().i_central;
  op->children_ = {std::move(a), std::move(b)};
  return finalize(op);
}

OpPtr GardingOperator::radial_derivative(OpPtr g) {
  if (!g) throw dimension_error("radial_derivative: null operand");
  if (g->N() < 2) {
    throw dimension_error("radial_derivative: needs degree >= 2");
  }
  auto op = std::shared_ptr<GardingOperator>(new GardingOperator());
  op->kind_ = Kind::radial_derivative;
  op->n_ = g->n();
  op->N_ = g->N() - 1;
  op->name_ = "radial_derivative(" + g->name() + ")";
  op->flags_.garding_dirichlet = g->flags().garding_dirichlet;
  op->flags_.i_central = g->flags().i_central && g->flags().garding_dirichlet;
  op->children_ = {std::move(g)};
  return finalize(op);
}

OpPtr GardingOperator::conjugate(OpPtr g, const Mat& h) {
  if (!g) throw dimension_error("conjugate: null operand");
  if (h.rows() != g->n() || h.cols() != g->n()) {
    throw dimension_error("conjugate: h dimension mismatch");
  }
  const double ortho_defect =
      (h * h.transpose() - Mat::Identity(h.rows(), h.cols()))
          .cwiseAbs()
          .maxCoeff();
  if (ortho_defect > 1e-10) {
    std::ostringstream msg;
    msg << "conjugate: h is not orthogonal (|h h^t - I|_max = " << ortho_defect
        << ")";
    throw dimension_error(msg.str());
  }
  auto op = std::shared_ptr<GardingOperator>(new GardingOperator());
  op->kind_ = Kind::conjugate;
  op->n_ = g->n();
  op->N_ = g->N();
  op->name_ = "conjugate(" + g->name() + ")";
  op->flags_ = g->flags();
  op->flags_.notes.clear();
  op->h_ = h;
  op->children_ = {std::move(g)};
  return finalize(op);
}

OpPtr GardingOperator::linear_transform(OpPtr g, const LinearMap& L) {
  if (!g) throw dimension_error("linear_transform: null operand");
  if (L.n() != g->n()) {
    throw dimension_error("linear_transform: LinearMap dimension mismatch");
  }
  auto op = std::shared_ptr<GardingOperator>(new GardingOperator());
  op->kind_ = Kind::linear_transform;
  op->n_ = g->n();
  op->N_ = g->N();
  op->name_ = "linear_transform(" + g->name() + ")";
  op->L_ = L;
  op->children_ = {g};

  const int n = op->n_;
  // Advisory (i): L maps SPD samples into the closed cone of g. A sampled
  // check can only falsify, never certify.
  bool maps_spd_into_cone = true;
  if (g->flags().garding_dirichlet) {
    for (int i = 0; i < 200 && maps_spd_into_cone; ++i) {
      const double spread = 1.0 + (i % 3);
      const SymMatrix P =
          random_spd(n, Rng::derive(kConstructionSeed, 3, i), spread);
      try {
        const ConeCertificate cert = in_garding_cone(g, L.apply(P));
        if (cert.margin < -1e-6) maps_spd_into_cone = false;
      } catch (const std::runtime_error&) {
        maps_spd_into_cone = false;
      }
    }
    op->flags_.notes.push_back(
        maps_spd_into_cone
            ? "L(P) in closed cone: pass on 200 samples (sampled, not proven)"
            : "L(P) in closed cone: FAIL on sampled SPD input");
  } else {
    maps_spd_into_cone = false;
    op->flags_.notes.push_back(
        "L(P) in closed cone: skipped (inner operator not certified)");
  }

  // Advisory (ii): L(I) = kI with k > 0.
  const SymMatrix LI = L.apply(SymMatrix::identity(n));
  const double k = LI.trace() / n;
  const double li_defect =
      (LI.mat() - k * Mat::Identity(n, n)).cwiseAbs().maxCoeff();
  const bool fixes_identity_ray = li_defect <= 1e-10 * (1.0 + LI.norm()) && k > 0;
  op->flags_.notes.push_back(
      fixes_identity_ray
          ? "L(I) = kI: pass (k = " + num_to_text(k) + ")"
          : "L(I) = kI: fail");

  // Advisory (iii): trace-free matrices stay trace-free.
  bool preserves_tracefree = true;
  {
    std::vector<SymMatrix> basis;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        Mat b = Mat::Zero(n, n);
        if (i == j) {
          if (i == n - 1) continue;
          b(i, i) = 1.0;
          b(n - 1, n - 1) = -1.0;
        } else {
          b(i, j) = 1.0;
          b(j, i) = 1.0;
        }
        basis.emplace_back(std::move(b));
      }
    }
    for (const SymMatrix& b : basis) {
      if (std::abs(L.apply(b).trace()) >
          1e-10 * L.operator_norm_bound() * b.norm()) {
        preserves_tracefree = false;
        break;
      }
    }
  }
  op->flags_.notes.push_back(preserves_tracefree
                                 ? "trace-free preservation: pass"
                                 : "trace-free preservation: fail");

  op->flags_.garding_dirichlet =
      g->flags().garding_dirichlet && maps_spd_into_cone;
  op->flags_.i_central =
      g->flags().i_central && fixes_identity_ray && preserves_tracefree;
  return finalize(op);
}

}  // namespace garding
