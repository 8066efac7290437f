#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "garding/matrix_core.hpp"
#include "garding/poly_core.hpp"

namespace garding {

// Entry-variable convention for symbolic operators and LinearMap actions:
// the n(n+1)/2 upper-triangle entries a_{ij}, i <= j, enumerated row-major:
// (0,0), (0,1), ..., (0,n-1), (1,1), ..., (n-1,n-1). An off-diagonal
// variable represents a_{ij} itself (not 2 a_{ij}), matching the literal
// formula a11*a22 - c*a12^2.
int entry_space_dim(int n);
std::vector<double> sym_to_entries(const SymMatrix& A);
SymMatrix entries_to_sym(int n, const std::vector<double>& v);

// Linear endomorphism of S(n), stored as its action matrix on the
// n(n+1)/2-dimensional entry space.
class LinearMap {
 public:
  LinearMap(int n, Mat action);

  static LinearMap identity(int n);
  static LinearMap from_action_on_matrices(
      int n, const std::function<SymMatrix(const SymMatrix&)>& f);

  int n() const { return n_; }
  const Mat& action() const { return action_; }

  SymMatrix apply(const SymMatrix& A) const;

  // Adjoint with respect to <X,Y> = tr(XY). On the entry space this inner
  // product is x^T W y with W = diag(1 on diagonal entries, 2 off-diagonal),
  // so the adjoint action matrix is W^{-1} L^T W.
  LinearMap adjoint() const;

  double operator_norm_bound() const;  // Frobenius norm of the action matrix

 private:
  int n_;
  Mat action_;
};

// Sign-and-log representation for overflow-safe evaluation (ma_lag on S(8)
// reaches degree 16 and raw values overflow double for spread-3 samples).
struct LogValue {
  int sign = 0;        // -1, 0, +1
  double log_abs = 0;  // meaningful when sign != 0
  double value() const;
};

class GardingOperator;
using OpPtr = std::shared_ptr<const GardingOperator>;

// A homogeneous polynomial operator g : S(n) -> R of degree N. Built-ins
// evaluate spectrally; composites evaluate recursively; symbolic operators
// evaluate their entry polynomial. Immutable after construction.
class GardingOperator {
 public:
  enum class Kind {
    symbolic,
    det,
    sigma_k,
    ma_lag,
    quad_c,
    norm2_det,
    product,
    radial_derivative,
    conjugate,
    linear_transform,
  };

  // Certification flags propagated by the closure rules (product and radial
  // derivative of certified operators, conjugation, linear transforms with
  // passing advisory checks). Flags never substitute for checks: everything
  // is re-checkable through garding_analysis.
  struct Flags {
    bool garding_dirichlet = false;
    bool i_central = false;
    std::vector<std::string> notes;
  };

  int n() const { return n_; }
  int N() const { return N_; }
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const Flags& flags() const { return flags_; }

  double evaluate(const SymMatrix& A) const;
  LogValue evaluate_log(const SymMatrix& A) const;

  // Catalog constructors.
  static OpPtr det(int n);
  static OpPtr sigma(int n, int k);      // k-th elementary symmetric function
  static OpPtr ma_lag(int n);            // n even; degree 2^(n/2)
  static OpPtr quad_c(double c);         // a11 a22 - c a12^2 on S(2)
  static OpPtr norm2_det(int n);         // |A|^2 det A (not Garding; I-central)
  static OpPtr symbolic(int n, SparsePoly p, std::string display_name = "");

  // Composite constructors.
  static OpPtr product(OpPtr a, OpPtr b);
  static OpPtr radial_derivative(OpPtr g);          // d/dt g(tI+A) at t=0
  static OpPtr conjugate(OpPtr g, const Mat& h);    // A -> g(h A h^t), h orthogonal
  static OpPtr linear_transform(OpPtr g, const LinearMap& L);

  // Composite internals (for analysis checks such as the chain-rule and
  // cone-transfer rules). Empty/nullopt for non-matching kinds.
  const std::vector<OpPtr>& children() const { return children_; }
  const std::optional<Mat>& conjugation() const { return h_; }
  const std::optional<LinearMap>& transform() const { return L_; }
  const std::optional<SparsePoly>& entry_poly() const { return poly_; }
  double param_c() const { return c_; }
  int param_k() const { return k_; }

 private:
  GardingOperator() = default;
  static OpPtr finalize(std::shared_ptr<GardingOperator> op);
  void check_homogeneity() const;

  Kind kind_ = Kind::det;
  int n_ = 0;
  int N_ = 0;
  std::string name_;
  Flags flags_;
  std::vector<OpPtr> children_;
  std::optional<Mat> h_;
  std::optional<LinearMap> L_;
  std::optional<SparsePoly> poly_;
  double c_ = 0.0;  // quad_c parameter
  int k_ = 0;       // sigma_k parameter
};

}  // namespace garding
