#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace garding {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Dense real symmetric matrix. Construction symmetrizes exactly from the
// upper triangle after checking that the input is symmetric to within
// `sym_tol`, so entries(i,j) == entries(j,i) holds bit-for-bit afterwards.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Mat m, double sym_tol = 1e-12);

  static SymMatrix identity(int n);
  static SymMatrix zero(int n);
  // Builds diag(d) for a diagonal vector d.
  static SymMatrix diagonal(const Vec& d);

  int n() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Mat& mat() const { return m_; }

  double trace() const { return m_.trace(); }
  double norm() const { return m_.norm(); }  // Frobenius

 private:
  Mat m_;
};

// Eigendecomposition of a symmetric matrix with eigenvalues sorted
// nonincreasing and orthonormal eigenvector columns.
struct SpectralDecomposition {
  Vec eigenvalues;  // nonincreasing
  Mat basis;        // columns are eigenvectors, basis * diag * basis^T == A
};

struct SkewPart {
  SymMatrix a_sk;  // (A + J A J)/2; symmetric, anticommutes with J
  Vec nonneg_eigs;  // the m nonnegative eigenvalues, nonincreasing
};

// Deterministic random stream: a Weyl-sequence counter with an
// xorshift-multiply scramble, plus hand-rolled uniform and Box-Muller
// gaussian, so the byte stream does not depend on any standard-library
// generator or distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) { mix(); }

  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double gaussian();                      // standard normal

  // Derives an independent deterministic substream, e.g. one per sample
  // index, so parallel sampling loops stay reproducible.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t index);

 private:
  void mix();
  std::uint64_t next_u64();
  std::uint64_t state_;
  std::uint64_t inc_ = 0x9e3779b97f4a7c15ull;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

SpectralDecomposition sym_eigen(const SymMatrix& A);

// Q diag(exp(u)) Q^T with Q Haar-orthogonal and u_i uniform on
// [-spread, spread]; always strictly positive definite.
SymMatrix random_spd(int n, std::uint64_t seed, double spread);

// Haar-distributed orthogonal matrix (QR of a gaussian matrix with the
// signs of diag(R) fixed).
Mat random_orthogonal(int n, std::uint64_t seed);

// Gaussian symmetric matrix, entries scale 1 (off-diagonals averaged).
SymMatrix random_symmetric(int n, std::uint64_t seed);

// The fixed complex structure on R^{2m}: J e_{2k} = e_{2k+1},
// J e_{2k+1} = -e_{2k} (0-based), i.e. 2x2 blocks [[0,-1],[1,0]].
Mat complex_structure(int n);

// Skew-hermitian part (A + J A J)/2 together with its m nonnegative
// eigenvalues; requires n even.
SkewPart skew_hermitian_part(const SymMatrix& A);

// JSON matrix interchange: array-of-arrays of numbers. Ingest checks
// symmetry to 1e-12 and then symmetrizes exactly from the upper triangle.
SymMatrix matrix_from_json_text(const std::string& text);
std::string matrix_to_json_text(const SymMatrix& A);

}  // namespace garding
