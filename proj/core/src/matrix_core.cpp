#include "garding/matrix_core.hpp"

#include <cmath>
#include <json.hpp>

#include "garding/report.hpp"

namespace garding {

SymMatrix::SymMatrix(Mat m, double sym_tol) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw dimension_error("SymMatrix requires a square matrix with n >= 1");
  }
  const double scale = 1.0 + m.norm();
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > sym_tol * scale) {
        throw dimension_error("matrix is not symmetric within tolerance");
      }
      m(j, i) = m(i, j);  // exact symmetrization from the upper triangle
    }
  }
  m_ = std::move(m);
}

SymMatrix SymMatrix::identity(int n) { return SymMatrix(Mat::Identity(n, n)); }

SymMatrix SymMatrix::zero(int n) { return SymMatrix(Mat::Zero(n, n)); }

SymMatrix SymMatrix::diagonal(const Vec& d) {
  Mat m = Mat::Zero(d.size(), d.size());
  m.diagonal() = d;
  return SymMatrix(std::move(m));
}

// ---- deterministic RNG ----

void Rng::mix() {
  // splitmix-style scramble so nearby seeds give unrelated streams
  for (int i = 0; i < 4; ++i) next_u64();
}

std::uint64_t Rng::next_u64() {
  // xorshift* step on top of a Weyl sequence; simple, fast, reproducible
  state_ += inc_;
  std::uint64_t x = state_;
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index) {
  std::uint64_t x = seed;
  x ^= 0x9e3779b97f4a7c15ull + stream * 0xd1342543de82ef95ull;
  x ^= index * 0x2545f4914f6cdd1dull + 0x6a09e667f3bcc909ull;
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdull;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ull;
  x ^= x >> 33;
  return x;
}

// ---- decompositions and samplers ----

SpectralDecomposition sym_eigen(const SymMatrix& A) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(A.mat());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigensolver did not converge");
  }
  const int n = A.n();
  SpectralDecomposition d;
  d.eigenvalues = Vec(n);
  d.basis = Mat(n, n);
  // Eigen sorts nondecreasing; the contract here is nonincreasing.
  for (int i = 0; i < n; ++i) {
    d.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
    d.basis.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return d;
}

Mat random_orthogonal(int n, std::uint64_t seed) {
  Rng rng(seed);
  Mat g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian();
  }
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fixing the signs of diag(R) makes the distribution Haar.
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

SymMatrix random_spd(int n, std::uint64_t seed, double spread) {
  if (spread < 0) throw std::invalid_argument("spread must be >= 0");
  const Mat q = random_orthogonal(n, Rng::derive(seed, 1, 0));
  Rng rng(Rng::derive(seed, 2, 0));
  Vec d(n);
  for (int i = 0; i < n; ++i) d(i) = std::exp(rng.uniform(-spread, spread));
  Mat m = q * d.asDiagonal() * q.transpose();
  return SymMatrix((m + m.transpose()) / 2.0);
}

SymMatrix random_symmetric(int n, std::uint64_t seed) {
  Rng rng(seed);
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = rng.gaussian();
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return SymMatrix(std::move(m));
}

Mat complex_structure(int n) {
  if (n % 2 != 0) {
    throw dimension_error("complex structure requires even dimension");
  }
  Mat j = Mat::Zero(n, n);
  for (int k = 0; k < n / 2; ++k) {
    j(2 * k + 1, 2 * k) = 1.0;   // J e_{2k} = e_{2k+1}
    j(2 * k, 2 * k + 1) = -1.0;  // J e_{2k+1} = -e_{2k}
  }
  return j;
}

SkewPart skew_hermitian_part(const SymMatrix& A) {
  const int n = A.n();
  if (n % 2 != 0) {
    throw dimension_error("skew_hermitian_part requires even dimension");
  }
  const Mat j = complex_structure(n);
  Mat askm = 0.5 * (A.mat() + j * A.mat() * j);
  SkewPart out;
  out.a_sk = SymMatrix((askm + askm.transpose()) / 2.0);
  // A_sk anticommutes with J, so its spectrum comes in +- pairs; report the
  // m nonnegative ones, nonincreasing.
  const SpectralDecomposition d = sym_eigen(out.a_sk);
  out.nonneg_eigs = d.eigenvalues.head(n / 2);
  return out;
}

// ---- JSON interchange ----

SymMatrix matrix_from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw dimension_error(std::string("matrix JSON parse error: ") + e.what());
  }
  if (!doc.is_array() || doc.empty()) {
    throw dimension_error("matrix JSON must be a nonempty array of rows");
  }
  const int n = static_cast<int>(doc.size());
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    if (!doc[i].is_array() || static_cast<int>(doc[i].size()) != n) {
      throw dimension_error("matrix JSON rows must all have length n");
    }
    for (int j = 0; j < n; ++j) {
      if (!doc[i][j].is_number()) {
        throw dimension_error("matrix JSON entries must be numbers");
      }
      m(i, j) = doc[i][j].get<double>();
    }
  }
  return SymMatrix(std::move(m));  // symmetry checked at 1e-12 on ingest
}

std::string matrix_to_json_text(const SymMatrix& A) {
  return JsonValue::matrix(A.mat()).dump();
}

}  // namespace garding
