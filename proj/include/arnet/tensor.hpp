#ifndef ARNET_TENSOR_HPP
#define ARNET_TENSOR_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace arnet {

/// Thrown on any dimension disagreement between operands.
struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on malformed external data (files, headers, ids out of range).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

struct Vector {
  std::vector<double> data;

  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : data(n, fill) {}
  Vector(std::initializer_list<double> init) : data(init) {}

  std::size_t len() const { return data.size(); }
  double& operator[](std::size_t i) { return data[i]; }
  double operator[](std::size_t i) const { return data[i]; }

  void fill(double v) { for (double& x : data) x = v; }
};

/// Dense row-major matrix of doubles. The only 2-D carrier in the project.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // rows * cols, row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }

  void fill(double v) { for (double& x : data) x = v; }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }
};

/// Deterministic counter-based random stream (splitmix64 core). Identical
/// seeds give identical draw sequences on every platform. Never share one
/// stream between concurrent workers; fork substreams instead.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;

  RngStream() = default;
  explicit RngStream(std::uint64_t s) : seed(s) {}

  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double uniform();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);

  /// True with probability p.
  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  /// Independent child stream; deterministic in (seed, tag).
  RngStream fork(std::uint64_t tag) const;
};

// ---- elementwise / linear primitives ----

/// result[i] = sum_j W[i][j] * x[j] + b[i]
Vector affine(const Matrix& w, const Vector& x, const Vector& b);

Vector sigmoid(const Vector& x);
Vector tanh_vec(const Vector& x);

double sigmoid_scalar(double x);

/// Max-subtracted stable softmax; entries sum to 1 within 1e-12.
Vector softmax(const Vector& x);

/// Entries i.i.d. uniform in [-bound, +bound]; deterministic given the stream.
Matrix init_uniform(std::size_t rows, std::size_t cols, double bound, RngStream& rng);
Vector init_uniform_vec(std::size_t len, double bound, RngStream& rng);

/// Square orthogonal matrix via modified Gram-Schmidt on a random base.
Matrix init_orthogonal(std::size_t n, RngStream& rng);

// ---- BLAS-backed dense kernels (row-major) ----

/// c = alpha * op(a) * op(b) + beta * c, where op is optional transpose.
void gemm(double alpha, const Matrix& a, bool trans_a, const Matrix& b,
          bool trans_b, double beta, Matrix& c);

/// y = alpha * op(a) * x + beta * y
void gemv(double alpha, const Matrix& a, bool trans_a, const Vector& x,
          double beta, Vector& y);

/// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);
void axpy(double alpha, const Matrix& x, Matrix& m);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);

inline void require(bool ok, const std::string& message) {
  if (!ok) throw ShapeError(message);
}

}  // namespace arnet

#endif  // ARNET_TENSOR_HPP
