#include "arnet/tensor.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>

namespace arnet {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t RngStream::next_u64() {
  counter += 1;
  return mix64(seed + counter * 0x9E3779B97F4A7C15ull);
}

double RngStream::uniform() {
  // 53 high bits -> double in [0, 1)
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
  // Rejection-free modulo is fine here: n is tiny relative to 2^64, the
  // bias is far below anything observable in these experiments.
  return next_u64() % n;
}

RngStream RngStream::fork(std::uint64_t tag) const {
  RngStream child;
  child.seed = mix64(seed ^ mix64(tag + 0x632BE59BD9B4E019ull));
  child.counter = 0;
  return child;
}

Vector affine(const Matrix& w, const Vector& x, const Vector& b) {
  require(w.cols == x.len(),
          "affine: W is " + std::to_string(w.rows) + "x" + std::to_string(w.cols) +
              " but x has length " + std::to_string(x.len()));
  require(w.rows == b.len(),
          "affine: W is " + std::to_string(w.rows) + "x" + std::to_string(w.cols) +
              " but b has length " + std::to_string(b.len()));
  Vector y = b;
  if (w.rows > 0 && w.cols > 0) {
    gemv(1.0, w, false, x, 1.0, y);
  }
  return y;
}

double sigmoid_scalar(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Vector sigmoid(const Vector& x) {
  Vector y(x.len());
  for (std::size_t i = 0; i < x.len(); ++i) y[i] = sigmoid_scalar(x[i]);
  return y;
}

Vector tanh_vec(const Vector& x) {
  Vector y(x.len());
  for (std::size_t i = 0; i < x.len(); ++i) y[i] = std::tanh(x[i]);
  return y;
}

Vector softmax(const Vector& x) {
  Vector y(x.len());
  if (x.len() == 0) return y;
  double mx = *std::max_element(x.data.begin(), x.data.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < x.len(); ++i) {
    y[i] = std::exp(x[i] - mx);
    sum += y[i];
  }
  for (std::size_t i = 0; i < x.len(); ++i) y[i] /= sum;
  return y;
}

Matrix init_uniform(std::size_t rows, std::size_t cols, double bound, RngStream& rng) {
  if (!(bound > 0.0)) throw std::invalid_argument("init_uniform: bound must be positive");
  Matrix m(rows, cols);
  for (double& v : m.data) v = rng.uniform(-bound, bound);
  return m;
}

Vector init_uniform_vec(std::size_t len, double bound, RngStream& rng) {
  if (!(bound > 0.0)) throw std::invalid_argument("init_uniform: bound must be positive");
  Vector v(len);
  for (double& x : v.data) x = rng.uniform(-bound, bound);
  return v;
}

Matrix init_orthogonal(std::size_t n, RngStream& rng) {
  Matrix a = init_uniform(n, n, 1.0, rng);
  // Modified Gram-Schmidt over rows.
  for (std::size_t i = 0; i < n; ++i) {
    double* ri = a.row(i);
    for (std::size_t j = 0; j < i; ++j) {
      const double* rj = a.row(j);
      double proj = cblas_ddot(static_cast<int>(n), ri, 1, rj, 1);
      cblas_daxpy(static_cast<int>(n), -proj, rj, 1, ri, 1);
    }
    double nrm = cblas_dnrm2(static_cast<int>(n), ri, 1);
    if (nrm < 1e-12) {
      // Degenerate draw; restart the row from fresh randomness.
      for (std::size_t k = 0; k < n; ++k) ri[k] = rng.uniform(-1.0, 1.0);
      --i;
      continue;
    }
    cblas_dscal(static_cast<int>(n), 1.0 / nrm, ri, 1);
  }
  return a;
}

void gemm(double alpha, const Matrix& a, bool trans_a, const Matrix& b,
          bool trans_b, double beta, Matrix& c) {
  const std::size_t am = trans_a ? a.cols : a.rows;
  const std::size_t ak = trans_a ? a.rows : a.cols;
  const std::size_t bk = trans_b ? b.cols : b.rows;
  const std::size_t bn = trans_b ? b.rows : b.cols;
  require(ak == bk, "gemm: inner dimensions " + std::to_string(ak) + " vs " +
                        std::to_string(bk));
  require(c.rows == am && c.cols == bn, "gemm: output shape mismatch");
  if (am == 0 || bn == 0) return;
  if (ak == 0) {
    if (beta == 0.0) c.fill(0.0);
    else for (double& v : c.data) v *= beta;
    return;
  }
  cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
              trans_b ? CblasTrans : CblasNoTrans, static_cast<int>(am),
              static_cast<int>(bn), static_cast<int>(ak), alpha, a.data.data(),
              static_cast<int>(a.cols), b.data.data(), static_cast<int>(b.cols),
              beta, c.data.data(), static_cast<int>(c.cols));
}

void gemv(double alpha, const Matrix& a, bool trans_a, const Vector& x,
          double beta, Vector& y) {
  const std::size_t m = trans_a ? a.cols : a.rows;
  const std::size_t n = trans_a ? a.rows : a.cols;
  require(x.len() == n, "gemv: x length " + std::to_string(x.len()) +
                            " vs expected " + std::to_string(n));
  require(y.len() == m, "gemv: y length " + std::to_string(y.len()) +
                            " vs expected " + std::to_string(m));
  if (m == 0) return;
  if (n == 0) {
    if (beta == 0.0) y.fill(0.0);
    else for (double& v : y.data) v *= beta;
    return;
  }
  cblas_dgemv(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
              static_cast<int>(a.rows), static_cast<int>(a.cols), alpha,
              a.data.data(), static_cast<int>(a.cols), x.data.data(), 1, beta,
              y.data.data(), 1);
}

void axpy(double alpha, const Vector& x, Vector& y) {
  require(x.len() == y.len(), "axpy: length mismatch");
  cblas_daxpy(static_cast<int>(x.len()), alpha, x.data.data(), 1, y.data.data(), 1);
}

void axpy(double alpha, const Matrix& x, Matrix& m) {
  require(x.rows == m.rows && x.cols == m.cols, "axpy: shape mismatch");
  cblas_daxpy(static_cast<int>(x.data.size()), alpha, x.data.data(), 1,
              m.data.data(), 1);
}

double dot(const Vector& a, const Vector& b) {
  require(a.len() == b.len(), "dot: length mismatch");
  return cblas_ddot(static_cast<int>(a.len()), a.data.data(), 1, b.data.data(), 1);
}

double norm2(const Vector& a) {
  return cblas_dnrm2(static_cast<int>(a.len()), a.data.data(), 1);
}

}  // namespace arnet
