#include "arnet/reconstructor.hpp"

#include <cmath>

namespace arnet {

ArnetParams ArnetParams::zeros(std::size_t dec_hidden, std::size_t ar_hidden) {
  ArnetParams p;
  p.cell = LstmParams::zeros(dec_hidden, ar_hidden);
  p.w_fc = Matrix(dec_hidden, ar_hidden);
  p.b_fc = Vector(dec_hidden);
  return p;
}

ArnetParams ArnetParams::init(std::size_t dec_hidden, std::size_t ar_hidden,
                              double bound, double forget_bias, RngStream& rng) {
  ArnetParams p;
  p.cell = LstmParams::init(dec_hidden, ar_hidden, bound, forget_bias, rng);
  p.w_fc = init_uniform(dec_hidden, ar_hidden, bound, rng);
  p.b_fc = Vector(dec_hidden);
  return p;
}

std::tuple<ArnetState, Vector, ArnetStepCache> arnet_step(
    const ArnetParams& params, const Vector& h_t, const ArnetState& state) {
  require(params.w_fc.cols == params.cell.hidden_dim &&
              params.w_fc.rows == params.cell.input_dim &&
              params.b_fc.len() == params.cell.input_dim,
          "arnet_step: readout shape does not match cell");
  auto [next, cell_cache] = lstm_step(params.cell, h_t, state);
  ArnetStepCache cache;
  cache.cell = std::move(cell_cache);
  cache.hidden = next.h;
  cache.reconstructed = affine(params.w_fc, next.h, params.b_fc);
  return {next, cache.reconstructed, std::move(cache)};
}

double arnet_loss(const Vector& reconstructed, const Vector& h_prev) {
  require(reconstructed.len() == h_prev.len(), "arnet_loss: dimension mismatch");
  double total = 0.0;
  for (std::size_t j = 0; j < h_prev.len(); ++j) {
    double d = h_prev[j] - reconstructed[j];
    total += d * d;
  }
  return total;
}

ArnetSequenceResult arnet_sequence_pass(const ArnetParams& params,
                                        const std::vector<Vector>& hiddens,
                                        ArnetParams& grads) {
  const std::size_t n = hiddens.size();
  const std::size_t h_dec = params.cell.input_dim;
  const std::size_t h_ar = params.cell.hidden_dim;

  ArnetSequenceResult result;
  result.d_hiddens.assign(n, Vector(h_dec));
  if (n < 2) return result;

  std::vector<ArnetStepCache> caches;
  caches.reserve(n - 1);
  ArnetState state(h_ar);
  for (std::size_t t = 1; t < n; ++t) {
    auto [next, recon, cache] = arnet_step(params, hiddens[t], state);
    state = next;
    result.per_step.push_back(arnet_loss(recon, hiddens[t - 1]));
    result.total += result.per_step.back();
    caches.push_back(std::move(cache));
  }

  Vector dh_next(h_ar);
  Vector dc_next(h_ar);
  for (std::size_t t = n - 1; t >= 1; --t) {
    const ArnetStepCache& cache = caches[t - 1];
    const Vector& target = hiddens[t - 1];
    const Vector& recon = cache.reconstructed;

    // d loss / d recon = 2 (recon - target); target side gets the negative.
    Vector drecon(h_dec);
    for (std::size_t j = 0; j < h_dec; ++j) {
      double diff = recon[j] - target[j];
      drecon[j] = 2.0 * diff;
      result.d_hiddens[t - 1][j] += -2.0 * diff;
    }
    Vector dh = dh_next;
    gemv(1.0, params.w_fc, true, drecon, 1.0, dh);
    for (std::size_t r = 0; r < h_dec; ++r) {
      double* row = grads.w_fc.row(r);
      const double dr = drecon[r];
      if (dr != 0.0)
        for (std::size_t cidx = 0; cidx < h_ar; ++cidx)
          row[cidx] += dr * cache.hidden[cidx];
      grads.b_fc[r] += dr;
    }

    Vector dx, dh_prev, dc_prev;
    lstm_step_backward(params.cell, cache.cell, dh, dc_next, grads.cell, dx,
                       dh_prev, dc_prev);
    axpy(1.0, dx, result.d_hiddens[t]);
    dh_next = dh_prev;
    dc_next = dc_prev;
  }
  return result;
}

double arnet_sequence_loss(const ArnetParams& params,
                           const std::vector<Vector>& hiddens) {
  const std::size_t n = hiddens.size();
  if (n < 2) return 0.0;
  double total = 0.0;
  ArnetState state(params.cell.hidden_dim);
  for (std::size_t t = 1; t < n; ++t) {
    auto [next, recon, cache] = arnet_step(params, hiddens[t], state);
    (void)cache;
    state = next;
    total += arnet_loss(recon, hiddens[t - 1]);
  }
  return total;
}

double arnet_sequence_pass_batch(const ArnetParams& params,
                                 const std::vector<Matrix>& hiddens,
                                 ArnetParams& grads,
                                 std::vector<Matrix>& d_hiddens) {
  const std::size_t n = hiddens.size();
  const std::size_t h_dec = params.cell.input_dim;
  const std::size_t h_ar = params.cell.hidden_dim;

  d_hiddens.clear();
  if (n == 0) return 0.0;
  const std::size_t B = hiddens[0].rows;
  for (std::size_t t = 0; t < n; ++t) d_hiddens.emplace_back(B, h_dec);
  if (n < 2) return 0.0;

  std::vector<LstmBatchCache> caches(n - 1);
  std::vector<Matrix> ar_h(n);      // h' after consuming hiddens[t]
  std::vector<Matrix> recon(n);     // reconstruction emitted at step t
  Matrix h_state(B, h_ar), c_state(B, h_ar);
  double total = 0.0;
  for (std::size_t t = 1; t < n; ++t) {
    Matrix h_out, c_out;
    lstm_step_batch(params.cell, hiddens[t], h_state, c_state, h_out, c_out,
                    caches[t - 1]);
    h_state = h_out;
    c_state = c_out;
    ar_h[t] = h_state;
    recon[t] = Matrix(B, h_dec);
    for (std::size_t r = 0; r < B; ++r) {
      double* rr = recon[t].row(r);
      for (std::size_t j = 0; j < h_dec; ++j) rr[j] = params.b_fc[j];
    }
    gemm(1.0, ar_h[t], false, params.w_fc, true, 1.0, recon[t]);
    const Matrix& target = hiddens[t - 1];
    for (std::size_t r = 0; r < B; ++r) {
      const double* rr = recon[t].row(r);
      const double* tr = target.row(r);
      for (std::size_t j = 0; j < h_dec; ++j) {
        double d = tr[j] - rr[j];
        total += d * d;
      }
    }
  }

  Matrix dh_next(B, h_ar), dc_next(B, h_ar);
  for (std::size_t t = n - 1; t >= 1; --t) {
    const Matrix& target = hiddens[t - 1];
    Matrix drecon(B, h_dec);
    for (std::size_t r = 0; r < B; ++r) {
      const double* rr = recon[t].row(r);
      const double* tr = target.row(r);
      double* dr = drecon.row(r);
      double* dtgt = d_hiddens[t - 1].row(r);
      for (std::size_t j = 0; j < h_dec; ++j) {
        double diff = rr[j] - tr[j];
        dr[j] = 2.0 * diff;
        dtgt[j] += -2.0 * diff;
      }
    }
    // Readout: dW_fc += drecon^T ar_h; db_fc += col-sums; dh' += drecon W_fc.
    gemm(1.0, drecon, true, ar_h[t], false, 1.0, grads.w_fc);
    for (std::size_t r = 0; r < B; ++r) {
      const double* dr = drecon.row(r);
      for (std::size_t j = 0; j < h_dec; ++j) grads.b_fc[j] += dr[j];
    }
    Matrix dh = dh_next;
    gemm(1.0, drecon, false, params.w_fc, false, 1.0, dh);

    Matrix dx(B, h_dec), dh_prev, dc_prev;
    lstm_step_batch_backward(params.cell, caches[t - 1], dh, dc_next,
                             grads.cell, &dx, dh_prev, dc_prev);
    axpy(1.0, dx, d_hiddens[t]);
    dh_next = dh_prev;
    dc_next = dc_prev;
  }
  return total;
}

}  // namespace arnet
