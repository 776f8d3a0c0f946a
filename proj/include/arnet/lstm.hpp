#ifndef ARNET_LSTM_HPP
#define ARNET_LSTM_HPP

#include <utility>

#include "arnet/tensor.hpp"

namespace arnet {

/// Single-layer LSTM parameters. `w` stacks the four gate blocks over the
/// concatenated input (x; h_prev); the row-block order [i; f; o; g] is a
/// frozen layout contract so checkpoints stay portable.
struct LstmParams {
  std::size_t input_dim = 0;   // D
  std::size_t hidden_dim = 0;  // H
  Matrix w;                    // (4H) x (D + H)
  Vector b;                    // 4H

  static LstmParams zeros(std::size_t input_dim, std::size_t hidden_dim);

  /// Uniform [-bound, bound] weights, forget-gate bias forget_bias, other
  /// biases 0. With orthogonal_recurrent, each gate's H x H recurrent block
  /// is an orthogonal matrix instead (helps very long unrolls).
  static LstmParams init(std::size_t input_dim, std::size_t hidden_dim,
                         double bound, double forget_bias, RngStream& rng,
                         bool orthogonal_recurrent = false);

  void check_shapes(const char* who) const;
};

struct LstmState {
  Vector h;
  Vector c;

  LstmState() = default;
  explicit LstmState(std::size_t hidden_dim) : h(hidden_dim), c(hidden_dim) {}
};

/// Everything the backward pass needs to differentiate one step exactly.
struct LstmStepCache {
  Vector x, h_prev, c_prev;
  Vector i, f, o, g;  // post-activation gates
  Vector c;           // new cell value
  Vector dropout_mask;  // scaled candidate mask; empty when inactive
};

std::pair<LstmState, LstmStepCache> lstm_step(const LstmParams& params,
                                              const Vector& x,
                                              const LstmState& state);

/// Accumulates (+=) parameter gradients into `grads`; writes dx, dh_prev,
/// dc_prev for the upstream gradients (dh, dc) of this step's outputs.
void lstm_step_backward(const LstmParams& params, const LstmStepCache& cache,
                        const Vector& dh, const Vector& dc, LstmParams& grads,
                        Vector& dx, Vector& dh_prev, Vector& dc_prev);

// ---- baseline regularizers ----

enum class RegularizerMode { None, Zoneout, RecurrentDropout };

struct RegularizerConfig {
  RegularizerMode mode = RegularizerMode::None;
  double zoneout_rate_h = 0.1;
  double zoneout_rate_c = 0.1;
  double dropout_rate = 0.1;

  void validate() const;
};

/// Training: per-unit Bernoulli(rate) keeps the previous value, else the new
/// one, independently for h and c. Inference: deterministic expected blend.
LstmState apply_zoneout(const LstmState& prev, const LstmState& next,
                        const RegularizerConfig& cfg, RngStream& rng,
                        bool training);

/// Bernoulli masks for one zoneout step (training). Entries are 1 where the
/// previous value is kept. Exposed so training loops can backpropagate.
struct ZoneoutMasks {
  Vector keep_h;
  Vector keep_c;
};
ZoneoutMasks draw_zoneout_masks(std::size_t hidden_dim,
                                const RegularizerConfig& cfg, RngStream& rng);

/// Inverted dropout on the candidate update: training zeroes each unit with
/// probability rate and scales survivors by 1/(1-rate); inference is identity.
Vector apply_recurrent_dropout(const Vector& g, double rate, RngStream& rng,
                               bool training);

/// Scaled candidate mask (values 0 or 1/(1-rate)) for in-cell use.
Vector draw_dropout_mask(std::size_t hidden_dim, double rate, RngStream& rng);

/// lstm_step with a pre-drawn scaled candidate mask applied to g.
std::pair<LstmState, LstmStepCache> lstm_step_dropout(
    const LstmParams& params, const Vector& x, const LstmState& state,
    const Vector& scaled_mask);

// ---- batched kernels (one GEMM per step over a minibatch) ----
//
// Rows are examples. Mathematically identical to mapping lstm_step over the
// rows; used by the trainers where per-example GEMVs would dominate runtime.

struct LstmBatchCache {
  Matrix z;       // B x (D+H): [x | h_prev]
  Matrix c_prev;  // B x H
  Matrix i, f, o, g, c;
  Matrix dropout_mask;  // scaled; empty when inactive
};

void lstm_step_batch(const LstmParams& params, const Matrix& x,
                     const Matrix& h_prev, const Matrix& c_prev, Matrix& h_out,
                     Matrix& c_out, LstmBatchCache& cache,
                     const Matrix* scaled_dropout_mask = nullptr);

/// dx may be null when the input gradient is not needed (e.g. pixels).
void lstm_step_batch_backward(const LstmParams& params,
                              const LstmBatchCache& cache, const Matrix& dh,
                              const Matrix& dc, LstmParams& grads, Matrix* dx,
                              Matrix& dh_prev, Matrix& dc_prev);

}  // namespace arnet

#endif  // ARNET_LSTM_HPP
