#ifndef ARNET_RECONSTRUCTOR_HPP
#define ARNET_RECONSTRUCTOR_HPP

#include <tuple>
#include <vector>

#include "arnet/lstm.hpp"
#include "arnet/tensor.hpp"

namespace arnet {

/// Auto-reconstructor: an LSTM fed the decoder's hidden-state sequence, with
/// a fully-connected readout that predicts the previous hidden state from the
/// current one.
struct ArnetParams {
  LstmParams cell;  // input_dim = H_dec, hidden_dim = H_ar
  Matrix w_fc;      // H_dec x H_ar
  Vector b_fc;      // H_dec

  static ArnetParams zeros(std::size_t dec_hidden, std::size_t ar_hidden);
  static ArnetParams init(std::size_t dec_hidden, std::size_t ar_hidden,
                          double bound, double forget_bias, RngStream& rng);
};

using ArnetState = LstmState;

struct ArnetStepCache {
  LstmStepCache cell;
  Vector hidden;         // h' after this step
  Vector reconstructed;  // w_fc h' + b_fc
};

/// One reconstruction step: consume decoder hidden h_t, emit the estimate of
/// h_{t-1}.
std::tuple<ArnetState, Vector, ArnetStepCache> arnet_step(
    const ArnetParams& params, const Vector& h_t, const ArnetState& state);

/// Squared Euclidean distance, no averaging.
double arnet_loss(const Vector& reconstructed, const Vector& h_prev);

struct ArnetSequenceResult {
  double total = 0.0;
  std::vector<double> per_step;    // loss terms for t = 2..N
  std::vector<Vector> d_hiddens;   // dL/dh_t for every input hidden state
};

/// Runs the reconstructor over decoder hiddens h_1..h_N (inputs at t = 2..N,
/// targets h_1..h_{N-1}), accumulates parameter gradients into `grads`, and
/// returns the total loss plus gradients w.r.t. every h_t. N < 2 yields a
/// defined zero result.
ArnetSequenceResult arnet_sequence_pass(const ArnetParams& params,
                                        const std::vector<Vector>& hiddens,
                                        ArnetParams& grads);

/// Forward-only variant (no gradients); same loss value.
double arnet_sequence_loss(const ArnetParams& params,
                           const std::vector<Vector>& hiddens);

/// Batched pass over T matrices of shape B x H_dec (rows are examples).
/// Returns the loss summed over batch rows and time; fills d_hiddens.
double arnet_sequence_pass_batch(const ArnetParams& params,
                                 const std::vector<Matrix>& hiddens,
                                 ArnetParams& grads,
                                 std::vector<Matrix>& d_hiddens);

}  // namespace arnet

#endif  // ARNET_RECONSTRUCTOR_HPP
