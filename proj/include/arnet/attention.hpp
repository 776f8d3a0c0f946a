#ifndef ARNET_ATTENTION_HPP
#define ARNET_ATTENTION_HPP

#include <utility>
#include <vector>

#include "arnet/lstm.hpp"
#include "arnet/tensor.hpp"

namespace arnet {

/// Additive attention scorer: score(s_i, h) = v . tanh(w_src s_i + w_query h).
struct AttentionParams {
  std::size_t attn_dim = 0;  // A
  Matrix w_src;              // A x S
  Matrix w_query;            // A x H
  Vector v;                  // A

  static AttentionParams zeros(std::size_t attn_dim, std::size_t src_dim,
                               std::size_t query_dim);
  static AttentionParams init(std::size_t attn_dim, std::size_t src_dim,
                              std::size_t query_dim, double bound,
                              RngStream& rng);
  void check_shapes(const char* who) const;
};

struct AttendCache {
  std::vector<Vector> scorer_tanh;  // t_i, one per source vector
  Vector weights;                   // n, sums to 1
  Vector z;                         // S
};

/// Softmax-normalized convex combination of the source vectors.
/// Returns (context z, weights).
std::pair<Vector, Vector> attend(const AttentionParams& params,
                                 const std::vector<Vector>& s,
                                 const Vector& h_prev);

AttendCache attend_cached(const AttentionParams& params,
                          const std::vector<Vector>& s, const Vector& h_prev);

/// Backward for one attend() call given dL/dz. Accumulates into grads and ds;
/// adds the query-path gradient into dh_prev.
void attend_backward(const AttentionParams& params, const std::vector<Vector>& s,
                     const Vector& h_prev, const AttendCache& cache,
                     const Vector& dz, AttentionParams& grads, Vector& dh_prev,
                     std::vector<Vector>& ds);

/// One decoder step where the gate blocks see (x; z_t; h_prev). The cell's
/// input_dim must equal len(x) + len(z); column layout within the cell weight
/// matrix is [x | z | h_prev].
struct AttentiveStepCache {
  AttendCache attn;
  LstmStepCache cell;
};

std::pair<LstmState, AttentiveStepCache> attentive_lstm_step(
    const LstmParams& cell, const AttentionParams& attn, const Vector& x,
    const std::vector<Vector>& s, const LstmState& state);

void attentive_lstm_step_backward(
    const LstmParams& cell, const AttentionParams& attn,
    const AttentiveStepCache& cache, const std::vector<Vector>& s,
    const Vector& dh, const Vector& dc, LstmParams& cell_grads,
    AttentionParams& attn_grads, Vector& dx, Vector& dh_prev, Vector& dc_prev,
    std::vector<Vector>& ds);

}  // namespace arnet

#endif  // ARNET_ATTENTION_HPP
