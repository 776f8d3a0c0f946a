#include "arnet/attention.hpp"

#include <cmath>
#include <string>

namespace arnet {

AttentionParams AttentionParams::zeros(std::size_t attn_dim, std::size_t src_dim,
                                       std::size_t query_dim) {
  AttentionParams p;
  p.attn_dim = attn_dim;
  p.w_src = Matrix(attn_dim, src_dim);
  p.w_query = Matrix(attn_dim, query_dim);
  p.v = Vector(attn_dim);
  return p;
}

AttentionParams AttentionParams::init(std::size_t attn_dim, std::size_t src_dim,
                                      std::size_t query_dim, double bound,
                                      RngStream& rng) {
  AttentionParams p;
  p.attn_dim = attn_dim;
  p.w_src = init_uniform(attn_dim, src_dim, bound, rng);
  p.w_query = init_uniform(attn_dim, query_dim, bound, rng);
  p.v = init_uniform_vec(attn_dim, bound, rng);
  return p;
}

void AttentionParams::check_shapes(const char* who) const {
  require(attn_dim >= 1, std::string(who) + ": attention dim must be >= 1");
  require(w_src.rows == attn_dim && w_query.rows == attn_dim && v.len() == attn_dim,
          std::string(who) + ": attention parameter shapes disagree");
}

AttendCache attend_cached(const AttentionParams& params,
                          const std::vector<Vector>& s, const Vector& h_prev) {
  params.check_shapes("attend");
  if (s.empty()) throw ShapeError("attend: source vector set must be nonempty");
  const std::size_t n = s.size();
  const std::size_t S = s[0].len();
  require(params.w_src.cols == S, "attend: w_src vs source dim");
  require(params.w_query.cols == h_prev.len(), "attend: w_query vs query dim");

  AttendCache cache;
  cache.scorer_tanh.resize(n);
  Vector scores(n);
  Vector query_part(params.attn_dim);
  gemv(1.0, params.w_query, false, h_prev, 0.0, query_part);
  for (std::size_t i = 0; i < n; ++i) {
    require(s[i].len() == S, "attend: source vectors must share one dimension");
    Vector pre = query_part;
    gemv(1.0, params.w_src, false, s[i], 1.0, pre);
    cache.scorer_tanh[i] = tanh_vec(pre);
    scores[i] = dot(params.v, cache.scorer_tanh[i]);
  }
  cache.weights = softmax(scores);
  cache.z = Vector(S);
  for (std::size_t i = 0; i < n; ++i) axpy(cache.weights[i], s[i], cache.z);
  return cache;
}

std::pair<Vector, Vector> attend(const AttentionParams& params,
                                 const std::vector<Vector>& s,
                                 const Vector& h_prev) {
  AttendCache cache = attend_cached(params, s, h_prev);
  return {cache.z, cache.weights};
}

void attend_backward(const AttentionParams& params, const std::vector<Vector>& s,
                     const Vector& h_prev, const AttendCache& cache,
                     const Vector& dz, AttentionParams& grads, Vector& dh_prev,
                     std::vector<Vector>& ds) {
  const std::size_t n = s.size();
  const std::size_t S = s[0].len();
  require(dz.len() == S, "attend_backward: dz dim");
  require(ds.size() == n, "attend_backward: ds size");

  // Convex-combination path and per-source score sensitivity.
  Vector dscore_raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    axpy(cache.weights[i], dz, ds[i]);
    dscore_raw[i] = dot(dz, s[i]);
  }
  // Softmax Jacobian: de_i = w_i (r_i - sum_j w_j r_j).
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += cache.weights[i] * dscore_raw[i];
  Vector de(n);
  for (std::size_t i = 0; i < n; ++i)
    de[i] = cache.weights[i] * (dscore_raw[i] - mean);

  Vector dpre_sum(params.attn_dim);
  for (std::size_t i = 0; i < n; ++i) {
    if (de[i] == 0.0) continue;
    const Vector& t = cache.scorer_tanh[i];
    axpy(de[i], t, grads.v);
    Vector dpre(params.attn_dim);
    for (std::size_t a = 0; a < params.attn_dim; ++a)
      dpre[a] = de[i] * params.v[a] * (1.0 - t[a] * t[a]);
    // dW_src += dpre (outer) s_i; ds_i += w_src^T dpre
    for (std::size_t a = 0; a < params.attn_dim; ++a) {
      double* row = grads.w_src.row(a);
      const double dp = dpre[a];
      for (std::size_t k = 0; k < S; ++k) row[k] += dp * s[i][k];
    }
    gemv(1.0, params.w_src, true, dpre, 1.0, ds[i]);
    axpy(1.0, dpre, dpre_sum);
  }
  // Query path, shared across all sources.
  for (std::size_t a = 0; a < params.attn_dim; ++a) {
    double* row = grads.w_query.row(a);
    const double dp = dpre_sum[a];
    if (dp != 0.0)
      for (std::size_t k = 0; k < h_prev.len(); ++k) row[k] += dp * h_prev[k];
  }
  gemv(1.0, params.w_query, true, dpre_sum, 1.0, dh_prev);
}

std::pair<LstmState, AttentiveStepCache> attentive_lstm_step(
    const LstmParams& cell, const AttentionParams& attn, const Vector& x,
    const std::vector<Vector>& s, const LstmState& state) {
  AttentiveStepCache cache;
  cache.attn = attend_cached(attn, s, state.h);
  const std::size_t S = cache.attn.z.len();
  require(cell.input_dim == x.len() + S,
          "attentive_lstm_step: cell input_dim must equal len(x) + len(z)");
  Vector xz(x.len() + S);
  for (std::size_t i = 0; i < x.len(); ++i) xz[i] = x[i];
  for (std::size_t i = 0; i < S; ++i) xz[x.len() + i] = cache.attn.z[i];
  auto [out, cell_cache] = lstm_step(cell, xz, state);
  cache.cell = std::move(cell_cache);
  return {out, cache};
}

void attentive_lstm_step_backward(
    const LstmParams& cell, const AttentionParams& attn,
    const AttentiveStepCache& cache, const std::vector<Vector>& s,
    const Vector& dh, const Vector& dc, LstmParams& cell_grads,
    AttentionParams& attn_grads, Vector& dx, Vector& dh_prev, Vector& dc_prev,
    std::vector<Vector>& ds) {
  Vector dxz, dh_prev_cell;
  lstm_step_backward(cell, cache.cell, dh, dc, cell_grads, dxz, dh_prev_cell,
                     dc_prev);
  const std::size_t S = cache.attn.z.len();
  const std::size_t xd = cell.input_dim - S;
  dx = Vector(xd);
  for (std::size_t i = 0; i < xd; ++i) dx[i] = dxz[i];
  Vector dz(S);
  for (std::size_t i = 0; i < S; ++i) dz[i] = dxz[xd + i];

  dh_prev = dh_prev_cell;
  attend_backward(attn, s, cache.cell.h_prev, cache.attn, dz, attn_grads,
                  dh_prev, ds);
}

}  // namespace arnet
