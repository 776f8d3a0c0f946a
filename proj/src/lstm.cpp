#include "arnet/lstm.hpp"

#include <cmath>
#include <string>

namespace arnet {

LstmParams LstmParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
  LstmParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.w = Matrix(4 * hidden_dim, input_dim + hidden_dim);
  p.b = Vector(4 * hidden_dim);
  return p;
}

LstmParams LstmParams::init(std::size_t input_dim, std::size_t hidden_dim,
                            double bound, double forget_bias, RngStream& rng,
                            bool orthogonal_recurrent) {
  LstmParams p = zeros(input_dim, hidden_dim);
  p.w = init_uniform(4 * hidden_dim, input_dim + hidden_dim, bound, rng);
  if (orthogonal_recurrent) {
    for (std::size_t gate = 0; gate < 4; ++gate) {
      Matrix q = init_orthogonal(hidden_dim, rng);
      for (std::size_t r = 0; r < hidden_dim; ++r)
        for (std::size_t c = 0; c < hidden_dim; ++c)
          p.w.at(gate * hidden_dim + r, input_dim + c) = q.at(r, c);
    }
  }
  for (std::size_t j = 0; j < hidden_dim; ++j) p.b[hidden_dim + j] = forget_bias;
  return p;
}

void LstmParams::check_shapes(const char* who) const {
  require(w.rows == 4 * hidden_dim && w.cols == input_dim + hidden_dim,
          std::string(who) + ": weight matrix is " + std::to_string(w.rows) +
              "x" + std::to_string(w.cols) + ", expected " +
              std::to_string(4 * hidden_dim) + "x" +
              std::to_string(input_dim + hidden_dim));
  require(b.len() == 4 * hidden_dim, std::string(who) + ": bias length mismatch");
}

namespace {

// Pre-activations for the concatenated input (x; h_prev).
Vector gate_preacts(const LstmParams& p, const Vector& x, const Vector& h_prev) {
  Vector z(p.input_dim + p.hidden_dim);
  for (std::size_t i = 0; i < p.input_dim; ++i) z[i] = x[i];
  for (std::size_t i = 0; i < p.hidden_dim; ++i) z[p.input_dim + i] = h_prev[i];
  return affine(p.w, z, p.b);
}

}  // namespace

std::pair<LstmState, LstmStepCache> lstm_step(const LstmParams& params,
                                              const Vector& x,
                                              const LstmState& state) {
  params.check_shapes("lstm_step");
  require(x.len() == params.input_dim,
          "lstm_step: input length " + std::to_string(x.len()) + " vs D=" +
              std::to_string(params.input_dim));
  require(state.h.len() == params.hidden_dim && state.c.len() == params.hidden_dim,
          "lstm_step: state length vs H=" + std::to_string(params.hidden_dim));

  const std::size_t H = params.hidden_dim;
  Vector pre = gate_preacts(params, x, state.h);

  LstmStepCache cache;
  cache.x = x;
  cache.h_prev = state.h;
  cache.c_prev = state.c;
  cache.i = Vector(H);
  cache.f = Vector(H);
  cache.o = Vector(H);
  cache.g = Vector(H);
  cache.c = Vector(H);

  LstmState out(H);
  for (std::size_t j = 0; j < H; ++j) {
    cache.i[j] = sigmoid_scalar(pre[j]);
    cache.f[j] = sigmoid_scalar(pre[H + j]);
    cache.o[j] = sigmoid_scalar(pre[2 * H + j]);
    cache.g[j] = std::tanh(pre[3 * H + j]);
    cache.c[j] = cache.f[j] * state.c[j] + cache.i[j] * cache.g[j];
    out.c[j] = cache.c[j];
    out.h[j] = cache.o[j] * std::tanh(cache.c[j]);
  }
  return {out, cache};
}

std::pair<LstmState, LstmStepCache> lstm_step_dropout(
    const LstmParams& params, const Vector& x, const LstmState& state,
    const Vector& scaled_mask) {
  require(scaled_mask.len() == params.hidden_dim,
          "lstm_step_dropout: mask length mismatch");
  auto [out, cache] = lstm_step(params, x, state);
  const std::size_t H = params.hidden_dim;
  cache.dropout_mask = scaled_mask;
  for (std::size_t j = 0; j < H; ++j) {
    cache.c[j] = cache.f[j] * cache.c_prev[j] + cache.i[j] * cache.g[j] * scaled_mask[j];
    out.c[j] = cache.c[j];
    out.h[j] = cache.o[j] * std::tanh(cache.c[j]);
  }
  return {out, cache};
}

void lstm_step_backward(const LstmParams& params, const LstmStepCache& cache,
                        const Vector& dh, const Vector& dc, LstmParams& grads,
                        Vector& dx, Vector& dh_prev, Vector& dc_prev) {
  params.check_shapes("lstm_step_backward");
  const std::size_t H = params.hidden_dim;
  const std::size_t D = params.input_dim;
  require(dh.len() == H && dc.len() == H, "lstm_step_backward: upstream length");
  require(cache.i.len() == H && cache.x.len() == D,
          "lstm_step_backward: cache does not match params");
  require(grads.w.rows == params.w.rows && grads.w.cols == params.w.cols,
          "lstm_step_backward: grads shape");

  const bool masked = cache.dropout_mask.len() == H;
  Vector dpre(4 * H);
  Vector dct(H);
  for (std::size_t j = 0; j < H; ++j) {
    double tc = std::tanh(cache.c[j]);
    double dcj = dc[j] + dh[j] * cache.o[j] * (1.0 - tc * tc);
    dct[j] = dcj;
    double g_eff = masked ? cache.g[j] * cache.dropout_mask[j] : cache.g[j];
    double di = dcj * g_eff;
    double df = dcj * cache.c_prev[j];
    double do_ = dh[j] * tc;
    double dg = dcj * cache.i[j] * (masked ? cache.dropout_mask[j] : 1.0);
    dpre[j] = di * cache.i[j] * (1.0 - cache.i[j]);
    dpre[H + j] = df * cache.f[j] * (1.0 - cache.f[j]);
    dpre[2 * H + j] = do_ * cache.o[j] * (1.0 - cache.o[j]);
    dpre[3 * H + j] = dg * (1.0 - cache.g[j] * cache.g[j]);
    dc_prev[j] = dcj * cache.f[j];
  }

  // dW += dpre (outer) [x; h_prev]; db += dpre; d[x;h] = W^T dpre
  Vector z(D + H);
  for (std::size_t i = 0; i < D; ++i) z[i] = cache.x[i];
  for (std::size_t i = 0; i < H; ++i) z[D + i] = cache.h_prev[i];
  for (std::size_t r = 0; r < 4 * H; ++r) {
    double* wrow = grads.w.row(r);
    double dp = dpre[r];
    if (dp != 0.0) {
      for (std::size_t cidx = 0; cidx < D + H; ++cidx) wrow[cidx] += dp * z[cidx];
    }
    grads.b[r] += dp;
  }
  Vector dz(D + H);
  gemv(1.0, params.w, true, dpre, 0.0, dz);
  dx = Vector(D);
  dh_prev = Vector(H);
  for (std::size_t i = 0; i < D; ++i) dx[i] = dz[i];
  for (std::size_t i = 0; i < H; ++i) dh_prev[i] = dz[D + i];
}

void RegularizerConfig::validate() const {
  auto in01 = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!in01(zoneout_rate_h) || !in01(zoneout_rate_c))
    throw std::invalid_argument("zoneout rates must lie in [0, 1]");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
    throw std::invalid_argument("recurrent dropout rate must lie in [0, 1)");
}

LstmState apply_zoneout(const LstmState& prev, const LstmState& next,
                        const RegularizerConfig& cfg, RngStream& rng,
                        bool training) {
  require(prev.h.len() == next.h.len() && prev.c.len() == next.c.len(),
          "apply_zoneout: state shape mismatch");
  cfg.validate();
  const std::size_t H = next.h.len();
  LstmState out(H);
  if (training) {
    for (std::size_t j = 0; j < H; ++j)
      out.h[j] = rng.bernoulli(cfg.zoneout_rate_h) ? prev.h[j] : next.h[j];
    for (std::size_t j = 0; j < H; ++j)
      out.c[j] = rng.bernoulli(cfg.zoneout_rate_c) ? prev.c[j] : next.c[j];
  } else {
    for (std::size_t j = 0; j < H; ++j)
      out.h[j] = cfg.zoneout_rate_h * prev.h[j] + (1.0 - cfg.zoneout_rate_h) * next.h[j];
    for (std::size_t j = 0; j < H; ++j)
      out.c[j] = cfg.zoneout_rate_c * prev.c[j] + (1.0 - cfg.zoneout_rate_c) * next.c[j];
  }
  return out;
}

ZoneoutMasks draw_zoneout_masks(std::size_t hidden_dim,
                                const RegularizerConfig& cfg, RngStream& rng) {
  ZoneoutMasks m;
  m.keep_h = Vector(hidden_dim);
  m.keep_c = Vector(hidden_dim);
  for (std::size_t j = 0; j < hidden_dim; ++j)
    m.keep_h[j] = rng.bernoulli(cfg.zoneout_rate_h) ? 1.0 : 0.0;
  for (std::size_t j = 0; j < hidden_dim; ++j)
    m.keep_c[j] = rng.bernoulli(cfg.zoneout_rate_c) ? 1.0 : 0.0;
  return m;
}

Vector apply_recurrent_dropout(const Vector& g, double rate, RngStream& rng,
                               bool training) {
  if (!(rate >= 0.0 && rate < 1.0))
    throw std::invalid_argument("recurrent dropout rate must lie in [0, 1)");
  if (!training || rate == 0.0) return g;
  Vector out(g.len());
  const double scale = 1.0 / (1.0 - rate);
  for (std::size_t j = 0; j < g.len(); ++j)
    out[j] = rng.bernoulli(rate) ? 0.0 : g[j] * scale;
  return out;
}

Vector draw_dropout_mask(std::size_t hidden_dim, double rate, RngStream& rng) {
  if (!(rate >= 0.0 && rate < 1.0))
    throw std::invalid_argument("recurrent dropout rate must lie in [0, 1)");
  Vector m(hidden_dim);
  const double scale = 1.0 / (1.0 - rate);
  for (std::size_t j = 0; j < hidden_dim; ++j)
    m[j] = rng.bernoulli(rate) ? 0.0 : scale;
  return m;
}

// ---- batched ----

void lstm_step_batch(const LstmParams& params, const Matrix& x,
                     const Matrix& h_prev, const Matrix& c_prev, Matrix& h_out,
                     Matrix& c_out, LstmBatchCache& cache,
                     const Matrix* scaled_dropout_mask) {
  const std::size_t B = x.rows;
  const std::size_t D = params.input_dim;
  const std::size_t H = params.hidden_dim;
  require(x.cols == D && h_prev.rows == B && h_prev.cols == H &&
              c_prev.rows == B && c_prev.cols == H,
          "lstm_step_batch: input shapes");

  cache.z = Matrix(B, D + H);
  for (std::size_t r = 0; r < B; ++r) {
    double* zr = cache.z.row(r);
    const double* xr = x.row(r);
    const double* hr = h_prev.row(r);
    for (std::size_t i = 0; i < D; ++i) zr[i] = xr[i];
    for (std::size_t i = 0; i < H; ++i) zr[D + i] = hr[i];
  }
  Matrix pre(B, 4 * H);
  for (std::size_t r = 0; r < B; ++r) {
    double* pr = pre.row(r);
    for (std::size_t i = 0; i < 4 * H; ++i) pr[i] = params.b[i];
  }
  gemm(1.0, cache.z, false, params.w, true, 1.0, pre);

  cache.c_prev = c_prev;
  cache.i = Matrix(B, H);
  cache.f = Matrix(B, H);
  cache.o = Matrix(B, H);
  cache.g = Matrix(B, H);
  cache.c = Matrix(B, H);
  if (scaled_dropout_mask) cache.dropout_mask = *scaled_dropout_mask;
  else cache.dropout_mask = Matrix();

  h_out = Matrix(B, H);
  c_out = Matrix(B, H);
  for (std::size_t r = 0; r < B; ++r) {
    const double* pr = pre.row(r);
    const double* cp = c_prev.row(r);
    double* ir = cache.i.row(r);
    double* fr = cache.f.row(r);
    double* orow = cache.o.row(r);
    double* gr = cache.g.row(r);
    double* cr = cache.c.row(r);
    double* ho = h_out.row(r);
    double* co = c_out.row(r);
    const double* mask = scaled_dropout_mask ? scaled_dropout_mask->row(r) : nullptr;
    for (std::size_t j = 0; j < H; ++j) {
      ir[j] = sigmoid_scalar(pr[j]);
      fr[j] = sigmoid_scalar(pr[H + j]);
      orow[j] = sigmoid_scalar(pr[2 * H + j]);
      gr[j] = std::tanh(pr[3 * H + j]);
      double gv = mask ? gr[j] * mask[j] : gr[j];
      cr[j] = fr[j] * cp[j] + ir[j] * gv;
      co[j] = cr[j];
      ho[j] = orow[j] * std::tanh(cr[j]);
    }
  }
}

void lstm_step_batch_backward(const LstmParams& params,
                              const LstmBatchCache& cache, const Matrix& dh,
                              const Matrix& dc, LstmParams& grads, Matrix* dx,
                              Matrix& dh_prev, Matrix& dc_prev) {
  const std::size_t B = dh.rows;
  const std::size_t D = params.input_dim;
  const std::size_t H = params.hidden_dim;
  require(dh.cols == H && dc.rows == B && dc.cols == H,
          "lstm_step_batch_backward: upstream shapes");
  require(cache.z.rows == B && cache.z.cols == D + H,
          "lstm_step_batch_backward: cache does not match");

  const bool masked = cache.dropout_mask.rows == B;
  Matrix dpre(B, 4 * H);
  dc_prev = Matrix(B, H);
  for (std::size_t r = 0; r < B; ++r) {
    const double* dhr = dh.row(r);
    const double* dcr = dc.row(r);
    const double* ir = cache.i.row(r);
    const double* fr = cache.f.row(r);
    const double* orow = cache.o.row(r);
    const double* gr = cache.g.row(r);
    const double* cr = cache.c.row(r);
    const double* cp = cache.c_prev.row(r);
    const double* mask = masked ? cache.dropout_mask.row(r) : nullptr;
    double* dp = dpre.row(r);
    double* dcp = dc_prev.row(r);
    for (std::size_t j = 0; j < H; ++j) {
      double tc = std::tanh(cr[j]);
      double dcj = dcr[j] + dhr[j] * orow[j] * (1.0 - tc * tc);
      double g_eff = mask ? gr[j] * mask[j] : gr[j];
      double di = dcj * g_eff;
      double df = dcj * cp[j];
      double do_ = dhr[j] * tc;
      double dg = dcj * ir[j] * (mask ? mask[j] : 1.0);
      dp[j] = di * ir[j] * (1.0 - ir[j]);
      dp[H + j] = df * fr[j] * (1.0 - fr[j]);
      dp[2 * H + j] = do_ * orow[j] * (1.0 - orow[j]);
      dp[3 * H + j] = dg * (1.0 - gr[j] * gr[j]);
      dcp[j] = dcj * fr[j];
    }
  }

  gemm(1.0, dpre, true, cache.z, false, 1.0, grads.w);
  for (std::size_t r = 0; r < B; ++r) {
    const double* dp = dpre.row(r);
    for (std::size_t j = 0; j < 4 * H; ++j) grads.b[j] += dp[j];
  }
  Matrix dz(B, D + H);
  gemm(1.0, dpre, false, params.w, false, 0.0, dz);
  dh_prev = Matrix(B, H);
  if (dx) *dx = Matrix(B, D);
  for (std::size_t r = 0; r < B; ++r) {
    const double* dzr = dz.row(r);
    if (dx) {
      double* dxr = dx->row(r);
      for (std::size_t i = 0; i < D; ++i) dxr[i] = dzr[i];
    }
    double* dhp = dh_prev.row(r);
    for (std::size_t i = 0; i < H; ++i) dhp[i] = dzr[D + i];
  }
}

}  // namespace arnet
