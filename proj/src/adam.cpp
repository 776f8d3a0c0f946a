#include "arnet/adam.hpp"

#include <cmath>

namespace arnet {

TensorRef ref(const std::string& name, Matrix& m) {
  return TensorRef{name, m.data.data(), {m.rows, m.cols}};
}

TensorRef ref(const std::string& name, Vector& v) {
  return TensorRef{name, v.data.data(), {v.len()}};
}

double global_grad_norm(const std::vector<TensorRef>& grads) {
  double sq = 0.0;
  for (const TensorRef& g : grads)
    for (std::size_t i = 0; i < g.size(); ++i) sq += g.data[i] * g.data[i];
  return std::sqrt(sq);
}

void AdamOptimizer::step(double lr, double clip_norm,
                         const std::vector<TensorRef>& params,
                         const std::vector<TensorRef>& grads) {
  require(params.size() == grads.size(), "adam: params/grads count mismatch");
  double scale = 1.0;
  last_grad_norm = global_grad_norm(grads);
  if (clip_norm > 0.0 && last_grad_norm > clip_norm)
    scale = clip_norm / last_grad_norm;

  step_count += 1;
  const double b1 = cfg.beta1, b2 = cfg.beta2;
  const double bias1 = 1.0 - std::pow(b1, static_cast<double>(step_count));
  const double bias2 = 1.0 - std::pow(b2, static_cast<double>(step_count));

  for (std::size_t k = 0; k < params.size(); ++k) {
    const TensorRef& p = params[k];
    const TensorRef& g = grads[k];
    require(p.size() == g.size(), "adam: tensor size mismatch for " + p.name);
    std::vector<double>& mk = m[p.name];
    std::vector<double>& vk = v[p.name];
    if (mk.size() != p.size()) mk.assign(p.size(), 0.0);
    if (vk.size() != p.size()) vk.assign(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      double gi = g.data[i] * scale;
      mk[i] = b1 * mk[i] + (1.0 - b1) * gi;
      vk[i] = b2 * vk[i] + (1.0 - b2) * gi * gi;
      double mhat = mk[i] / bias1;
      double vhat = vk[i] / bias2;
      p.data[i] -= lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
}

}  // namespace arnet
