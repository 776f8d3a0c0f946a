#ifndef ARNET_ADAM_HPP
#define ARNET_ADAM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "arnet/tensor.hpp"

namespace arnet {

/// Non-owning view of a named parameter (or gradient) tensor.
struct TensorRef {
  std::string name;
  double* data = nullptr;
  std::vector<std::size_t> dims;

  std::size_t size() const {
    std::size_t n = 1;
    for (std::size_t d : dims) n *= d;
    return dims.empty() ? 1 : n;
  }
};

TensorRef ref(const std::string& name, Matrix& m);
TensorRef ref(const std::string& name, Vector& v);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with optional global-norm gradient clipping. Moment buffers are keyed
/// by tensor name so they serialize into checkpoints.
struct AdamOptimizer {
  AdamConfig cfg;
  std::int64_t step_count = 0;
  std::map<std::string, std::vector<double>> m;
  std::map<std::string, std::vector<double>> v;

  /// params[i] and grads[i] must alias tensors of identical shape.
  /// clip_norm <= 0 disables clipping.
  void step(double lr, double clip_norm, const std::vector<TensorRef>& params,
            const std::vector<TensorRef>& grads);

  double last_grad_norm = 0.0;
};

/// Euclidean norm over a whole gradient set.
double global_grad_norm(const std::vector<TensorRef>& grads);

}  // namespace arnet

#endif  // ARNET_ADAM_HPP
