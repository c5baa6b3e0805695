#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "areasearch/types.hpp"

namespace areasearch {

// Affine + tanh stack, final layer linear. Parameters live in one flat
// vector laid out per layer as weights (out x in, row-major) then biases.
struct MlpSpec {
  std::vector<int> sizes;

  void validate() const;
  size_t param_count() const;
  bool operator==(const MlpSpec&) const = default;
};

class Mlp {
 public:
  Mlp() = default;
  Mlp(MlpSpec spec, std::vector<double> params);

  // Scaled-uniform init; the output layer is shrunk by out_scale so initial
  // policies start near uniform.
  static Mlp init(MlpSpec spec, std::mt19937_64& rng, double out_scale = 0.01);

  const MlpSpec& spec() const { return spec_; }
  const std::vector<double>& params() const { return params_; }
  std::vector<double>& params() { return params_; }
  int input_dim() const { return spec_.sizes.front(); }
  int output_dim() const { return spec_.sizes.back(); }

  struct Cache {
    // activations[0] is the input; activations[l+1] the output of layer l
    // (post-tanh for hidden layers, linear for the last).
    std::vector<std::vector<double>> activations;
  };

  std::vector<double> forward(std::span<const double> input) const;
  std::vector<double> forward(std::span<const double> input, Cache& cache) const;

  // Accumulates d(loss)/d(params) into param_grad (same length as params);
  // optionally emits d(loss)/d(input).
  void backward(const Cache& cache, std::span<const double> output_grad,
                std::vector<double>& param_grad,
                std::vector<double>* input_grad = nullptr) const;

 private:
  MlpSpec spec_;
  std::vector<double> params_;
};

struct SoftmaxResult {
  double log_prob = 0;
  double entropy = 0;
  std::vector<double> probs;
  std::vector<double> grad_logits;  // d log pi(a) / d logits = onehot - p
};

SoftmaxResult softmax_logprob_entropy(std::span<const double> logits,
                                      int action_index);

// d entropy / d logits_j = -p_j * (log p_j + H).
std::vector<double> entropy_grad_logits(const SoftmaxResult& sm);

// Bias-corrected adaptive moment estimation.
struct Adam {
  double lr = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long t = 0;
  std::vector<double> m;
  std::vector<double> v;

  void step(std::vector<double>& params, std::span<const double> grad);
};

}  // namespace areasearch
