#include "areasearch/nn.hpp"

#include <algorithm>
#include <cmath>

namespace areasearch {

void MlpSpec::validate() const {
  if (sizes.size() < 2)
    throw ConfigError("an MLP needs at least input and output layers");
  for (int s : sizes)
    if (s < 1) throw ConfigError("layer sizes must be positive");
}

size_t MlpSpec::param_count() const {
  size_t n = 0;
  for (size_t l = 0; l + 1 < sizes.size(); ++l)
    n += static_cast<size_t>(sizes[l] + 1) * sizes[l + 1];
  return n;
}

Mlp::Mlp(MlpSpec spec, std::vector<double> params)
    : spec_(std::move(spec)), params_(std::move(params)) {
  spec_.validate();
  if (params_.size() != spec_.param_count())
    throw ShapeMismatch("parameter vector length does not match spec");
}

Mlp Mlp::init(MlpSpec spec, std::mt19937_64& rng, double out_scale) {
  spec.validate();
  std::vector<double> params(spec.param_count());
  size_t off = 0;
  const size_t layers = spec.sizes.size() - 1;
  for (size_t l = 0; l < layers; ++l) {
    const int nin = spec.sizes[l], nout = spec.sizes[l + 1];
    double bound = std::sqrt(6.0 / (nin + nout));
    if (l + 1 == layers) bound *= out_scale;
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (int i = 0; i < nin * nout; ++i) params[off++] = dist(rng);
    off += nout;  // biases start at zero
  }
  return Mlp(std::move(spec), std::move(params));
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  Cache cache;
  return forward(input, cache);
}

std::vector<double> Mlp::forward(std::span<const double> input,
                                 Cache& cache) const {
  if (static_cast<int>(input.size()) != input_dim())
    throw ShapeMismatch("input length does not match first layer size");
  const size_t layers = spec_.sizes.size() - 1;
  cache.activations.assign(layers + 1, {});
  cache.activations[0].assign(input.begin(), input.end());
  size_t off = 0;
  for (size_t l = 0; l < layers; ++l) {
    const int nin = spec_.sizes[l], nout = spec_.sizes[l + 1];
    const double* w = params_.data() + off;
    const double* b = w + static_cast<size_t>(nin) * nout;
    const std::vector<double>& x = cache.activations[l];
    std::vector<double>& y = cache.activations[l + 1];
    y.resize(nout);
    for (int o = 0; o < nout; ++o) {
      double s = b[o];
      const double* row = w + static_cast<size_t>(o) * nin;
      for (int i = 0; i < nin; ++i) s += row[i] * x[i];
      y[o] = (l + 1 == layers) ? s : std::tanh(s);
    }
    off += static_cast<size_t>(nin + 1) * nout;
  }
  return cache.activations.back();
}

void Mlp::backward(const Cache& cache, std::span<const double> output_grad,
                   std::vector<double>& param_grad,
                   std::vector<double>* input_grad) const {
  const size_t layers = spec_.sizes.size() - 1;
  if (cache.activations.size() != layers + 1)
    throw ShapeMismatch("cache does not match network depth");
  if (static_cast<int>(output_grad.size()) != output_dim())
    throw ShapeMismatch("output gradient length mismatch");
  if (param_grad.size() != params_.size())
    param_grad.assign(params_.size(), 0.0);

  std::vector<size_t> offsets(layers);
  size_t off = 0;
  for (size_t l = 0; l < layers; ++l) {
    offsets[l] = off;
    off += static_cast<size_t>(spec_.sizes[l] + 1) * spec_.sizes[l + 1];
  }

  std::vector<double> g(output_grad.begin(), output_grad.end());
  for (size_t li = layers; li-- > 0;) {
    const int nin = spec_.sizes[li], nout = spec_.sizes[li + 1];
    const std::vector<double>& x = cache.activations[li];
    const std::vector<double>& y = cache.activations[li + 1];
    if (li + 1 != layers) {
      for (int o = 0; o < nout; ++o) g[o] *= 1.0 - y[o] * y[o];
    }
    double* dw = param_grad.data() + offsets[li];
    double* db = dw + static_cast<size_t>(nin) * nout;
    const double* w = params_.data() + offsets[li];
    std::vector<double> gx(nin, 0.0);
    for (int o = 0; o < nout; ++o) {
      double* dwrow = dw + static_cast<size_t>(o) * nin;
      const double* wrow = w + static_cast<size_t>(o) * nin;
      for (int i = 0; i < nin; ++i) {
        dwrow[i] += g[o] * x[i];
        gx[i] += wrow[i] * g[o];
      }
      db[o] += g[o];
    }
    g = std::move(gx);
  }
  if (input_grad) *input_grad = std::move(g);
}

SoftmaxResult softmax_logprob_entropy(std::span<const double> logits,
                                      int action_index) {
  if (action_index < 0 || action_index >= static_cast<int>(logits.size()))
    throw ShapeMismatch("action index out of range");
  SoftmaxResult r;
  const double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0;
  r.probs.resize(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    r.probs[i] = std::exp(logits[i] - mx);
    z += r.probs[i];
  }
  const double logz = std::log(z);
  r.log_prob = logits[action_index] - mx - logz;
  r.grad_logits.resize(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    r.probs[i] /= z;
    double logp = logits[i] - mx - logz;
    r.entropy -= r.probs[i] * logp;
    r.grad_logits[i] = -r.probs[i];
  }
  r.grad_logits[action_index] += 1.0;
  return r;
}

std::vector<double> entropy_grad_logits(const SoftmaxResult& sm) {
  std::vector<double> g(sm.probs.size());
  for (size_t i = 0; i < sm.probs.size(); ++i) {
    double logp = sm.probs[i] > 0 ? std::log(sm.probs[i]) : 0.0;
    g[i] = -sm.probs[i] * (logp + sm.entropy);
  }
  return g;
}

void Adam::step(std::vector<double>& params, std::span<const double> grad) {
  if (params.size() != grad.size())
    throw ShapeMismatch("gradient length does not match parameters");
  if (m.empty()) {
    m.assign(params.size(), 0.0);
    v.assign(params.size(), 0.0);
  }
  for (double g : grad)
    if (!std::isfinite(g)) throw NumericError("non-finite gradient");
  ++t;
  const double bc1 = 1.0 - std::pow(beta1, t);
  const double bc2 = 1.0 - std::pow(beta2, t);
  for (size_t i = 0; i < params.size(); ++i) {
    m[i] = beta1 * m[i] + (1 - beta1) * grad[i];
    v[i] = beta2 * v[i] + (1 - beta2) * grad[i] * grad[i];
    params[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
  }
}

}  // namespace areasearch
