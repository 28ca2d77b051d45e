#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mnoswitch/error.hpp"
#include "mnoswitch/random.hpp"

namespace mnoswitch::nn {

enum class Activation { relu, tanh, linear };

inline const char* to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::linear: return "linear";
  }
  return "?";
}

inline Activation parse_activation(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  if (s == "linear") return Activation::linear;
  throw ValidationError("activation", "unknown activation '" + s + "'");
}

// Layer sizes from input to output plus one activation per hidden layer.
// The output layer is always linear.
struct Architecture {
  std::vector<int> dims;
  std::vector<Activation> hidden;

  int input_dim() const { return dims.front(); }
  int output_dim() const { return dims.back(); }
  std::size_t num_layers() const { return dims.size() - 1; }

  Activation activation(std::size_t layer) const {
    return layer < hidden.size() ? hidden[layer] : Activation::linear;
  }

  std::size_t num_params() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i + 1 < dims.size(); ++i)
      n += static_cast<std::size_t>(dims[i + 1]) * static_cast<std::size_t>(dims[i] + 1);
    return n;
  }

  void validate() const {
    if (dims.size() < 2) throw ValidationError("architecture.dims", "need input and output sizes");
    for (int d : dims)
      if (d < 1) throw ValidationError("architecture.dims", "layer sizes must be >= 1");
    if (hidden.size() != dims.size() - 2)
      throw ValidationError("architecture.activations", "need one activation per hidden layer");
  }

  bool operator==(const Architecture&) const = default;
};

// Gradient with the same flat layout as Network::params().
struct GradientEstimate {
  std::vector<double> values;
  double loss = 0.0;  // 1/2 mean squared error of the samples that produced it
};

// Fully connected feedforward network. Parameters live in one flat vector:
// per layer, a row-major (out x in) weight block followed by the bias.
class Network {
 public:
  Network() = default;

  // Zero-initialized network.
  explicit Network(Architecture arch) : arch_(std::move(arch)) {
    arch_.validate();
    params_.assign(arch_.num_params(), 0.0);
  }

  // Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)); zero biases.
  Network(Architecture arch, Rng& rng) : Network(std::move(arch)) {
    std::size_t off = 0;
    for (std::size_t l = 0; l < arch_.num_layers(); ++l) {
      const int in = arch_.dims[l];
      const int out = arch_.dims[l + 1];
      const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
      for (int k = 0; k < in * out; ++k) params_[off++] = (2.0 * uniform01(rng) - 1.0) * limit;
      off += static_cast<std::size_t>(out);
    }
  }

  const Architecture& architecture() const noexcept { return arch_; }
  int input_dim() const { return arch_.input_dim(); }
  int output_dim() const { return arch_.output_dim(); }
  std::span<const double> params() const noexcept { return params_; }
  std::span<double> params() noexcept { return params_; }

  std::vector<double> forward(std::span<const double> features) const {
    check_input(features);
    std::vector<double> cur(features.begin(), features.end());
    std::vector<double> next;
    std::size_t off = 0;
    for (std::size_t l = 0; l < arch_.num_layers(); ++l) {
      affine(l, off, cur, next);
      apply(arch_.activation(l), next);
      cur.swap(next);
    }
    return cur;
  }

  // Adds d/dtheta of 1/2 (q[action] - target)^2 to `grad`; returns the squared
  // error. Only the selected output carries an error signal.
  double accumulate_gradient(std::span<const double> features, int action, double target,
                             std::vector<double>& grad) const {
    check_input(features);
    if (action < 0 || action >= output_dim()) throw ValidationError("action", "output index out of range");
    if (grad.size() != params_.size()) throw ValidationError("gradient", "shape mismatch");
    const std::size_t nl = arch_.num_layers();
    // acts[l] is the input to layer l; acts[nl] is the output.
    std::vector<std::vector<double>> acts(nl + 1);
    acts[0].assign(features.begin(), features.end());
    std::vector<std::size_t> offsets(nl);
    std::size_t off = 0;
    for (std::size_t l = 0; l < nl; ++l) {
      offsets[l] = off;
      affine(l, off, acts[l], acts[l + 1]);
      apply(arch_.activation(l), acts[l + 1]);
    }
    const double err = acts[nl][static_cast<std::size_t>(action)] - target;
    std::vector<double> delta(static_cast<std::size_t>(output_dim()), 0.0);
    delta[static_cast<std::size_t>(action)] = err;

    for (std::size_t l = nl; l-- > 0;) {
      const auto in = static_cast<std::size_t>(arch_.dims[l]);
      const auto out = static_cast<std::size_t>(arch_.dims[l + 1]);
      const Activation act = arch_.activation(l);
      for (std::size_t o = 0; o < out; ++o) delta[o] *= derivative(act, acts[l + 1][o]);
      const std::size_t w0 = offsets[l];
      const std::size_t b0 = w0 + in * out;
      for (std::size_t o = 0; o < out; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        double* g = grad.data() + w0 + o * in;
        for (std::size_t i = 0; i < in; ++i) g[i] += d * acts[l][i];
        grad[b0 + o] += d;
      }
      if (l == 0) break;
      std::vector<double> prev(in, 0.0);
      for (std::size_t o = 0; o < out; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        const double* w = params_.data() + w0 + o * in;
        for (std::size_t i = 0; i < in; ++i) prev[i] += d * w[i];
      }
      delta.swap(prev);
    }
    return err * err;
  }

  bool operator==(const Network& o) const { return arch_ == o.arch_ && params_ == o.params_; }

 private:
  void check_input(std::span<const double> features) const {
    if (features.size() != static_cast<std::size_t>(input_dim()))
      throw ValidationError("features", "expected " + std::to_string(input_dim()) + " inputs, got " +
                                            std::to_string(features.size()));
  }

  void affine(std::size_t layer, std::size_t& off, const std::vector<double>& in_v,
              std::vector<double>& out_v) const {
    const auto in = static_cast<std::size_t>(arch_.dims[layer]);
    const auto out = static_cast<std::size_t>(arch_.dims[layer + 1]);
    out_v.assign(out, 0.0);
    const double* w = params_.data() + off;
    const double* b = w + in * out;
    for (std::size_t o = 0; o < out; ++o) {
      double acc = b[o];
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) acc += row[i] * in_v[i];
      out_v[o] = acc;
    }
    off += in * out + out;
  }

  static void apply(Activation a, std::vector<double>& v) {
    switch (a) {
      case Activation::relu:
        for (double& x : v) x = x > 0.0 ? x : 0.0;
        break;
      case Activation::tanh:
        for (double& x : v) x = std::tanh(x);
        break;
      case Activation::linear:
        break;
    }
  }

  // Derivative expressed through the activation's output y.
  static double derivative(Activation a, double y) {
    switch (a) {
      case Activation::relu: return y > 0.0 ? 1.0 : 0.0;
      case Activation::tanh: return 1.0 - y * y;
      case Activation::linear: return 1.0;
    }
    return 1.0;
  }

  Architecture arch_;
  std::vector<double> params_;
};

inline std::vector<double> forward(const Network& net, std::span<const double> features) {
  return net.forward(features);
}

// Gradient of 1/2 (q[action] - target)^2 for one sample.
inline GradientEstimate backward(const Network& net, std::span<const double> features, int action,
                                 double target) {
  GradientEstimate g;
  g.values.assign(net.params().size(), 0.0);
  g.loss = 0.5 * net.accumulate_gradient(features, action, target, g.values);
  return g;
}

struct Sample {
  std::vector<double> features;
  int action = 0;
  double target = 0.0;
};

// Gradient of the minibatch loss 1/(2D) sum_i (q_i - y_i)^2.
inline GradientEstimate minibatch_gradient(const Network& net, std::span<const Sample> batch) {
  GradientEstimate g;
  g.values.assign(net.params().size(), 0.0);
  if (batch.empty()) return g;
  double sq = 0.0;
  for (const auto& s : batch) sq += net.accumulate_gradient(s.features, s.action, s.target, g.values);
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (double& v : g.values) v *= inv;
  g.loss = 0.5 * sq * inv;
  return g;
}

// theta <- theta - lr * grad
inline void sgd_step(Network& net, const GradientEstimate& grad, double lr) {
  if (!(lr > 0.0)) throw ValidationError("learning_rate", "must be > 0");
  auto p = net.params();
  if (grad.values.size() != p.size()) throw ValidationError("gradient", "shape mismatch");
  for (double g : grad.values)
    if (!std::isfinite(g)) throw NumericError("non-finite gradient entry");
  for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr * grad.values[i];
  for (double v : p)
    if (!std::isfinite(v)) throw NumericError("network parameter became non-finite");
}

// Copies the primary parameters into the target network.
inline void sync(Network& target, const Network& primary) {
  if (!(target.architecture() == primary.architecture()))
    throw ValidationError("architecture", "target and primary networks differ in shape");
  std::copy(primary.params().begin(), primary.params().end(), target.params().begin());
}

inline nlohmann::json to_json(const Network& net) {
  nlohmann::json acts = nlohmann::json::array();
  for (auto a : net.architecture().hidden) acts.push_back(to_string(a));
  return {{"format", "mnoswitch-network-v1"},
          {"architecture", {{"dims", net.architecture().dims}, {"activations", acts}}},
          {"params", std::vector<double>(net.params().begin(), net.params().end())}};
}

inline Network network_from_json(const nlohmann::json& j) {
  Architecture arch;
  try {
    arch.dims = j.at("architecture").at("dims").get<std::vector<int>>();
    for (const auto& a : j.at("architecture").at("activations")) arch.hidden.push_back(parse_activation(a.get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("architecture", e.what());
  }
  Network net(arch);
  const auto params = j.at("params").get<std::vector<double>>();
  if (params.size() != net.params().size())
    throw ValidationError("params", "expected " + std::to_string(net.params().size()) + " values");
  std::copy(params.begin(), params.end(), net.params().begin());
  return net;
}

inline void save_checkpoint(const Network& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint '" + path + "'");
  out << to_json(net).dump() << '\n';
}

inline Network load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read checkpoint '" + path + "'");
  return network_from_json(nlohmann::json::parse(in));
}

}  // namespace mnoswitch::nn
