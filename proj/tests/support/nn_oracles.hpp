#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mnoswitch/nn.hpp"

namespace mnoswitch::testing {

// Independent forward pass over the flat parameter layout.
inline std::vector<double> reference_forward(const nn::Network& net, const std::vector<double>& x) {
  const auto& arch = net.architecture();
  const auto p = net.params();
  std::vector<double> a = x;
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < arch.dims.size(); ++l) {
    const int in = arch.dims[l], out = arch.dims[l + 1];
    std::vector<double> z(static_cast<std::size_t>(out));
    for (int o = 0; o < out; ++o) {
      double s = p[off + static_cast<std::size_t>(in * out + o)];
      for (int i = 0; i < in; ++i) s += p[off + static_cast<std::size_t>(o * in + i)] * a[static_cast<std::size_t>(i)];
      if (l < arch.hidden.size()) {
        if (arch.hidden[l] == nn::Activation::relu) s = std::max(0.0, s);
        else if (arch.hidden[l] == nn::Activation::tanh) s = std::tanh(s);
      }
      z[static_cast<std::size_t>(o)] = s;
    }
    off += static_cast<std::size_t>(in * out + out);
    a = z;
  }
  return a;
}

// Largest relative error between the analytic gradient of 1/2 (q_a - y)^2 and
// central differences with step h. The denominator is floored so parameters
// with a near-zero gradient are judged on absolute error.
inline double gradient_check(nn::Network net, const std::vector<double>& x, int action, double target,
                             double h = 1e-5, double floor = 1e-6) {
  const auto analytic = nn::backward(net, x, action, target).values;
  auto p = net.params();
  double worst = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double saved = p[k];
    p[k] = saved + h;
    const double qp = reference_forward(net, x)[static_cast<std::size_t>(action)] - target;
    p[k] = saved - h;
    const double qm = reference_forward(net, x)[static_cast<std::size_t>(action)] - target;
    p[k] = saved;
    const double numeric = (0.5 * qp * qp - 0.5 * qm * qm) / (2.0 * h);
    const double denom = std::max({std::abs(numeric), std::abs(analytic[k]), floor});
    worst = std::max(worst, std::abs(numeric - analytic[k]) / denom);
  }
  return worst;
}

}  // namespace mnoswitch::testing
