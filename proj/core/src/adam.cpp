#include "graphadapt/adam.hpp"

#include <cmath>

namespace graphadapt {

void adam_step(ParamStore& store, const AdamOptions& options) {
  const std::uint64_t t = store.step() + 1;
  store.set_step(t);
  const double correction1 = 1.0 - std::pow(options.beta1, static_cast<double>(t));
  const double correction2 = 1.0 - std::pow(options.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < store.num_tensors(); ++i) {
    auto& p = store.tensor(i);
    for (std::size_t e = 0; e < p.size(); ++e) {
      const double g = p.grad[e];
      p.m[e] = options.beta1 * p.m[e] + (1.0 - options.beta1) * g;
      p.v[e] = options.beta2 * p.v[e] + (1.0 - options.beta2) * g * g;
      const double m_hat = p.m[e] / correction1;
      const double v_hat = p.v[e] / correction2;
      p.value[e] -= options.lr * m_hat / (std::sqrt(v_hat) + options.eps);
      p.grad[e] = 0.0;
    }
  }
}

}  // namespace graphadapt
