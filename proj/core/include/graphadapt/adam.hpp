#pragma once

#include "graphadapt/param_store.hpp"

namespace graphadapt {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One bias-corrected ADAM update of every tensor from its gradient slot;
/// gradients are zeroed afterwards. No weight decay, no clipping.
void adam_step(ParamStore& store, const AdamOptions& options);

}  // namespace graphadapt
