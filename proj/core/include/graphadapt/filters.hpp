#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "graphadapt/graph.hpp"
#include "graphadapt/types.hpp"

namespace graphadapt {

/// Polynomial graph filter coefficients h_0 .. h_K.
struct FilterTaps {
  std::vector<double> h;

  int order() const noexcept { return static_cast<int>(h.size()) - 1; }
};

/// F_out x F_in array of filters sharing one order K, stored [f][g][k].
class FilterBank {
 public:
  FilterBank() = default;
  FilterBank(int out_features, int in_features, int order);
  FilterBank(int out_features, int in_features, int order, std::vector<double> coefficients);

  int out_features() const noexcept { return out_; }
  int in_features() const noexcept { return in_; }
  int order() const noexcept { return order_; }

  double tap(int f, int g, int k) const noexcept { return coeffs_[index(f, g, k)]; }
  double& tap(int f, int g, int k) noexcept { return coeffs_[index(f, g, k)]; }
  FilterTaps taps(int f, int g) const;

  std::span<const double> coefficients() const noexcept { return coeffs_; }

 private:
  std::size_t index(int f, int g, int k) const noexcept {
    return (static_cast<std::size_t>(f) * in_ + g) * (order_ + 1) + k;
  }

  int out_ = 0;
  int in_ = 0;
  int order_ = 0;
  std::vector<double> coeffs_;
};

/// Instrumentation: number of sparse shifts performed.
struct ShiftCounter {
  std::size_t shifts = 0;
};

/// [x, Sx, ..., S^K x] by the recursion x^(k) = S x^(k-1); exactly K shifts.
std::vector<Signal> shift_powers(const Graph& graph, std::span<const double> x, int order,
                                 ShiftCounter* counter = nullptr);

/// y = sum_k h_k S^k x.
Signal graph_convolution(const Graph& graph, std::span<const double> x, const FilterTaps& taps);

/// z^f = sum_g sum_k h_k^{fg} S^k x^g; K shifts per input feature, shared by all f.
FeatureStack filter_bank_apply(const Graph& graph, const FeatureStack& x, const FilterBank& bank,
                               ShiftCounter* counter = nullptr);

/// Combines precomputed shift powers ([g][k] signals) with the bank.
/// Accumulation order is g ascending, then k ascending.
FeatureStack filter_bank_combine(const std::vector<std::vector<Signal>>& powers,
                                 const FilterBank& bank);

}  // namespace graphadapt
