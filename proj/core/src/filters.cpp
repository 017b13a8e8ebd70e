#include "graphadapt/filters.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "graphadapt/error.hpp"

namespace graphadapt {

FilterBank::FilterBank(int out_features, int in_features, int order)
    : FilterBank(out_features, in_features, order,
                 std::vector<double>(static_cast<std::size_t>(std::max(out_features, 0)) *
                                         std::max(in_features, 0) * std::max(order + 1, 0),
                                     0.0)) {}

FilterBank::FilterBank(int out_features, int in_features, int order,
                       std::vector<double> coefficients)
    : out_(out_features), in_(in_features), order_(order), coeffs_(std::move(coefficients)) {
  if (out_ < 1 || in_ < 1 || order_ < 0) {
    throw InvalidArgument("FilterBank: need F_out >= 1, F_in >= 1, K >= 0");
  }
  if (coeffs_.size() != static_cast<std::size_t>(out_) * in_ * (order_ + 1)) {
    throw InvalidArgument("FilterBank: coefficient count does not match F_out*F_in*(K+1)");
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw InvalidArgument("FilterBank: non-finite coefficient");
  }
}

FilterTaps FilterBank::taps(int f, int g) const {
  FilterTaps t;
  t.h.assign(coeffs_.begin() + static_cast<std::ptrdiff_t>(index(f, g, 0)),
             coeffs_.begin() + static_cast<std::ptrdiff_t>(index(f, g, 0) + order_ + 1));
  return t;
}

std::vector<Signal> shift_powers(const Graph& graph, std::span<const double> x, int order,
                                 ShiftCounter* counter) {
  require_signal_size(x, static_cast<std::size_t>(graph.num_nodes()), "shift_powers");
  if (order < 0) throw InvalidArgument("shift_powers: order must be >= 0");
  std::vector<Signal> powers;
  powers.reserve(static_cast<std::size_t>(order) + 1);
  powers.emplace_back(x.begin(), x.end());
  for (int k = 1; k <= order; ++k) {
    powers.push_back(graph.shift(powers.back()));
  }
  if (counter) counter->shifts += static_cast<std::size_t>(order);
  return powers;
}

Signal graph_convolution(const Graph& graph, std::span<const double> x, const FilterTaps& taps) {
  if (taps.h.empty()) throw InvalidArgument("graph_convolution: empty filter");
  const auto powers = shift_powers(graph, x, taps.order());
  Signal y(x.size(), 0.0);
  for (int k = 0; k <= taps.order(); ++k) {
    const double h = taps.h[k];
    const auto& p = powers[k];
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h * p[i];
  }
  return y;
}

FeatureStack filter_bank_combine(const std::vector<std::vector<Signal>>& powers,
                                 const FilterBank& bank) {
  if (powers.size() != static_cast<std::size_t>(bank.in_features())) {
    throw InvalidArgument("filter_bank_combine: expected " + std::to_string(bank.in_features()) +
                          " input features, got " + std::to_string(powers.size()));
  }
  const std::size_t n = powers.empty() || powers[0].empty() ? 0 : powers[0][0].size();
  FeatureStack z(static_cast<std::size_t>(bank.out_features()), Signal(n, 0.0));
  for (int f = 0; f < bank.out_features(); ++f) {
    auto& out = z[f];
    for (int g = 0; g < bank.in_features(); ++g) {
      for (int k = 0; k <= bank.order(); ++k) {
        const double h = bank.tap(f, g, k);
        const auto& p = powers[g][k];
        for (std::size_t i = 0; i < n; ++i) out[i] += h * p[i];
      }
    }
  }
  return z;
}

FeatureStack filter_bank_apply(const Graph& graph, const FeatureStack& x, const FilterBank& bank,
                               ShiftCounter* counter) {
  require_stack_shape(x, static_cast<std::size_t>(bank.in_features()),
                      static_cast<std::size_t>(graph.num_nodes()), "filter_bank_apply");
  std::vector<std::vector<Signal>> powers;
  powers.reserve(x.size());
  for (const auto& xg : x) powers.push_back(shift_powers(graph, xg, bank.order(), counter));
  return filter_bank_combine(powers, bank);
}

}  // namespace graphadapt
