#include "graphadapt/types.hpp"

#include <algorithm>
#include <cmath>

#include "graphadapt/error.hpp"

namespace graphadapt {

void require_signal_size(std::span<const double> x, std::size_t n, const std::string& what) {
  if (x.size() != n) {
    throw InvalidArgument(what + ": expected dimension " + std::to_string(n) + ", got " +
                          std::to_string(x.size()));
  }
}

void require_stack_shape(const FeatureStack& stack, std::size_t features, std::size_t n,
                         const std::string& what) {
  if (stack.size() != features) {
    throw InvalidArgument(what + ": expected " + std::to_string(features) + " features, got " +
                          std::to_string(stack.size()));
  }
  for (const auto& s : stack) require_signal_size(s, n, what);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  require_signal_size(b, a.size(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs_diff(const FeatureStack& a, const FeatureStack& b) {
  if (a.size() != b.size()) throw InvalidArgument("max_abs_diff: feature count mismatch");
  double m = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) m = std::max(m, max_abs_diff(a[f], b[f]));
  return m;
}

}  // namespace graphadapt
