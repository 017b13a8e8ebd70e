#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace graphadapt {

/// One real value per vertex.
using Signal = std::vector<double>;

/// F graph signals of a common dimension N, indexed [feature][vertex].
using FeatureStack = std::vector<Signal>;

/// Throws InvalidArgument unless every signal in `stack` has `n` entries.
void require_stack_shape(const FeatureStack& stack, std::size_t features, std::size_t n,
                         const std::string& what);

/// Throws InvalidArgument unless `x.size() == n`.
void require_signal_size(std::span<const double> x, std::size_t n, const std::string& what);

/// Infinity norm of the difference of two equally sized vectors.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// Infinity norm of the difference of two equally shaped feature stacks.
double max_abs_diff(const FeatureStack& a, const FeatureStack& b);

}  // namespace graphadapt
