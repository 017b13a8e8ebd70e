#pragma once

#include <cstdint>
#include <functional>

#include "graphadapt/param_store.hpp"

namespace graphadapt {

/// Callbacks binding a differentiable problem to its parameter store.
struct GradCheckProblem {
  /// Loss at the store's current values.
  std::function<double()> loss;
  /// Overwrites the store's gradient slots with the analytic gradient.
  std::function<void()> gradient;
  /// Distance of the nearest max/median/ReLU decision from a tie; optional.
  std::function<double()> decision_margin;
  /// Hash of all discrete decisions at the current values; optional.
  std::function<std::uint64_t()> decision_signature;
  /// Draws a fresh input from the given seed; optional.
  std::function<void(std::uint64_t)> resample;
};

struct GradCheckOptions {
  double step = 1e-5;
  int max_probes = 200;
  double tie_threshold = 1e-7;
  int max_resamples = 50;
  /// Denominator floor of the relative error |a - n| / max(|a|, |n|, floor).
  double scale_floor = 1e-6;
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  int probes = 0;
  int skipped_probes = 0;  ///< probes whose +-step crossed a decision boundary
  int resamples = 0;
};

/// Central-difference check of the analytic gradient on up to `max_probes`
/// randomly chosen parameters. Inputs with a decision within `tie_threshold`
/// of a tie are redrawn before probing.
GradCheckReport finite_difference_check(ParamStore& store, const GradCheckProblem& problem,
                                        std::uint64_t probe_seed,
                                        const GradCheckOptions& options = {});

}  // namespace graphadapt
