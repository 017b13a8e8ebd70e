#include "graphadapt/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "graphadapt/error.hpp"
#include "graphadapt/rng.hpp"

namespace graphadapt {

GradCheckReport finite_difference_check(ParamStore& store, const GradCheckProblem& problem,
                                        std::uint64_t probe_seed,
                                        const GradCheckOptions& options) {
  if (!problem.loss || !problem.gradient) {
    throw InvalidArgument("finite_difference_check: loss and gradient callbacks are required");
  }
  GradCheckReport report;
  if (problem.decision_margin && problem.resample) {
    std::uint64_t draw = probe_seed;
    while (problem.decision_margin() < options.tie_threshold) {
      if (report.resamples >= options.max_resamples) {
        throw Error("finite_difference_check: could not draw a tie-free input");
      }
      problem.resample(derive_seed(draw, static_cast<std::uint64_t>(report.resamples)));
      ++report.resamples;
    }
  }

  store.zero_grad();
  problem.gradient();
  const std::vector<double> analytic = store.flat_grads();
  store.zero_grad();
  const std::uint64_t signature =
      problem.decision_signature ? problem.decision_signature() : 0;

  std::vector<std::size_t> order(store.parameter_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto rng = make_rng(probe_seed);
  std::shuffle(order.begin(), order.end(), rng);
  if (order.size() > static_cast<std::size_t>(options.max_probes)) {
    order.resize(static_cast<std::size_t>(options.max_probes));
  }

  std::vector<double> values = store.flat_values();
  for (std::size_t idx : order) {
    const double original = values[idx];
    values[idx] = original + options.step;
    store.set_flat_values(values);
    const double plus = problem.loss();
    const bool plus_same = !problem.decision_signature || problem.decision_signature() == signature;
    values[idx] = original - options.step;
    store.set_flat_values(values);
    const double minus = problem.loss();
    const bool minus_same =
        !problem.decision_signature || problem.decision_signature() == signature;
    values[idx] = original;
    store.set_flat_values(values);
    if (!plus_same || !minus_same) {
      ++report.skipped_probes;
      continue;
    }
    const double numeric = (plus - minus) / (2.0 * options.step);
    const double a = analytic[idx];
    const double denom = std::max({std::abs(a), std::abs(numeric), options.scale_floor});
    report.max_relative_error = std::max(report.max_relative_error, std::abs(a - numeric) / denom);
    ++report.probes;
  }
  return report;
}

}  // namespace graphadapt
