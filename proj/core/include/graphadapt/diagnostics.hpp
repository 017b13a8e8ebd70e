#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphadapt/activations.hpp"
#include "graphadapt/gradcheck.hpp"
#include "graphadapt/model.hpp"

namespace graphadapt {

// Randomized property checks shared by the command line tool and the test
// suites. Every check is a pure function of its seed.

/// Model with `layers` layers of `kind`, random taps, random beta and h_sigma in
/// [-1, 1] and random readout.
GcnnModel random_model(ActivationKind kind, int input_features, int layers, int features,
                       int filter_order, int resolution, int outputs, std::uint64_t seed);

/// Connected SBM with n vertices in two communities, normalized GSO.
Graph random_graph(int n, std::uint64_t seed);

FeatureStack random_features(int features, int n, std::uint64_t seed);

struct EquivarianceReport {
  ActivationKind kind = ActivationKind::relu;
  int graphs = 0;
  int permutations = 0;
  double max_deviation = 0.0;
};

/// `graphs` random SBMs with N alternating 10 and 20, `permutations` random
/// relabelings each.
EquivarianceReport check_equivariance(ActivationKind kind, int graphs, int permutations,
                                      std::uint64_t seed);

struct LipschitzReport {
  int pairs = 0;
  int violations = 0;
  double worst_ratio = 0.0;  ///< max ||dz|| / (L ||dx||)
};

/// Random ga_max parameters with C <= 1 on random normalized graphs; checks
/// ||z~ - z||_inf <= L ||x~ - x||_inf + 1e-12 for every pair.
LipschitzReport check_lipschitz(int pairs, std::uint64_t seed);

struct DistributedReport {
  int cases = 0;
  double max_deviation = 0.0;
  bool counts_match = true;   ///< log totals equal the closed forms in every case
  bool rejects_nonlocal = false;
};

/// `models` random distributable models (all kinds) x `graphs` random graphs.
DistributedReport check_distributed(int models, int graphs, std::uint64_t seed);

/// Finite-difference check of a full GCNN (L=2, F=4, K=2, K_sigma=2, N=8).
GradCheckReport check_gcnn_gradient(ActivationKind kind, std::uint64_t seed,
                                    const GradCheckOptions& options = {});

/// Tolerance on the gradient check for a kind: tighter for the smooth ones.
double gradient_tolerance(ActivationKind kind);

const std::vector<ActivationKind>& all_activation_kinds();

}  // namespace graphadapt
