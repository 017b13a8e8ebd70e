#include "graphadapt/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graphadapt/error.hpp"

namespace graphadapt {
namespace {

Signal beta_relu(std::span<const double> z, double beta) {
  Signal y(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) y[i] = beta * (z[i] > 0.0 ? z[i] : 0.0);
  return y;
}

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// r = sum_{k=1..K} S^k a[k-1], by Horner: K shifts.
Signal horner_adjoint(const Graph& graph, const std::vector<Signal>& a) {
  Signal r = a.back();
  for (std::size_t k = a.size() - 1; k >= 1; --k) {
    r = graph.shift(r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += a[k - 1][i];
  }
  return graph.shift(r);
}

}  // namespace

ActivationRecord record_activation(const Graph& graph, std::span<const double> z,
                                   const ActivationParams& params,
                                   const KHopNeighborhoods* hoods) {
  params.validate();
  const auto n = static_cast<std::size_t>(graph.num_nodes());
  require_signal_size(z, n, "activation input");
  ActivationRecord rec;
  rec.params = params;
  rec.input.assign(z.begin(), z.end());

  if (params.kind == ActivationKind::relu) {
    rec.output = relu(z);
    return rec;
  }

  rec.output = beta_relu(z, params.beta);
  const int K = params.resolution();

  if (is_localized(params.kind)) {
    KHopNeighborhoods local;
    if (!hoods || hoods->depth() < K) {
      local = khop_sets(graph, K);
      hoods = &local;
    }
    const Aggregator agg = aggregator_of(params.kind);
    for (int k = 1; k <= K; ++k) {
      auto& sel = rec.selections.emplace_back(n);
      auto& term = rec.terms.emplace_back(n);
      for (std::size_t i = 0; i < n; ++i) {
        sel[i] = select_over(hoods->ball(static_cast<int>(i), k), z, agg);
        term[i] = selection_value(sel[i], z);
      }
      const double h = params.h_sigma[k - 1];
      for (std::size_t i = 0; i < n; ++i) rec.output[i] += h * term[i];
    }
    return rec;
  }

  Signal s(z.begin(), z.end());
  for (int k = 1; k <= K; ++k) {
    s = graph.shift(s);
    rec.shifted.push_back(s);
    Signal term(n);
    if (params.kind == ActivationKind::ga_kernel) {
      term = neighborhood_kernel(graph, s, params.gamma);
    } else {
      const Aggregator agg = aggregator_of(params.kind);
      auto& sel = rec.selections.emplace_back(n);
      for (std::size_t i = 0; i < n; ++i) {
        sel[i] = select_over(graph.neighbors(static_cast<int>(i)), s, agg);
        term[i] = selection_value(sel[i], s);
      }
    }
    const double h = params.h_sigma[k - 1];
    for (std::size_t i = 0; i < n; ++i) rec.output[i] += h * term[i];
    rec.terms.push_back(std::move(term));
  }
  return rec;
}

double decision_margin(const ActivationRecord& record) {
  double m = std::numeric_limits<double>::infinity();
  if (record.params.kind == ActivationKind::relu || record.params.beta != 0.0) {
    for (double z : record.input) m = std::min(m, std::abs(z));
  }
  for (const auto& per_k : record.selections) {
    for (const auto& sel : per_k) m = std::min(m, sel.margin);
  }
  return m;
}

std::uint64_t decision_signature(const ActivationRecord& record, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (double z : record.input) h = fnv_mix(h, z > 0.0 ? 1 : 0);
  for (const auto& per_k : record.selections) {
    for (const auto& sel : per_k) {
      h = fnv_mix(h, static_cast<std::uint64_t>(sel.node[0] + 1));
      h = fnv_mix(h, static_cast<std::uint64_t>(sel.node[1] + 1));
    }
  }
  return h;
}

ActivationGrads vjp_activation(const Graph& graph, const ActivationRecord& rec,
                               std::span<const double> upstream) {
  const std::size_t n = rec.input.size();
  require_signal_size(upstream, n, "activation upstream gradient");
  ActivationGrads g;
  g.input.assign(n, 0.0);
  const auto& z = rec.input;
  const auto& p = rec.params;

  if (p.kind == ActivationKind::relu) {
    for (std::size_t i = 0; i < n; ++i) g.input[i] = z[i] > 0.0 ? upstream[i] : 0.0;
    return g;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (z[i] > 0.0) {
      g.input[i] = p.beta * upstream[i];
      g.beta += z[i] * upstream[i];
    }
  }
  const int K = p.resolution();
  g.h_sigma.assign(static_cast<std::size_t>(K), 0.0);
  for (int k = 1; k <= K; ++k) {
    double dh = 0.0;
    const auto& term = rec.terms[k - 1];
    for (std::size_t i = 0; i < n; ++i) dh += term[i] * upstream[i];
    g.h_sigma[k - 1] = dh;
  }

  if (is_localized(p.kind)) {
    for (int k = 1; k <= K; ++k) {
      const double h = p.h_sigma[k - 1];
      for (std::size_t i = 0; i < n; ++i) {
        const auto& sel = rec.selections[k - 1][i];
        for (int s = 0; s < sel.count; ++s) g.input[sel.node[s]] += h * upstream[i] * sel.weight[s];
      }
    }
    return g;
  }

  // Adjoints w.r.t. the shifted signals S^k z, then back through S^k.
  std::vector<Signal> adj(static_cast<std::size_t>(K), Signal(n, 0.0));
  if (p.kind == ActivationKind::ga_kernel) {
    const double inv_gamma2 = 1.0 / (p.gamma * p.gamma);
    for (int k = 1; k <= K; ++k) {
      const auto& u = rec.shifted[k - 1];
      const auto& kv = rec.terms[k - 1];
      auto& a = adj[k - 1];
      const double h = p.h_sigma[k - 1];
      for (std::size_t i = 0; i < n; ++i) {
        const double c = h * upstream[i] * kv[i] * inv_gamma2;
        if (c == 0.0) continue;
        for (int j : graph.neighbors(static_cast<int>(i))) {
          const double d = u[i] - u[j];
          a[i] -= c * d;
          a[j] += c * d;
        }
      }
    }
  } else {
    for (int k = 1; k <= K; ++k) {
      auto& a = adj[k - 1];
      const double h = p.h_sigma[k - 1];
      for (std::size_t i = 0; i < n; ++i) {
        const auto& sel = rec.selections[k - 1][i];
        for (int s = 0; s < sel.count; ++s) a[sel.node[s]] += h * upstream[i] * sel.weight[s];
      }
    }
  }
  const Signal back = horner_adjoint(graph, adj);
  for (std::size_t i = 0; i < n; ++i) g.input[i] += back[i];
  return g;
}

ConvolutionGrads vjp_graph_convolution(const Graph& graph, std::span<const Signal> powers,
                                       const FilterTaps& taps, std::span<const double> upstream) {
  const int K = taps.order();
  if (K < 0 || powers.size() != static_cast<std::size_t>(K) + 1) {
    throw InvalidArgument("vjp_graph_convolution: record does not match filter order");
  }
  const std::size_t n = upstream.size();
  ConvolutionGrads g;
  g.taps.resize(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) d += powers[k][i] * upstream[i];
    g.taps[k] = d;
  }
  Signal r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = taps.h[K] * upstream[i];
  for (int k = K - 1; k >= 0; --k) {
    r = graph.shift(r);
    for (std::size_t i = 0; i < n; ++i) r[i] += taps.h[k] * upstream[i];
  }
  g.input = std::move(r);
  return g;
}

FilterBankGrads vjp_filter_bank(const Graph& graph, const std::vector<std::vector<Signal>>& powers,
                                const FilterBank& bank, const FeatureStack& upstream,
                                bool need_input_grad) {
  const int F = bank.out_features();
  const int G = bank.in_features();
  const int K = bank.order();
  const auto n = static_cast<std::size_t>(graph.num_nodes());
  require_stack_shape(upstream, static_cast<std::size_t>(F), n, "filter bank upstream gradient");
  FilterBankGrads g;
  g.taps.assign(bank.coefficients().size(), 0.0);
  std::size_t idx = 0;
  for (int f = 0; f < F; ++f) {
    for (int gi = 0; gi < G; ++gi) {
      for (int k = 0; k <= K; ++k) {
        double d = 0.0;
        const auto& pw = powers[gi][k];
        const auto& up = upstream[f];
        for (std::size_t i = 0; i < n; ++i) d += pw[i] * up[i];
        g.taps[idx++] = d;
      }
    }
  }
  if (!need_input_grad) return g;

  g.input.assign(static_cast<std::size_t>(G), Signal(n, 0.0));
  Signal c(n);
  for (int gi = 0; gi < G; ++gi) {
    auto coeff_combo = [&](int k) {
      std::fill(c.begin(), c.end(), 0.0);
      for (int f = 0; f < F; ++f) {
        const double h = bank.tap(f, gi, k);
        for (std::size_t i = 0; i < n; ++i) c[i] += h * upstream[f][i];
      }
    };
    coeff_combo(K);
    Signal r = c;
    for (int k = K - 1; k >= 0; --k) {
      r = graph.shift(r);
      coeff_combo(k);
      for (std::size_t i = 0; i < n; ++i) r[i] += c[i];
    }
    g.input[gi] = std::move(r);
  }
  return g;
}

void Tape::mark_replayed() {
  if (replayed_) throw Error("tape already replayed; run a new forward pass");
  replayed_ = true;
}

double Tape::decision_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& layer : layers) {
    for (const auto& rec : layer.activations) m = std::min(m, graphadapt::decision_margin(rec));
  }
  return m;
}

std::uint64_t Tape::decision_signature() const {
  std::uint64_t h = 0;
  for (const auto& layer : layers) {
    for (const auto& rec : layer.activations) h = graphadapt::decision_signature(rec, h);
  }
  return h;
}

}  // namespace graphadapt
