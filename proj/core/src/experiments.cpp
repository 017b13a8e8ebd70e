#include "graphadapt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>

#include "graphadapt/datasets.hpp"
#include "graphadapt/error.hpp"
#include "graphadapt/ratings.hpp"
#include "graphadapt/rng.hpp"
#include "graphadapt/training.hpp"

namespace graphadapt {
namespace {

struct Method {
  std::string name;  // activation kind or "fir"
  int resolution = 0;
};

std::vector<Method> expand_methods(const ExperimentSpec& spec) {
  std::vector<Method> out;
  for (const auto& m : spec.methods) {
    if (m == "fir" || m == "relu") {
      out.push_back({m, 0});
    } else {
      for (int r : spec.resolutions) out.push_back({m, r});
    }
  }
  return out;
}

std::string method_label(const Method& m) {
  return m.resolution > 0 ? m.name + "(" + std::to_string(m.resolution) + ")" : m.name;
}

std::uint64_t run_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (auto p : parts) h = mix_seed(h ^ p);
  return h;
}

std::uint64_t method_code(const Method& m) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : m.name) h = (h ^ c) * 1099511628211ULL;
  return h ^ static_cast<std::uint64_t>(m.resolution);
}

/// A trained model together with the graph context it runs on.
struct Fitted {
  std::unique_ptr<Trainable> model;
  TrainResult result;
};

std::unique_ptr<Trainable> build_model(const ExperimentSpec& spec, const Method& m, int features,
                                       int filter_order, int outputs, const Objective& objective,
                                       std::uint64_t init_seed) {
  if (m.name == "fir") return std::make_unique<FirModel>(filter_order, init_seed);
  GcnnConfig c;
  c.input_features = 1;
  const ActivationKind kind = activation_kind_from_string(m.name);
  for (int l = 0; l < spec.layers; ++l) c.layers.push_back({features, filter_order, kind, m.resolution});
  c.output_features = outputs;
  c.readout_nodes = objective.readout_nodes;
  c.loss = objective.loss;
  c.class_logits = objective.logits;
  c.beta_scope = spec.beta_scope;
  c.gamma = spec.gamma;
  return std::make_unique<GcnnModel>(c, init_seed);
}

GraphContext context_for(const Trainable& model, const Graph& graph) {
  if (const auto* g = dynamic_cast<const GcnnModel*>(&model)) return g->context(graph);
  return GraphContext(graph);
}

TrainOptions train_options(const ExperimentSpec& spec, std::uint64_t seed) {
  TrainOptions o;
  o.epochs = spec.epochs;
  o.batch_size = spec.batch_size;
  o.adam.lr = spec.lr;
  o.seed = seed;
  o.threads = spec.threads;
  return o;
}

Fitted fit(const ExperimentSpec& spec, const Method& m, int features, int filter_order, int outputs,
           const Objective& objective, Metric metric, const Graph& graph, const Dataset& data,
           std::uint64_t key) {
  Fitted f;
  f.model = build_model(spec, m, features, filter_order, outputs, objective, derive_seed(key, 1));
  const auto ctx = context_for(*f.model, graph);
  f.result = train(*f.model, ctx, data, objective, metric, train_options(spec, derive_seed(key, 2)));
  return f;
}

void add_history(ExperimentOutput& out, const std::string& method, const std::string& run,
                 const TrainResult& r) {
  for (const auto& e : r.history) out.history.push_back({method, run, e.epoch, e.train_loss, e.validation_metric});
}

class Reporter {
 public:
  Reporter(const ExperimentSpec& spec, ExperimentOutput& out, std::ostream* log)
      : spec_(spec), out_(out), log_(log), hash_(config_hash(spec)) {}

  void run(const RunRecord& r) {
    out_.runs.push_back(r);
    MetricRow row = base(r);
    row.metric = r.metric + "/g" + std::to_string(r.graph) + "/s" + std::to_string(r.split);
    row.value = r.value;
    out_.metrics.push_back(row);
    if (log_) {
      *log_ << '[' << spec_.experiment << "] g" << r.graph << " s" << r.split << ' ' << r.method;
      if (r.resolution > 0) *log_ << '(' << r.resolution << ')';
      *log_ << " F" << r.features << " K" << r.filter_order << ' ' << r.sweep_axis << '='
            << format_double(r.sweep_value) << ": " << r.metric << '=' << format_double(r.value)
            << std::endl;
    }
  }

  /// mean and std rows for every distinct configuration, in first-seen order.
  void aggregate() {
    using Key = std::tuple<std::string, int, int, int, std::string, double, std::string>;
    std::vector<Key> order;
    std::map<Key, std::vector<double>> values;
    std::map<Key, RunRecord> first;
    for (const auto& r : out_.runs) {
      Key k{r.method, r.resolution, r.features, r.filter_order, r.sweep_axis, r.sweep_value, r.metric};
      if (!values.count(k)) {
        order.push_back(k);
        first[k] = r;
      }
      values[k].push_back(r.value);
    }
    for (const auto& k : order) {
      const auto& v = values[k];
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
      MetricRow row = base(first[k]);
      row.metric = std::get<6>(k) + "_mean";
      row.value = mean;
      out_.metrics.push_back(row);
      row.metric = std::get<6>(k) + "_std";
      row.value = sd;
      out_.metrics.push_back(row);
    }
  }

 private:
  MetricRow base(const RunRecord& r) const {
    MetricRow row;
    row.experiment = spec_.experiment;
    row.seed = spec_.seed;
    row.graph_seed = spec_.resolved_graph_seed();
    row.split_seed = spec_.resolved_split_seed();
    row.config_hash = hash_;
    row.method = r.method;
    row.features = r.features;
    row.filter_order = r.filter_order;
    row.resolution = r.resolution;
    row.sweep_axis = r.sweep_axis;
    row.sweep_value = r.sweep_value;
    return row;
  }

  const ExperimentSpec& spec_;
  ExperimentOutput& out_;
  std::ostream* log_;
  std::string hash_;
};

/// Replays the first distributable GCNN on one input through the simulator.
void record_messages(ExperimentOutput& out, const Trainable* model, const Graph& graph,
                     const FeatureStack& input) {
  if (!out.messages.rounds.empty() || !model) return;
  const auto* g = dynamic_cast<const GcnnModel*>(model);
  if (!g) return;
  try {
    check_distributable(g->config());
  } catch (const NotDistributable&) {
    return;
  }
  out.messages = run_distributed_forward(graph, *g, input).log;
}

double rmse_of(const std::vector<Sample>& samples, const std::function<double(const Sample&, int)>& pred,
               int n) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& s : samples) {
    for (int i = 0; i < n; ++i) {
      const double d = pred(s, i) - s.target[0][i];
      sum += d * d;
      ++count;
    }
  }
  return std::sqrt(sum / static_cast<double>(count));
}

}  // namespace

double mean_value(const std::vector<RunRecord>& runs, const std::string& method, int resolution,
                  const std::string& sweep_axis, double sweep_value, int graph) {
  double sum = 0.0;
  int count = 0;
  for (const auto& r : runs) {
    if (r.method == method && r.resolution == resolution && r.sweep_axis == sweep_axis &&
        r.sweep_value == sweep_value && (graph < 0 || r.graph == graph)) {
      sum += r.value;
      ++count;
    }
  }
  return count ? sum / count : std::numeric_limits<double>::quiet_NaN();
}

ExperimentOutput run_source_localization(const ExperimentSpec& spec, std::ostream* log) {
  spec.validate();
  ExperimentOutput out;
  Reporter rep(spec, out, log);
  const auto methods = expand_methods(spec);
  const int K = spec.filter_orders.front();
  SbmParams params{spec.nodes, spec.communities, spec.p_intra, spec.p_inter, 50};

  for (int g = 0; g < spec.graphs; ++g) {
    const auto sbm = sbm_generate(params, derive_seed(spec.resolved_graph_seed(), static_cast<std::uint64_t>(g)));
    const Graph S = normalize_gso(sbm.graph);
    const auto readout = community_readout_nodes(S, sbm.community, spec.communities);
    const Objective objective{LossKind::cross_entropy, readout, spec.class_logits};
    const int outputs = objective.across_readout() ? 1 : spec.communities;
    const auto samples = gen_source_localization(S, sbm.community, derive_seed(spec.seed, 100 + g),
                                                 spec.draws_per_source, spec.max_t);
    for (int s = 0; s < spec.splits; ++s) {
      const auto data = split_dataset(samples, 0.8, 0.1,
                                      derive_seed(spec.resolved_split_seed(), static_cast<std::uint64_t>(g * 1000 + s)));
      for (int F : spec.features) {
        for (const auto& m : methods) {
          if (m.name == "fir") continue;
          const auto key = run_key({spec.seed, static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(s),
                                    static_cast<std::uint64_t>(F), method_code(m)});
          auto fitted = fit(spec, m, F, K, outputs, objective, Metric::accuracy, S, data, key);
          const auto ctx = context_for(*fitted.model, S);
          const double acc = evaluate(*fitted.model, ctx, data.test, objective, Metric::accuracy, spec.threads);
          rep.run({m.name, F, K, m.resolution, g, s, "features", static_cast<double>(F), "accuracy", acc});
          add_history(out, method_label(m), "g" + std::to_string(g) + "/s" + std::to_string(s) + "/F" + std::to_string(F),
                      fitted.result);
          record_messages(out, fitted.model.get(), S, data.test.front().input);
        }
      }
    }
  }
  rep.aggregate();

  // Accuracy table: one row per nonlinearity, one column per feature count.
  std::ostringstream table;
  table << "method,resolution";
  for (int F : spec.features) table << ",F=" << F;
  table << '\n';
  for (const auto& m : methods) {
    if (m.name == "fir") continue;
    table << m.name << ',' << m.resolution;
    for (int F : spec.features) {
      std::vector<double> v;
      for (const auto& r : out.runs) {
        if (r.method == m.name && r.resolution == m.resolution && r.features == F) v.push_back(r.value);
      }
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
      char cell[64];
      std::snprintf(cell, sizeof cell, "%.1f (+-%.1f)%%", 100.0 * mean, 100.0 * sd);
      table << ',' << cell;
    }
    table << '\n';
  }
  out.table_csv = table.str();
  return out;
}

ExperimentOutput run_consensus(const ExperimentSpec& spec, std::ostream* log) {
  spec.validate();
  ExperimentOutput out;
  Reporter rep(spec, out, log);
  const auto methods = expand_methods(spec);
  SbmParams params{spec.nodes, spec.communities, spec.p_intra, spec.p_inter, 50};
  const int n = spec.nodes;

  struct Kept {
    Method method;
    int features, filter_order, graph, split;
    std::unique_ptr<Trainable> model;
  };
  std::vector<Kept> kept;
  std::vector<Graph> graphs;
  std::vector<Dataset> splits;  // [g * spec.splits + s]

  for (int g = 0; g < spec.graphs; ++g) {
    const auto sbm = sbm_generate(params, derive_seed(spec.resolved_graph_seed(), static_cast<std::uint64_t>(g)));
    graphs.push_back(normalize_gso(sbm.graph));
    const Graph& S = graphs.back();
    const auto samples = gen_consensus(n, spec.samples, derive_seed(spec.seed, 200 + g));
    for (int s = 0; s < spec.splits; ++s) {
      splits.push_back(split_dataset(samples, 0.8, 0.1,
                                     derive_seed(spec.resolved_split_seed(), static_cast<std::uint64_t>(g * 1000 + s))));
      const Dataset& data = splits.back();
      const double zero = rmse_of(data.test, [](const Sample&, int) { return 0.0; }, n);
      for (int K : spec.filter_orders) {
        rep.run({"zero", 0, K, 0, g, s, "filter_order", static_cast<double>(K), "rmse", zero});
        for (const auto& m : methods) {
          const std::vector<int> features = m.name == "fir" ? std::vector<int>{1} : spec.features;
          for (int F : features) {
            const auto key = run_key({spec.seed, static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(s),
                                      static_cast<std::uint64_t>(K), static_cast<std::uint64_t>(F), method_code(m)});
            auto fitted = fit(spec, m, F, K, 1, Objective{LossKind::mse, {}}, Metric::rmse, S, data, key);
            const auto ctx = context_for(*fitted.model, S);
            const double rmse = evaluate(*fitted.model, ctx, data.test, Objective{LossKind::mse, {}}, Metric::rmse, spec.threads);
            rep.run({m.name, F, K, m.resolution, g, s, "filter_order", static_cast<double>(K), "rmse", rmse});
            add_history(out, method_label(m),
                        "g" + std::to_string(g) + "/s" + std::to_string(s) + "/K" + std::to_string(K) + "/F" + std::to_string(F),
                        fitted.result);
            record_messages(out, fitted.model.get(), S, data.test.front().input);
            kept.push_back({m, F, K, g, s, std::move(fitted.model)});
          }
        }
      }
    }
  }

  // Link-loss robustness of every method's best (K, F) by mean RMSE.
  if (!spec.link_loss.empty()) {
    for (const auto& m : methods) {
      double best = std::numeric_limits<double>::infinity();
      int best_K = 0, best_F = 0;
      for (int K : spec.filter_orders) {
        const std::vector<int> features = m.name == "fir" ? std::vector<int>{1} : spec.features;
        for (int F : features) {
          double sum = 0.0;
          int count = 0;
          for (const auto& r : out.runs) {
            if (r.method == m.name && r.resolution == m.resolution && r.filter_order == K &&
                r.features == F && r.sweep_axis == "filter_order") {
              sum += r.value;
              ++count;
            }
          }
          if (count && sum / count < best) {
            best = sum / count;
            best_K = K;
            best_F = F;
          }
        }
      }
      for (const auto& k : kept) {
        if (k.method.name != m.name || k.method.resolution != m.resolution || k.filter_order != best_K ||
            k.features != best_F) {
          continue;
        }
        const Dataset& data = splits[static_cast<std::size_t>(k.graph * spec.splits + k.split)];
        for (std::size_t pi = 0; pi < spec.link_loss.size(); ++pi) {
          const double p = spec.link_loss[pi];
          double sum = 0.0;
          for (int d = 0; d < spec.link_loss_draws; ++d) {
            const Graph lossy = sample_link_loss(
                graphs[static_cast<std::size_t>(k.graph)], p,
                run_key({spec.seed, 300, static_cast<std::uint64_t>(k.graph), static_cast<std::uint64_t>(k.split),
                         static_cast<std::uint64_t>(pi), static_cast<std::uint64_t>(d)}));
            const auto ctx = context_for(*k.model, lossy);
            sum += evaluate(*k.model, ctx, data.test, Objective{LossKind::mse, {}}, Metric::rmse, spec.threads);
          }
          rep.run({m.name, best_F, best_K, m.resolution, k.graph, k.split, "link_loss", p, "rmse",
                   sum / spec.link_loss_draws});
        }
      }
    }
  }
  rep.aggregate();
  return out;
}

ExperimentOutput run_regression(const ExperimentSpec& spec, std::ostream* log) {
  spec.validate();
  ExperimentOutput out;
  Reporter rep(spec, out, log);
  const auto methods = expand_methods(spec);
  const int K_min = *std::min_element(spec.filter_orders.begin(), spec.filter_orders.end());

  for (int g = 0; g < spec.graphs; ++g) {
    Graph S;
    std::vector<Signal> clean;
    if (spec.data_source == "file") {
      const auto stations = load_station_data(spec.data_path, spec.coords_path);
      S = normalize_gso(knn_geometric(stations.coords, spec.knn));
      clean = stations.signals;
    } else {
      auto rng = make_rng(derive_seed(spec.resolved_graph_seed(), static_cast<std::uint64_t>(g)));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::vector<Point2> coords(static_cast<std::size_t>(spec.nodes));
      for (auto& p : coords) p = {unit(rng), unit(rng)};
      S = normalize_gso(knn_geometric(coords, spec.knn));
      clean = gen_smooth_signals(S, spec.samples, spec.smoothing, derive_seed(spec.seed, 400 + g));
    }
    const int n = S.num_nodes();

    for (std::size_t si = 0; si < spec.snr_db.size(); ++si) {
      const double snr = spec.snr_db[si];
      const bool primary = si == 0;
      const auto noisy = add_noise(clean, snr, derive_seed(spec.seed, 500 + g * 100 + static_cast<int>(si)));
      const auto samples = denoising_samples(noisy);
      for (int s = 0; s < spec.splits; ++s) {
        const auto data = split_dataset(samples, 0.8, 0.1,
                                        derive_seed(spec.resolved_split_seed(), static_cast<std::uint64_t>(g * 1000 + s)));
        const double noisy_rmse = rmse_of(data.test, [](const Sample& x, int i) { return x.input[0][i]; }, n);
        auto emit = [&](RunRecord r) {
          if (primary) {
            r.sweep_axis = "filter_order";
            r.sweep_value = r.filter_order;
            rep.run(r);
          }
          if (r.filter_order == K_min && spec.snr_db.size() > 1) {
            r.sweep_axis = "snr_db";
            r.sweep_value = snr;
            rep.run(r);
          }
        };
        for (int K : spec.filter_orders) {
          if (!primary && K != K_min) continue;
          emit({"noisy_input", 0, K, 0, g, s, "", 0.0, "rmse", noisy_rmse});
          for (const auto& m : methods) {
            const std::vector<int> features = m.name == "fir" ? std::vector<int>{1} : spec.features;
            for (int F : features) {
              const auto key = run_key({spec.seed, static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(s),
                                        static_cast<std::uint64_t>(si), static_cast<std::uint64_t>(K),
                                        static_cast<std::uint64_t>(F), method_code(m)});
              auto fitted = fit(spec, m, F, K, 1, Objective{LossKind::mse, {}}, Metric::rmse, S, data, key);
              const auto ctx = context_for(*fitted.model, S);
              const double rmse = evaluate(*fitted.model, ctx, data.test, Objective{LossKind::mse, {}}, Metric::rmse, spec.threads);
              emit({m.name, F, K, m.resolution, g, s, "", 0.0, "rmse", rmse});
              add_history(out, method_label(m),
                          "g" + std::to_string(g) + "/snr" + format_double(snr) + "/s" + std::to_string(s) + "/K" +
                              std::to_string(K) + "/F" + std::to_string(F),
                          fitted.result);
              record_messages(out, fitted.model.get(), S, data.test.front().input);
            }
          }
        }
      }
    }
  }
  rep.aggregate();
  return out;
}

ExperimentOutput run_recsys(const ExperimentSpec& spec, std::ostream* log) {
  spec.validate();
  ExperimentOutput out;
  Reporter rep(spec, out, log);
  const auto methods = expand_methods(spec);
  const int K = spec.filter_orders.front();

  const RatingsMatrix full = spec.data_source == "file"
                                 ? load_movielens(spec.data_path)
                                 : synthetic_low_rank_ratings(spec.users, spec.movies, spec.rank, spec.density,
                                                              spec.resolved_graph_seed());
  for (int t : spec.target_movies) {
    if (t < 0 || t >= full.movies()) throw InvalidArgument("recsys: target movie out of range");
  }

  for (int s = 0; s < spec.splits; ++s) {
    std::vector<int> users(static_cast<std::size_t>(full.users()));
    std::iota(users.begin(), users.end(), 0);
    auto rng = make_rng(derive_seed(spec.resolved_split_seed(), static_cast<std::uint64_t>(s)));
    std::shuffle(users.begin(), users.end(), rng);
    const auto n_test = std::max<std::size_t>(1, users.size() / 10);
    std::vector<int> test_users(users.begin(), users.begin() + static_cast<std::ptrdiff_t>(n_test));
    std::vector<int> train_users(users.begin() + static_cast<std::ptrdiff_t>(n_test), users.end());
    const auto n_val = std::max<std::size_t>(1, train_users.size() / 10);
    std::vector<int> val_users(train_users.begin(), train_users.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::vector<int> fit_users(train_users.begin() + static_cast<std::ptrdiff_t>(n_val), train_users.end());

    // Optional column cap: the targets plus the movies with most training ratings.
    RatingsMatrix R = full;
    std::vector<int> column(static_cast<std::size_t>(full.movies()));
    std::iota(column.begin(), column.end(), 0);
    if (spec.max_movies > 0 && spec.max_movies < full.movies()) {
      std::vector<int> count(static_cast<std::size_t>(full.movies()), 0);
      for (int u : train_users) {
        for (int m = 0; m < full.movies(); ++m) count[m] += full.at(u, m) != 0.0;
      }
      std::vector<int> order(column);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return count[a] > count[b]; });
      std::vector<int> keep(spec.target_movies);
      for (int m : order) {
        if (static_cast<int>(keep.size()) >= spec.max_movies) break;
        if (std::find(keep.begin(), keep.end(), m) == keep.end()) keep.push_back(m);
      }
      std::sort(keep.begin(), keep.end());
      R = RatingsMatrix(full.users(), static_cast<int>(keep.size()));
      for (int u = 0; u < full.users(); ++u) {
        for (std::size_t c = 0; c < keep.size(); ++c) R.set(u, static_cast<int>(c), full.at(u, keep[c]));
      }
      column = keep;
    }
    const auto mg = movie_similarity_graph(R, train_users, spec.knn_movies);

    for (int target : spec.target_movies) {
      const int col = static_cast<int>(std::find(column.begin(), column.end(), target) - column.begin());
      const auto vit = std::find(mg.movies.begin(), mg.movies.end(), col);
      if (vit == mg.movies.end()) throw InvalidArgument("recsys: target movie has no training ratings");
      const std::vector<int> readout{static_cast<int>(vit - mg.movies.begin())};
      Dataset data;
      data.train = rating_samples(R, mg, col, fit_users);
      data.validation = rating_samples(R, mg, col, val_users);
      data.test = rating_samples(R, mg, col, test_users);
      if (data.train.empty() || data.test.empty()) {
        throw InvalidArgument("recsys: target movie " + std::to_string(target) + " has too few ratings");
      }
      for (const auto& m : methods) {
        const std::vector<int> features = m.name == "fir" ? std::vector<int>{1} : spec.features;
        for (int F : features) {
          const auto key = run_key({spec.seed, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(target),
                                    static_cast<std::uint64_t>(F), method_code(m)});
          auto fitted = fit(spec, m, F, K, 1, Objective{LossKind::smooth_l1, readout}, Metric::rmse, mg.graph, data, key);
          const auto ctx = context_for(*fitted.model, mg.graph);
          const double rmse = evaluate(*fitted.model, ctx, data.test, Objective{LossKind::smooth_l1, readout},
                                       Metric::rmse, spec.threads);
          rep.run({m.name, F, K, m.resolution, 0, s, "target_movie", static_cast<double>(target), "rmse", rmse});
          add_history(out, method_label(m),
                      "s" + std::to_string(s) + "/movie" + std::to_string(target) + "/F" + std::to_string(F),
                      fitted.result);
          record_messages(out, fitted.model.get(), mg.graph, data.test.front().input);
        }
      }
    }
  }
  rep.aggregate();
  return out;
}

ExperimentOutput run_experiment(const ExperimentSpec& spec, std::ostream* log) {
  if (spec.experiment == "source_loc") return run_source_localization(spec, log);
  if (spec.experiment == "consensus") return run_consensus(spec, log);
  if (spec.experiment == "regression") return run_regression(spec, log);
  if (spec.experiment == "recsys") return run_recsys(spec, log);
  throw InvalidArgument("unknown experiment '" + spec.experiment + "'");
}

void write_experiment_outputs(const ExperimentSpec& spec, const ExperimentOutput& output,
                              const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("metrics.csv");
    write_metrics_csv(f, output.metrics);
  }
  {
    auto f = open("history.csv");
    write_history_csv(f, output.history);
  }
  {
    auto f = open("messages.csv");
    output.messages.write_csv(f);
  }
  {
    auto f = open("config.echo.json");
    f << spec_to_json(spec, true) << '\n';
  }
  if (!output.table_csv.empty()) {
    auto f = open("table.csv");
    f << output.table_csv;
  }
}

}  // namespace graphadapt
