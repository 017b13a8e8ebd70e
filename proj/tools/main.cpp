// graphadapt: command line front end for graph generation, experiments and
// the randomized self-checks.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "graphadapt/diagnostics.hpp"
#include "graphadapt/distsim.hpp"
#include "graphadapt/error.hpp"
#include "graphadapt/experiment_spec.hpp"
#include "graphadapt/experiments.hpp"
#include "graphadapt/graph_io.hpp"

namespace ga = graphadapt;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitAcceptance = 3;

struct RunOptions {
  std::string experiment;
  std::string spec_path;
  std::optional<std::uint64_t> seed;
  bool paper_scale = false;
  std::optional<int> threads;
  std::string out_dir;
  bool quiet = false;
};

// Reads the JSON experiment file (or starts from the experiment's defaults) and applies
// command line overrides before validation.
ga::ExperimentSpec resolve_spec(const RunOptions& o) {
  json v = json::object();
  if (!o.spec_path.empty()) {
    std::ifstream in(o.spec_path);
    if (!in) throw ga::ParseError("spec: cannot open " + o.spec_path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    (void)ga::spec_from_json(text);  // full diagnostics, including line/column
    v = json::parse(text);
  }
  if (!o.experiment.empty()) {
    if (v.contains("experiment") && v["experiment"] != o.experiment) {
      throw ga::InvalidArgument("spec file is for experiment '" + v["experiment"].get<std::string>() +
                                "', not '" + o.experiment + "'");
    }
    v["experiment"] = o.experiment;
  }
  if (o.seed) v["seed"] = *o.seed;
  if (o.paper_scale) v["paper_scale"] = true;
  if (o.threads) v["threads"] = *o.threads;
  if (!o.out_dir.empty()) v["output_dir"] = o.out_dir;
  return ga::spec_from_json(v.dump());
}

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--spec", o.spec_path, "JSON experiment spec");
  cmd->add_option("--seed", o.seed, "Run seed");
  cmd->add_flag("--paper-scale", o.paper_scale, "Use the full published protocol sizes");
  cmd->add_option("--threads", o.threads, "Worker threads for per-sample work");
  cmd->add_option("--out", o.out_dir, "Output directory (default $GRAPHADAPT_OUT/<experiment>)");
  cmd->add_flag("--quiet", o.quiet, "No progress lines");
}

int run_spec(const ga::ExperimentSpec& spec, bool quiet) {
  const auto out = ga::run_experiment(spec, quiet ? nullptr : &std::cerr);
  const auto dir = spec.resolved_output_dir();
  ga::write_experiment_outputs(spec, out, dir);
  std::cout << "wrote " << (dir / "metrics.csv").string() << '\n';
  return kExitOk;
}

std::vector<int> to_ints(const std::vector<double>& v) {
  std::vector<int> r;
  for (double x : v) {
    if (x != static_cast<int>(x)) throw ga::InvalidArgument("sweep values must be integers for this axis");
    r.push_back(static_cast<int>(x));
  }
  return r;
}

int cmd_gen_graph(const std::string& type, int nodes, int communities, double p, double q, int k,
                  const std::string& coords, std::uint64_t seed, bool normalize, const std::string& out) {
  ga::Graph g;
  std::vector<int> labels;
  if (type == "sbm") {
    auto sbm = ga::sbm_generate({nodes, communities, p, q, 50}, seed);
    g = std::move(sbm.graph);
    labels = std::move(sbm.community);
  } else if (type == "knn") {
    if (coords.empty()) throw ga::InvalidArgument("gen-graph knn needs --coords");
    g = ga::knn_geometric(ga::load_coordinates(coords), k);
  } else {
    throw ga::InvalidArgument("unknown graph type '" + type + "'");
  }
  if (normalize) g = ga::normalize_gso(g);
  if (out.empty() || out == "-") {
    ga::write_edge_list(std::cout, g);
  } else {
    ga::save_edge_list(out, g);
    if (!labels.empty()) {
      std::ofstream f(out + ".communities");
      for (std::size_t i = 0; i < labels.size(); ++i) f << i << ' ' << labels[i] << '\n';
    }
    std::cout << "wrote " << out << " (" << g.num_nodes() << " nodes, " << g.num_edges() << " edges)\n";
  }
  return kExitOk;
}

int cmd_proptest(std::uint64_t seed) {
  bool ok = true;
  for (auto kind : ga::all_activation_kinds()) {
    const auto r = ga::check_equivariance(kind, 10, 20, seed);
    const bool pass = r.max_deviation <= 1e-9;
    ok &= pass;
    std::cout << (pass ? "PASS" : "FAIL") << " equivariance " << ga::to_string(kind)
              << " max_dev=" << r.max_deviation << '\n';
  }
  const auto lip = ga::check_lipschitz(10000, seed);
  ok &= lip.violations == 0;
  std::cout << (lip.violations == 0 ? "PASS" : "FAIL") << " lipschitz pairs=" << lip.pairs
            << " violations=" << lip.violations << " worst_ratio=" << lip.worst_ratio << '\n';
  const auto dist = ga::check_distributed(10, 5, seed);
  const bool dist_ok = dist.max_deviation <= 1e-9 && dist.counts_match && dist.rejects_nonlocal;
  ok &= dist_ok;
  std::cout << (dist_ok ? "PASS" : "FAIL") << " distributed cases=" << dist.cases
            << " max_dev=" << dist.max_deviation << '\n';
  return ok ? kExitOk : kExitAcceptance;
}

int cmd_gradcheck(std::uint64_t seed) {
  bool ok = true;
  for (auto kind : ga::all_activation_kinds()) {
    const auto r = ga::check_gcnn_gradient(kind, seed);
    const bool pass = r.max_relative_error <= ga::gradient_tolerance(kind);
    ok &= pass;
    std::cout << (pass ? "PASS" : "FAIL") << " gradcheck " << ga::to_string(kind)
              << " max_rel_err=" << r.max_relative_error << " probes=" << r.probes
              << " skipped=" << r.skipped_probes << " resamples=" << r.resamples << '\n';
  }
  return ok ? kExitOk : kExitAcceptance;
}

int cmd_distcheck(std::uint64_t seed, int models, int graphs, const std::string& out) {
  const auto r = ga::check_distributed(models, graphs, seed);
  const bool ok = r.max_deviation <= 1e-9 && r.counts_match && r.rejects_nonlocal;
  std::cout << (ok ? "PASS" : "FAIL") << " distributed cases=" << r.cases << " max_dev=" << r.max_deviation
            << " counts_match=" << r.counts_match << " rejects_nonlocal=" << r.rejects_nonlocal << '\n';
  if (!out.empty()) {
    const auto model = ga::random_model(ga::ActivationKind::ga_max, 1, 2, 2, 2, 2, 1, seed);
    const auto graph = ga::random_graph(12, seed);
    const auto res = ga::run_distributed_forward(graph, model, ga::random_features(1, 12, seed));
    std::ofstream f(out);
    res.log.write_csv(f);
    std::cout << "wrote " << out << '\n';
  }
  return ok ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-adaptive activations for graph convolutional networks"};
  app.require_subcommand(1);

  std::string g_type = "sbm", g_coords, g_out;
  int g_nodes = 40, g_comm = 4, g_k = 10;
  double g_p = 0.8, g_q = 0.1;
  std::uint64_t g_seed = 1;
  bool g_norm = false;
  auto* gen = app.add_subcommand("gen-graph", "Generate an SBM or k-nearest-neighbor graph");
  gen->add_option("--type", g_type, "sbm or knn")->check(CLI::IsMember({"sbm", "knn"}));
  gen->add_option("--nodes", g_nodes, "Vertex count (sbm)");
  gen->add_option("--communities", g_comm, "Community count (sbm)");
  gen->add_option("--p", g_p, "Intra-community edge probability");
  gen->add_option("--q", g_q, "Inter-community edge probability");
  gen->add_option("--k", g_k, "Neighbors per vertex (knn)");
  gen->add_option("--coords", g_coords, "Coordinates file `i x y` (knn)");
  gen->add_option("--seed", g_seed, "Seed");
  gen->add_flag("--normalize", g_norm, "Divide the GSO by its spectral radius");
  gen->add_option("--out", g_out, "Edge-list output file (default stdout)");

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Run an experiment");
  run->add_option("experiment", run_opts.experiment, "source_loc | consensus | regression | recsys")
      ->check(CLI::IsMember(ga::experiment_ids()));
  add_run_options(run, run_opts);

  RunOptions sweep_opts;
  std::string sweep_axis;
  std::vector<double> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Run an experiment over one overridden sweep axis");
  sweep->add_option("experiment", sweep_opts.experiment, "Experiment id")
      ->required()
      ->check(CLI::IsMember(ga::experiment_ids()));
  sweep->add_option("--axis", sweep_axis, "features | filter_orders | resolutions | snr_db | link_loss")
      ->required()
      ->check(CLI::IsMember({"features", "filter_orders", "resolutions", "snr_db", "link_loss"}));
  sweep->add_option("--values", sweep_values, "Comma separated values")->required()->delimiter(',');
  add_run_options(sweep, sweep_opts);

  std::uint64_t check_seed = 1;
  auto* prop = app.add_subcommand("proptest", "Equivariance, Lipschitz and distributed checks");
  prop->add_option("--seed", check_seed, "Seed");
  auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of full GCNN gradients");
  grad->add_option("--seed", check_seed, "Seed");
  int dc_models = 10, dc_graphs = 5;
  std::string dc_out;
  auto* dist = app.add_subcommand("distcheck", "Distributed vs centralized forward pass");
  dist->add_option("--seed", check_seed, "Seed");
  dist->add_option("--models", dc_models, "Random models");
  dist->add_option("--graphs", dc_graphs, "Random graphs per model");
  dist->add_option("--messages", dc_out, "Write the message log of a sample run as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*gen) return cmd_gen_graph(g_type, g_nodes, g_comm, g_p, g_q, g_k, g_coords, g_seed, g_norm, g_out);
    if (*run) {
      if (run_opts.experiment.empty() && run_opts.spec_path.empty()) {
        throw ga::InvalidArgument("run needs an experiment id or --spec");
      }
      return run_spec(resolve_spec(run_opts), run_opts.quiet);
    }
    if (*sweep) {
      json v = json::parse(ga::spec_to_json(resolve_spec(sweep_opts)));
      if (sweep_axis == "snr_db" || sweep_axis == "link_loss") {
        v["data"][sweep_axis] = sweep_values;
      } else {
        v["model"][sweep_axis] = to_ints(sweep_values);
      }
      return run_spec(ga::spec_from_json(v.dump()), sweep_opts.quiet);
    }
    if (*prop) return cmd_proptest(check_seed);
    if (*grad) return cmd_gradcheck(check_seed);
    if (*dist) return cmd_distcheck(check_seed, dc_models, dc_graphs, dc_out);
  } catch (const ga::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ga::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ga::CheckpointError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitValidation;
}
