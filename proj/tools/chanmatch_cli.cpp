#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <new>

#include "chanmatch/errors.hpp"
#include "chanmatch/format.hpp"
#include "chanmatch/harness.hpp"

namespace cm = chanmatch;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

struct Common {
  cm::Seed seed = 0;
  unsigned threads = 1;
  std::string out;
  std::string config;
  bool timing = false;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

struct GraphFlags {
  std::vector<std::string> inputs;
  std::string generator;
  bool one_indexed = false;
  bool drop_loops = false;
  std::size_t n = 0;
  bool largest_component = false;
};

void add_common(CLI::App* cmd, Common& c) {
  c.seed_opt = cmd->add_option("--seed", c.seed, "64-bit master seed");
  c.threads_opt = cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  c.out_opt = cmd->add_option("--out", c.out, "Output path (default stdout)");
  cmd->add_option("--config", c.config, "JSON experiment manifest")->check(CLI::ExistingFile);
  cmd->add_flag("--timing", c.timing, "Append a wall_time_s column");
}

void add_graph_flags(CLI::App* cmd, GraphFlags& g, bool generator) {
  cmd->add_option("--input", g.inputs, "Edge-list file");
  if (generator) cmd->add_option("--generator", g.generator, "Generator, e.g. er_gnp:n=500,alpha=0.3");
  cmd->add_flag("--one-indexed", g.one_indexed, "Vertex ids in the edge list start at 1");
  cmd->add_flag("--drop-loops", g.drop_loops, "Silently drop self-loops");
  cmd->add_option("--n", g.n, "Vertex count (default: largest id + 1)");
  cmd->add_flag("--largest-component", g.largest_component, "Keep only the largest connected component");
}

void apply_graph_flags(const GraphFlags& g, cm::ExperimentSpec& s) {
  s.inputs = g.inputs;
  if (!g.generator.empty()) s.generator = cm::parse_generator(g.generator);
  s.edge_list.one_indexed = g.one_indexed;
  s.edge_list.drop_loops = g.drop_loops;
  s.input_n = g.n;
  s.largest_component = g.largest_component;
}

cm::FaqInit parse_init(const std::string& text) {
  if (text == "identity") return cm::FaqInit::Identity;
  if (text == "barycenter") return cm::FaqInit::Barycenter;
  if (text == "random") return cm::FaqInit::RandomDoublyStochastic;
  throw cm::InputError("unknown init '" + text + "'");
}

// Writes to `path`, or stdout when empty.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw cm::IoError("cannot write '" + path + "'");
  fn(out);
  if (!out) throw cm::IoError("write failed for '" + path + "'");
}

void run_specs(std::vector<cm::ExperimentSpec> specs, const Common& c, const std::string& default_out) {
  // Group rows by destination, preserving manifest order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<cm::ResultRow>> by_dest;
  for (auto& s : specs) {
    if (c.seed_opt->count()) s.seed = c.seed;
    if (c.threads_opt->count()) s.threads = c.threads;
    if (c.out_opt->count()) s.output.clear();
    const std::string dest = s.output.empty() ? default_out : s.output;
    if (s.kind == cm::ExperimentKind::NoiseHarden) {
      const auto res = cm::run_noise_harden(s);
      with_output(dest, [&](std::ostream& os) { cm::write_edge_list(os, res.graph, s.edge_list.one_indexed); });
      std::cerr << s.id << ": beta=" << cm::format_number(res.beta) << " edges=" << res.graph.edge_count() << '\n';
      continue;
    }
    auto rows = cm::run_experiment(s);
    if (!by_dest.count(dest)) order.push_back(dest);
    auto& bucket = by_dest[dest];
    std::move(rows.begin(), rows.end(), std::back_inserter(bucket));
  }
  for (const auto& dest : order)
    with_output(dest, [&](std::ostream& os) { cm::write_rows_csv(os, by_dest[dest], c.timing); });
}

// Runs the manifest's experiments of `kind` (all of them when kind is empty).
void run_config(const Common& c, std::optional<cm::ExperimentKind> kind) {
  auto cfg = cm::load_config(c.config);
  std::vector<cm::ExperimentSpec> specs;
  for (auto& s : cfg.experiments)
    if (!kind || s.kind == *kind) specs.push_back(std::move(s));
  if (specs.empty()) throw cm::InputError("config '" + c.config + "' has no matching experiments");
  run_specs(std::move(specs), c, c.out_opt->count() ? c.out : cfg.output);
}

int run(int argc, char** argv) {
  CLI::App app{"Corrupting-channel graph matching toolkit"};
  app.require_subcommand(1);

  // stats
  Common stats_c;
  GraphFlags stats_g;
  auto* stats = app.add_subcommand("stats", "Summary statistics of edge-list graphs");
  add_common(stats, stats_c);
  stats->add_option("--input,inputs", stats_g.inputs, "Edge-list files");
  stats->add_flag("--one-indexed", stats_g.one_indexed, "Vertex ids start at 1");
  stats->add_flag("--drop-loops", stats_g.drop_loops, "Silently drop self-loops");
  stats->add_option("--n", stats_g.n, "Vertex count (default: largest id + 1)");
  stats->add_flag("--largest-component", stats_g.largest_component, "Keep only the largest component");

  // profile
  Common prof_c;
  GraphFlags prof_g;
  std::string prof_k = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0";
  std::size_t prof_m = cm::kDefaultSampleCount, prof_reps = 1;
  std::string prof_id = "feasibility_profile";
  auto* profile = app.add_subcommand("profile", "Matchability profile over a k grid");
  add_common(profile, prof_c);
  add_graph_flags(profile, prof_g, true);
  profile->add_option("--k-grid", prof_k, "Shuffle sizes: counts or fractions of n")->capture_default_str();
  profile->add_option("--m", prof_m, "Permutations sampled per k")->capture_default_str();
  profile->add_option("--replicates", prof_reps, "Replicates (fresh graph each for generators)");
  profile->add_option("--id", prof_id, "Experiment id written to the CSV");

  // sweep
  Common sweep_c;
  std::size_t sweep_n = 500, sweep_m = cm::kDefaultSampleCount, sweep_reps = 1;
  std::string sweep_degrees, sweep_k = "0.1,0.5,1.0", sweep_id = "model_sweep";
  std::vector<std::string> sweep_models;
  auto* sweep = app.add_subcommand("sweep", "Feasibility profiles across random graph models");
  add_common(sweep, sweep_c);
  sweep->add_option("--n", sweep_n, "Vertices per graph")->capture_default_str();
  sweep->add_option("--degrees", sweep_degrees, "Mean degrees for the calibrated model set, e.g. 5,50");
  sweep->add_option("--model", sweep_models, "Explicit generator (repeatable)");
  sweep->add_option("--k-grid", sweep_k, "Shuffle sizes")->capture_default_str();
  sweep->add_option("--m", sweep_m, "Permutations sampled per k")->capture_default_str();
  sweep->add_option("--replicates", sweep_reps, "Graphs per model");
  sweep->add_option("--id", sweep_id, "Experiment id written to the CSV");

  // recover
  Common rec_c;
  GraphFlags rec_g;
  std::string rec_p = "10^-3,10^-2.5,10^-2,10^-1.5,10^-1,10^-0.5", rec_cg, rec_init = "identity";
  std::string rec_id = "recovery_curve";
  std::size_t rec_reps = 1, rec_iters = 30, rec_restarts = 0;
  auto* recover = app.add_subcommand("recover", "Matching accuracy under uniform corruption");
  add_common(recover, rec_c);
  add_graph_flags(recover, rec_g, true);
  recover->add_option("--p-grid", rec_p, "Channel noise levels")->capture_default_str();
  recover->add_option("--c-grid", rec_cg, "Top-degree fractions for accuracy_by_degree");
  recover->add_option("--replicates", rec_reps, "Corrupted copies per p");
  recover->add_option("--init", rec_init, "identity, barycenter or random")->capture_default_str();
  recover->add_option("--max-iters", rec_iters, "Frank-Wolfe iterations")->capture_default_str();
  recover->add_option("--restarts", rec_restarts, "Extra random restarts");
  recover->add_option("--id", rec_id, "Experiment id written to the CSV");

  // harden
  Common hard_c;
  GraphFlags hard_g;
  std::string hard_p;
  auto* harden = app.add_subcommand("harden", "Mix in random shortcuts so the graph tolerates noise p");
  add_common(harden, hard_c);
  add_graph_flags(harden, hard_g, false);
  harden->add_option("--p", hard_p, "Target channel noise in (0, 1/2)");

  // match
  Common match_c;
  std::string match_a, match_b, match_init = "barycenter", match_complement = "auto";
  bool match_one = false;
  std::size_t match_iters = 30, match_restarts = 0;
  std::optional<double> match_noise;
  auto* match = app.add_subcommand("match", "Match graph A against graph B with FAQ");
  add_common(match, match_c);
  match->add_option("--a", match_a, "Edge list of A")->required();
  match->add_option("--b", match_b, "Edge list of B")->required();
  match->add_flag("--one-indexed", match_one, "Vertex ids start at 1");
  match->add_option("--init", match_init, "identity, barycenter or random")->capture_default_str();
  match->add_option("--max-iters", match_iters, "Frank-Wolfe iterations")->capture_default_str();
  match->add_option("--restarts", match_restarts, "Extra random restarts");
  match->add_option("--complement", match_complement, "auto, never or always")->capture_default_str();
  match->add_option("--noise-estimate", match_noise, "Channel noise estimate; > 1/2 matches the complement");

  // run
  Common run_c;
  auto* run_all = app.add_subcommand("run", "Run every experiment in a manifest");
  add_common(run_all, run_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  auto fill_common = [](const Common& c, cm::ExperimentSpec& s) {
    s.seed = c.seed;
    s.threads = c.threads;
  };

  if (*stats) {
    if (!stats_c.config.empty()) return run_config(stats_c, cm::ExperimentKind::SummaryStats), 0;
    cm::ExperimentSpec s;
    s.kind = cm::ExperimentKind::SummaryStats;
    s.id = "summary_stats";
    fill_common(stats_c, s);
    apply_graph_flags(stats_g, s);
    const auto entries = cm::compute_summary_stats(s);
    cm::write_stats_table(std::cout, entries);
    if (!stats_c.out.empty()) with_output(stats_c.out, [&](std::ostream& os) {
      cm::write_rows_csv(os, cm::run_summary_stats(s), stats_c.timing);
    });
    return 0;
  }
  if (*profile) {
    if (!prof_c.config.empty()) return run_config(prof_c, cm::ExperimentKind::FeasibilityProfile), 0;
    cm::ExperimentSpec s;
    s.kind = cm::ExperimentKind::FeasibilityProfile;
    s.id = prof_id;
    fill_common(prof_c, s);
    apply_graph_flags(prof_g, s);
    s.k_grid = cm::parse_grid(prof_k);
    s.m = prof_m;
    s.replicates = prof_reps;
    run_specs({s}, prof_c, prof_c.out);
    return 0;
  }
  if (*sweep) {
    if (!sweep_c.config.empty()) return run_config(sweep_c, cm::ExperimentKind::ModelSweep), 0;
    cm::ExperimentSpec s;
    s.kind = cm::ExperimentKind::ModelSweep;
    s.id = sweep_id;
    fill_common(sweep_c, s);
    for (const auto& text : sweep_models) {
      auto g = cm::parse_generator(text);
      s.models.push_back({cm::describe(g), std::move(g)});
    }
    if (!sweep_degrees.empty())
      for (const auto& d : cm::parse_grid(sweep_degrees)) {
        auto models = cm::calibrated_models(sweep_n, d.value);
        std::move(models.begin(), models.end(), std::back_inserter(s.models));
      }
    s.k_grid = cm::parse_grid(sweep_k);
    s.m = sweep_m;
    s.replicates = sweep_reps;
    run_specs({s}, sweep_c, sweep_c.out);
    return 0;
  }
  if (*recover) {
    if (!rec_c.config.empty()) return run_config(rec_c, cm::ExperimentKind::RecoveryCurve), 0;
    cm::ExperimentSpec s;
    s.kind = cm::ExperimentKind::RecoveryCurve;
    s.id = rec_id;
    fill_common(rec_c, s);
    apply_graph_flags(rec_g, s);
    s.p_grid = cm::parse_grid(rec_p);
    if (!rec_cg.empty()) s.c_grid = cm::parse_grid(rec_cg);
    s.replicates = rec_reps;
    s.init = parse_init(rec_init);
    s.max_iters = rec_iters;
    s.restarts = rec_restarts;
    run_specs({s}, rec_c, rec_c.out);
    return 0;
  }
  if (*harden) {
    if (!hard_c.config.empty()) return run_config(hard_c, cm::ExperimentKind::NoiseHarden), 0;
    cm::ExperimentSpec s;
    s.kind = cm::ExperimentKind::NoiseHarden;
    s.id = "noise_harden";
    fill_common(hard_c, s);
    apply_graph_flags(hard_g, s);
    if (hard_p.empty()) throw cm::InputError("harden: --p is required");
    s.p_grid = {cm::parse_grid_value(hard_p)};
    run_specs({s}, hard_c, hard_c.out);
    return 0;
  }
  if (*match) {
    cm::EdgeListOptions el;
    el.one_indexed = match_one;
    cm::Graph a = cm::read_edge_list(match_a, 0, el);
    cm::Graph b = cm::read_edge_list(match_b, 0, el);
    // Pad the smaller inferred vertex count so isolated trailing vertices do not
    // cause a spurious size mismatch.
    const std::size_t n = std::max(a.size(), b.size());
    if (a.size() != n) a = cm::read_edge_list(match_a, n, el);
    if (b.size() != n) b = cm::read_edge_list(match_b, n, el);
    cm::FaqOptions opts;
    opts.init = parse_init(match_init);
    opts.max_iters = match_iters;
    opts.restarts = match_restarts;
    opts.noise_estimate = match_noise;
    if (match_complement == "auto") {
      opts.complement_mode = cm::ComplementMode::Auto;
    } else if (match_complement == "never") {
      opts.complement_mode = cm::ComplementMode::Never;
    } else if (match_complement == "always") {
      opts.complement_mode = cm::ComplementMode::Always;
    } else {
      throw cm::InputError("--complement must be auto, never or always");
    }
    const auto res = cm::faq_match(a, b, opts, match_c.seed);
    const std::size_t base = match_one ? 1 : 0;
    with_output(match_c.out, [&](std::ostream& os) {
      os << "vertex_a,vertex_b\n";
      for (cm::Vertex i = 0; i < n; ++i) os << i + base << ',' << res.p_hat[i] + base << '\n';
    });
    std::cerr << "objective=" << res.objective << " iterations=" << res.iterations
              << " converged=" << (res.converged ? "true" : "false")
              << " complemented=" << (res.complemented ? "true" : "false") << '\n';
    return 0;
  }
  if (*run_all) {
    if (run_c.config.empty()) throw cm::InputError("run: --config is required");
    run_config(run_c, std::nullopt);
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cm::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource error: out of memory\n";
    return kExitResource;
  } catch (const cm::IoError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
