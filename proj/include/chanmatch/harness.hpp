#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chanmatch/generators.hpp"
#include "chanmatch/graph.hpp"
#include "chanmatch/matchability.hpp"
#include "chanmatch/matcher.hpp"
#include "chanmatch/rng.hpp"

namespace chanmatch {

enum class ExperimentKind { ModelSweep, FeasibilityProfile, RecoveryCurve, SummaryStats, NoiseHarden };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& text);

/// A grid entry that keeps the text it was configured with, so output keys
/// echo exactly what the user wrote.
struct GridValue {
  std::string text;
  double value = 0;
};

/// Parses "0.01", "1e-3" or "10^-2.5". Throws InputError on anything else.
GridValue parse_grid_value(const std::string& text);
/// Comma separated list of grid values.
std::vector<GridValue> parse_grid(const std::string& text);

/// Integer text is a count; anything else is a fraction f in (0, 1] resolved
/// to max(2, round(f n)).
std::size_t resolve_k(const GridValue& k, std::size_t n);

struct ModelEntry {
  std::string tag;
  GeneratorSpec spec;
};

/// The five models compared at a fixed mean degree d: G(n,m) with
/// m = round(n d / 2), Watts-Strogatz at beta 0.05 and 0.75 with the nearest
/// even degree, and preferential attachment with gamma 1 and 2 attaching
/// max(1, round(d / 2)) edges per step.
std::vector<ModelEntry> calibrated_models(std::size_t n, double d);

/// Generator from JSON such as {"model": "er_gnp", "n": 500, "alpha": 0.3}.
GeneratorSpec parse_generator(const nlohmann::json& j);
/// Generator from compact text such as "er_gnp:n=500,alpha=0.3".
GeneratorSpec parse_generator(const std::string& text);

struct ExperimentSpec {
  std::string id = "experiment";
  ExperimentKind kind = ExperimentKind::FeasibilityProfile;

  std::optional<GeneratorSpec> generator;
  /// Edge-list paths. summary_stats accepts several; other kinds use the first.
  std::vector<std::string> inputs;
  EdgeListOptions edge_list;
  /// Vertex count for inputs; 0 infers it from the largest id.
  std::size_t input_n = 0;
  bool largest_component = false;

  std::vector<ModelEntry> models;

  std::vector<GridValue> p_grid;
  std::vector<GridValue> k_grid;
  std::vector<GridValue> c_grid;
  std::size_t replicates = 1;
  std::size_t m = kDefaultSampleCount;

  FaqInit init = FaqInit::Identity;
  std::size_t max_iters = 30;
  std::size_t restarts = 0;

  Seed seed = 0;
  unsigned threads = 1;
  std::string output;
};

/// Throws InputError when the grids required by the kind are empty or out of
/// range, replicates is 0, or neither a generator nor an input is given.
void validate(const ExperimentSpec& spec);

/// One metric value in tidy form. Fields that do not apply are left empty.
struct ResultRow {
  std::string experiment;
  std::string kind;
  std::string graph;
  std::size_t n = 0;
  /// Replicate index, or "mean" for replicate-averaged rows.
  std::string replicate;
  std::string p;
  std::string k_spec;
  std::string k;
  std::string m;
  std::string c;
  std::string metric;
  double value = 0;
  double wall_time_s = 0;
};

std::vector<ResultRow> run_feasibility_profile(const ExperimentSpec& spec);
std::vector<ResultRow> run_recovery_curve(const ExperimentSpec& spec);
std::vector<ResultRow> run_model_sweep(const ExperimentSpec& spec);

struct StatsEntry {
  std::string graph;
  SummaryStats stats;
};

std::vector<StatsEntry> compute_summary_stats(const ExperimentSpec& spec);
std::vector<ResultRow> run_summary_stats(const ExperimentSpec& spec);
void write_stats_table(std::ostream& out, const std::vector<StatsEntry>& entries);

struct HardenResult {
  Graph graph;
  double beta = 0;
};

/// Mixes Bernoulli(beta) shortcuts into the input graph at the first p of
/// p_grid.
HardenResult run_noise_harden(const ExperimentSpec& spec);

/// Dispatches on spec.kind. NoiseHarden yields rows describing the result.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

/// Long-format CSV. wall_time_s is appended only when include_timing is set,
/// which keeps default output byte-identical across runs.
void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool include_timing = false);

struct Config {
  std::vector<ExperimentSpec> experiments;
  std::string output;
};

/// {"seed": .., "threads": .., "out": .., "experiments": [{...}, ...]}.
/// Experiment blocks inherit seed and threads from the top level.
Config parse_config(const nlohmann::json& j);
Config load_config(const std::string& path);
ExperimentSpec parse_experiment(const nlohmann::json& j, Seed default_seed = 0, unsigned default_threads = 1);

}  // namespace chanmatch
