#include "chanmatch/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "chanmatch/channel.hpp"
#include "chanmatch/errors.hpp"
#include "chanmatch/format.hpp"
#include "chanmatch/parallel.hpp"

namespace chanmatch {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool is_count_text(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// JSON access with InputError instead of json exceptions.

std::size_t get_count(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing key '") + key + "'");
  const json& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number()) {
    const double d = v.get<double>();
    if (d >= 0 && std::floor(d) == d) return static_cast<std::size_t>(d);
  }
  throw InputError(std::string("key '") + key + "' must be a nonnegative integer");
}

double get_real(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing key '") + key + "'");
  if (!j.at(key).is_number()) throw InputError(std::string("key '") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::string get_string(const json& j, const char* key) {
  if (!j.at(key).is_string()) throw InputError(std::string("key '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

bool get_bool(const json& j, const char* key) {
  if (!j.at(key).is_boolean()) throw InputError(std::string("key '") + key + "' must be true or false");
  return j.at(key).get<bool>();
}

std::vector<GridValue> get_grid(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_string()) return parse_grid(v.get<std::string>());
  if (!v.is_array()) throw InputError(std::string("key '") + key + "' must be a list");
  std::vector<GridValue> out;
  for (const auto& e : v) {
    if (e.is_string()) {
      out.push_back(parse_grid_value(e.get<std::string>()));
    } else if (e.is_number()) {
      out.push_back(parse_grid_value(e.dump()));
    } else {
      throw InputError(std::string("key '") + key + "' must hold numbers or strings");
    }
  }
  return out;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& item : j.items()) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return item.key() == a; });
    if (!ok) throw InputError("unknown key '" + item.key() + "' in " + where);
  }
}

FaqInit parse_init(const std::string& text) {
  if (text == "identity") return FaqInit::Identity;
  if (text == "barycenter") return FaqInit::Barycenter;
  if (text == "random") return FaqInit::RandomDoublyStochastic;
  throw InputError("unknown init '" + text + "' (expected identity, barycenter or random)");
}

// Graph loading

std::string input_tag(const std::string& path) { return std::filesystem::path(path).stem().string(); }

Graph load_input(const ExperimentSpec& spec, const std::string& path) {
  Graph g = read_edge_list(path, spec.input_n, spec.edge_list);
  if (spec.largest_component) {
    const auto keep = largest_component(g);
    g = induced_subgraph(g, keep);
  }
  return g;
}

std::string source_tag(const ExperimentSpec& spec) {
  if (spec.generator) return describe(*spec.generator);
  return input_tag(spec.inputs.front());
}

ResultRow base_row(const ExperimentSpec& spec, const std::string& graph, std::size_t n) {
  ResultRow row;
  row.experiment = spec.id;
  row.kind = to_string(spec.kind);
  row.graph = graph;
  row.n = n;
  return row;
}

// Appends one "mean" row per group of per-replicate rows sharing every key
// except the replicate index, in order of first appearance.
void append_means(std::vector<ResultRow>& rows) {
  std::map<std::string, std::size_t> index;
  std::vector<ResultRow> means;
  std::vector<std::size_t> counts;
  for (const auto& r : rows) {
    std::string key;
    for (const auto* f : {&r.graph, &r.p, &r.k_spec, &r.k, &r.m, &r.c, &r.metric}) key += *f + '\x1f';
    key += std::to_string(r.n);
    auto [it, inserted] = index.try_emplace(key, means.size());
    if (inserted) {
      ResultRow m = r;
      m.replicate = "mean";
      m.value = 0;
      m.wall_time_s = 0;
      means.push_back(std::move(m));
      counts.push_back(0);
    }
    means[it->second].value += r.value;
    means[it->second].wall_time_s += r.wall_time_s;
    ++counts[it->second];
  }
  for (std::size_t i = 0; i < means.size(); ++i) means[i].value /= static_cast<double>(counts[i]);
  rows.insert(rows.end(), means.begin(), means.end());
}

std::vector<ResultRow> flatten(std::vector<std::vector<ResultRow>>& slots) {
  std::vector<ResultRow> rows;
  for (auto& s : slots) std::move(s.begin(), s.end(), std::back_inserter(rows));
  return rows;
}

// Per-replicate feasibility rows for one graph source. `graphs` holds either
// one fixed graph or one graph per replicate.
std::vector<ResultRow> profile_rows(const ExperimentSpec& spec, const std::string& tag,
                                    const std::vector<Graph>& graphs, Seed seed) {
  const std::size_t nk = spec.k_grid.size();
  const std::size_t tasks = spec.replicates * nk;
  const unsigned inner = std::max(1U, static_cast<unsigned>(spec.threads / std::max<std::size_t>(1, tasks)));
  std::vector<std::vector<ResultRow>> slots(tasks);
  parallel_for(tasks, spec.threads, [&](std::size_t t) {
    const std::size_t r = t / nk;
    const GridValue& kv = spec.k_grid[t % nk];
    const Graph& g = graphs.size() == 1 ? graphs.front() : graphs[r];
    const std::size_t k = resolve_k(kv, g.size());
    const auto start = Clock::now();
    const std::size_t ks[] = {k};
    const auto profile = matchability_profile(g, ks, spec.m, derive_seed(seed, {2, r}), inner);
    const double wall = seconds_since(start);
    const auto& rec = profile.records.front();

    ResultRow row = base_row(spec, tag, g.size());
    row.replicate = std::to_string(r);
    row.k_spec = kv.text;
    row.k = std::to_string(k);
    row.m = std::to_string(spec.m);
    row.wall_time_s = wall;
    const std::pair<const char*, double> metrics[] = {
        {"xhat_mean", rec.xhat_mean},
        {"xhat_norm", rec.xhat_norm},
        {"xhat_min", static_cast<double>(rec.xhat_min)},
        {"phat_star", rec.phat_star},
    };
    for (const auto& [name, value] : metrics) {
      row.metric = name;
      row.value = value;
      slots[t].push_back(row);
    }
  });
  return flatten(slots);
}

std::vector<Graph> replicate_graphs(const GeneratorSpec& gen, std::size_t replicates, Seed seed, unsigned threads) {
  std::vector<Graph> graphs(replicates);
  parallel_for(replicates, threads, [&](std::size_t r) { graphs[r] = generate(gen, derive_seed(seed, {1, r})); });
  return graphs;
}

json parse_compact_generator(const std::string& text) {
  const auto colon = text.find(':');
  json j;
  j["model"] = trim(text.substr(0, colon));
  if (colon == std::string::npos) return j;
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("generator parameter '" + item + "' must be key=value");
    const std::string key = trim(item.substr(0, eq));
    const std::string val = trim(item.substr(eq + 1));
    if (is_count_text(val)) {
      j[key] = std::stoull(val);
    } else if (auto d = parse_double(val)) {
      j[key] = *d;
    } else {
      throw InputError("generator parameter '" + key + "' has non-numeric value '" + val + "'");
    }
  }
  return j;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::ModelSweep:
      return "model_sweep";
    case ExperimentKind::FeasibilityProfile:
      return "feasibility_profile";
    case ExperimentKind::RecoveryCurve:
      return "recovery_curve";
    case ExperimentKind::SummaryStats:
      return "summary_stats";
    case ExperimentKind::NoiseHarden:
      return "noise_harden";
  }
  return "unknown";
}

ExperimentKind parse_kind(const std::string& text) {
  for (auto k : {ExperimentKind::ModelSweep, ExperimentKind::FeasibilityProfile, ExperimentKind::RecoveryCurve,
                 ExperimentKind::SummaryStats, ExperimentKind::NoiseHarden})
    if (to_string(k) == text) return k;
  throw InputError("unknown experiment kind '" + text + "'");
}

GridValue parse_grid_value(const std::string& raw) {
  const std::string text = trim(raw);
  GridValue g{text, 0};
  if (text.rfind("10^", 0) == 0) {
    const auto e = parse_double(text.substr(3));
    if (!e) throw InputError("bad grid value '" + text + "'");
    g.value = std::pow(10.0, *e);
    return g;
  }
  const auto v = parse_double(text);
  if (!v) throw InputError("bad grid value '" + text + "'");
  g.value = *v;
  return g;
}

std::vector<GridValue> parse_grid(const std::string& text) {
  std::vector<GridValue> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_grid_value(item));
  return out;
}

std::size_t resolve_k(const GridValue& k, std::size_t n) {
  if (is_count_text(k.text)) return static_cast<std::size_t>(k.value);
  if (!(k.value > 0.0 && k.value <= 1.0)) throw InputError("k fraction '" + k.text + "' must lie in (0, 1]");
  const auto r = static_cast<std::size_t>(std::llround(k.value * static_cast<double>(n)));
  return std::min(n, std::max<std::size_t>(2, r));
}

std::vector<ModelEntry> calibrated_models(std::size_t n, double d) {
  if (!(d > 0) || d >= static_cast<double>(n)) throw InputError("calibrated_models: need 0 < d < n");
  const std::string suffix = " d=" + format_number(d);
  const auto m = static_cast<std::size_t>(std::llround(static_cast<double>(n) * d / 2));
  const std::size_t d_ws = std::max<std::size_t>(2, 2 * static_cast<std::size_t>(std::llround(d / 2)));
  const std::size_t per_step = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(d / 2)));
  return {
      {"GNM" + suffix, ErGnm{n, m}},
      {"WS(0.05)" + suffix, WattsStrogatz{n, d_ws, 0.05}},
      {"WS(0.75)" + suffix, WattsStrogatz{n, d_ws, 0.75}},
      {"PA(1)" + suffix, PrefAttach{n, 1.0, per_step}},
      {"PA(2)" + suffix, PrefAttach{n, 2.0, per_step}},
  };
}

GeneratorSpec parse_generator(const json& j) {
  if (!j.is_object() || !j.contains("model")) throw InputError("generator must be an object with a 'model' key");
  const std::string model = get_string(j, "model");
  GeneratorSpec spec = [&]() -> GeneratorSpec {
    if (model == "er_gnp") {
      check_keys(j, {"model", "n", "alpha"}, model);
      return ErGnp{get_count(j, "n"), get_real(j, "alpha")};
    }
    if (model == "er_gnm") {
      check_keys(j, {"model", "n", "m"}, model);
      return ErGnm{get_count(j, "n"), get_count(j, "m")};
    }
    if (model == "bernoulli") {
      check_keys(j, {"model", "n", "lambda"}, model);
      const std::size_t n = get_count(j, "n");
      return BernoulliLambda{PairProbabilities(n, get_real(j, "lambda"))};
    }
    if (model == "ring_lattice") {
      check_keys(j, {"model", "n", "d"}, model);
      return RingLattice{get_count(j, "n"), get_count(j, "d")};
    }
    if (model == "newman_watts") {
      check_keys(j, {"model", "n", "d", "beta"}, model);
      return NewmanWatts{get_count(j, "n"), get_count(j, "d"), get_real(j, "beta")};
    }
    if (model == "watts_strogatz") {
      check_keys(j, {"model", "n", "d", "beta"}, model);
      return WattsStrogatz{get_count(j, "n"), get_count(j, "d"), get_real(j, "beta")};
    }
    if (model == "pref_attach") {
      check_keys(j, {"model", "n", "gamma", "d"}, model);
      return PrefAttach{get_count(j, "n"), get_real(j, "gamma"), get_count(j, "d")};
    }
    if (model == "random_regular") {
      check_keys(j, {"model", "n", "d"}, model);
      return RandomRegular{get_count(j, "n"), get_count(j, "d")};
    }
    throw InputError("unknown generator model '" + model + "'");
  }();
  validate(spec);
  return spec;
}

GeneratorSpec parse_generator(const std::string& text) { return parse_generator(parse_compact_generator(text)); }

void validate(const ExperimentSpec& spec) {
  if (spec.replicates < 1) throw InputError("replicates must be >= 1");
  if (spec.m < 1) throw InputError("m must be >= 1");
  const bool has_source = spec.generator.has_value() || !spec.inputs.empty();
  auto need_grid = [](const std::vector<GridValue>& g, const char* name) {
    if (g.empty()) throw InputError(std::string(name) + " must not be empty");
  };
  for (const auto& c : spec.c_grid)
    if (!(c.value > 0 && c.value <= 1)) throw InputError("c value '" + c.text + "' must lie in (0, 1]");
  for (const auto& k : spec.k_grid) {
    if (is_count_text(k.text)) {
      if (k.value < 2) throw InputError("k count '" + k.text + "' must be >= 2");
    } else if (!(k.value > 0 && k.value <= 1)) {
      throw InputError("k fraction '" + k.text + "' must lie in (0, 1]");
    }
  }
  switch (spec.kind) {
    case ExperimentKind::FeasibilityProfile:
      if (!has_source) throw InputError("feasibility_profile needs a generator or an input");
      need_grid(spec.k_grid, "k_grid");
      break;
    case ExperimentKind::ModelSweep:
      if (spec.models.empty()) throw InputError("model_sweep needs at least one model");
      need_grid(spec.k_grid, "k_grid");
      break;
    case ExperimentKind::RecoveryCurve:
      if (!has_source) throw InputError("recovery_curve needs a generator or an input");
      need_grid(spec.p_grid, "p_grid");
      for (const auto& p : spec.p_grid)
        if (!(p.value >= 0 && p.value <= 1)) throw InputError("p value '" + p.text + "' must lie in [0, 1]");
      break;
    case ExperimentKind::SummaryStats:
      if (spec.inputs.empty()) throw InputError("summary_stats needs at least one input");
      break;
    case ExperimentKind::NoiseHarden:
      if (spec.inputs.empty()) throw InputError("noise_harden needs an input");
      need_grid(spec.p_grid, "p_grid");
      break;
  }
}

std::vector<ResultRow> run_feasibility_profile(const ExperimentSpec& spec) {
  validate(spec);
  std::vector<Graph> graphs;
  if (spec.generator) {
    graphs = replicate_graphs(*spec.generator, spec.replicates, spec.seed, spec.threads);
  } else {
    graphs.push_back(load_input(spec, spec.inputs.front()));
  }
  auto rows = profile_rows(spec, source_tag(spec), graphs, spec.seed);
  append_means(rows);
  return rows;
}

std::vector<ResultRow> run_model_sweep(const ExperimentSpec& spec) {
  validate(spec);
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < spec.models.size(); ++i) {
    const Seed seed = derive_seed(spec.seed, {3, i});
    const auto graphs = replicate_graphs(spec.models[i].spec, spec.replicates, seed, spec.threads);
    auto part = profile_rows(spec, spec.models[i].tag, graphs, seed);
    std::move(part.begin(), part.end(), std::back_inserter(rows));
  }
  append_means(rows);
  return rows;
}

std::vector<ResultRow> run_recovery_curve(const ExperimentSpec& spec) {
  validate(spec);
  const Graph a = spec.generator ? generate(*spec.generator, derive_seed(spec.seed, {1, 0}))
                                 : load_input(spec, spec.inputs.front());
  const std::string tag = source_tag(spec);
  const std::size_t tasks = spec.p_grid.size() * spec.replicates;
  const Permutation truth = Permutation::identity(a.size());
  std::vector<std::vector<ResultRow>> slots(tasks);
  parallel_for(tasks, spec.threads, [&](std::size_t t) {
    const std::size_t pi = t / spec.replicates;
    const std::size_t r = t % spec.replicates;
    const GridValue& p = spec.p_grid[pi];
    const auto start = Clock::now();
    const Graph b = corrupt_uniform(a, UniformChannelSpec{p.value, truth}, derive_seed(spec.seed, {4, pi, r}));
    FaqOptions opts;
    opts.init = spec.init;
    opts.max_iters = spec.max_iters;
    opts.restarts = spec.restarts;
    opts.noise_estimate = p.value;
    const auto res = faq_match(a, b, opts, derive_seed(spec.seed, {5, pi, r}));
    const double wall = seconds_since(start);

    ResultRow row = base_row(spec, tag, a.size());
    row.replicate = std::to_string(r);
    row.p = p.text;
    row.wall_time_s = wall;
    auto emit = [&](const char* metric, double value, const std::string& c = {}) {
      row.metric = metric;
      row.value = value;
      row.c = c;
      slots[t].push_back(row);
    };
    emit("accuracy", match_accuracy(res.p_hat, truth));
    emit("objective", static_cast<double>(res.objective));
    for (const auto& c : spec.c_grid) emit("accuracy_by_degree", accuracy_by_degree(res.p_hat, truth, a, c.value), c.text);
  });
  auto rows = flatten(slots);
  append_means(rows);
  return rows;
}

std::vector<StatsEntry> compute_summary_stats(const ExperimentSpec& spec) {
  validate(spec);
  std::vector<StatsEntry> out(spec.inputs.size());
  parallel_for(spec.inputs.size(), spec.threads, [&](std::size_t i) {
    out[i] = {input_tag(spec.inputs[i]), summary_stats(load_input(spec, spec.inputs[i]))};
  });
  return out;
}

std::vector<ResultRow> run_summary_stats(const ExperimentSpec& spec) {
  std::vector<ResultRow> rows;
  for (const auto& e : compute_summary_stats(spec)) {
    ResultRow row = base_row(spec, e.graph, e.stats.n);
    const std::pair<const char*, double> metrics[] = {
        {"mean_degree", e.stats.mean_degree}, {"density", e.stats.density}, {"clustering", e.stats.clustering},
        {"skewness", e.stats.skewness},       {"rsd", e.stats.rsd},
    };
    for (const auto& [name, value] : metrics) {
      row.metric = name;
      row.value = value;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_stats_table(std::ostream& out, const std::vector<StatsEntry>& entries) {
  std::size_t width = 5;
  for (const auto& e : entries) width = std::max(width, e.graph.size());
  const auto flags = out.flags();
  out << std::left << std::setw(static_cast<int>(width)) << "graph" << std::right << std::setw(8) << "n"
      << std::setw(10) << "d" << std::setw(10) << "density" << std::setw(10) << "C" << std::setw(10) << "g1"
      << std::setw(10) << "RSD" << '\n';
  out << std::fixed;
  for (const auto& e : entries) {
    const auto& s = e.stats;
    out << std::left << std::setw(static_cast<int>(width)) << e.graph << std::right << std::setw(8) << s.n
        << std::setprecision(3) << std::setw(10) << s.mean_degree << std::setw(10) << s.density << std::setw(10)
        << s.clustering << std::setw(10) << s.skewness << std::setw(10) << s.rsd << '\n';
  }
  out.flags(flags);
}

HardenResult run_noise_harden(const ExperimentSpec& spec) {
  validate(spec);
  const Graph a = load_input(spec, spec.inputs.front());
  const double p = spec.p_grid.front().value;
  HardenResult res;
  res.graph = noise_hardening(a, p, spec.seed);
  res.beta = hardening_rate(a.size(), p);
  return res;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::FeasibilityProfile:
      return run_feasibility_profile(spec);
    case ExperimentKind::ModelSweep:
      return run_model_sweep(spec);
    case ExperimentKind::RecoveryCurve:
      return run_recovery_curve(spec);
    case ExperimentKind::SummaryStats:
      return run_summary_stats(spec);
    case ExperimentKind::NoiseHarden: {
      const auto res = run_noise_harden(spec);
      ResultRow row = base_row(spec, input_tag(spec.inputs.front()), res.graph.size());
      row.p = spec.p_grid.front().text;
      std::vector<ResultRow> rows;
      row.metric = "beta";
      row.value = res.beta;
      rows.push_back(row);
      row.metric = "edges";
      row.value = static_cast<double>(res.graph.edge_count());
      rows.push_back(row);
      return rows;
    }
  }
  return {};
}

void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool include_timing) {
  out << "experiment,kind,graph,n,replicate,p,k_spec,k,m,c,metric,value";
  if (include_timing) out << ",wall_time_s";
  out << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.experiment) << ',' << r.kind << ',' << csv_field(r.graph) << ',' << r.n << ','
        << r.replicate << ',' << csv_field(r.p) << ',' << csv_field(r.k_spec) << ',' << r.k << ',' << r.m << ','
        << csv_field(r.c) << ',' << r.metric << ',' << format_number(r.value);
    if (include_timing) out << ',' << format_number(r.wall_time_s);
    out << '\n';
  }
}

ExperimentSpec parse_experiment(const json& j, Seed default_seed, unsigned default_threads) {
  if (!j.is_object()) throw InputError("experiment block must be an object");
  check_keys(j,
             {"id", "kind", "generator", "input", "inputs", "one_indexed", "drop_loops", "n", "largest_component",
              "models", "calibrate", "p_grid", "k_grid", "c_grid", "replicates", "m", "init", "max_iters",
              "restarts", "seed", "threads", "out"},
             "experiment");
  ExperimentSpec s;
  s.seed = default_seed;
  s.threads = default_threads;
  if (!j.contains("kind")) throw InputError("experiment block needs a 'kind'");
  s.kind = parse_kind(get_string(j, "kind"));
  s.id = j.contains("id") ? get_string(j, "id") : to_string(s.kind);
  if (j.contains("generator"))
    s.generator = j["generator"].is_string() ? parse_generator(j["generator"].get<std::string>())
                                             : parse_generator(j["generator"]);
  if (j.contains("input")) s.inputs.push_back(get_string(j, "input"));
  if (j.contains("inputs")) {
    if (!j["inputs"].is_array()) throw InputError("'inputs' must be a list of paths");
    for (const auto& p : j["inputs"]) {
      if (!p.is_string()) throw InputError("'inputs' must be a list of paths");
      s.inputs.push_back(p.get<std::string>());
    }
  }
  if (j.contains("one_indexed")) s.edge_list.one_indexed = get_bool(j, "one_indexed");
  if (j.contains("drop_loops")) s.edge_list.drop_loops = get_bool(j, "drop_loops");
  if (j.contains("n")) s.input_n = get_count(j, "n");
  if (j.contains("largest_component")) s.largest_component = get_bool(j, "largest_component");
  if (j.contains("models")) {
    if (!j["models"].is_array()) throw InputError("'models' must be a list");
    for (const auto& mj : j["models"]) {
      const json& g = mj.contains("generator") ? mj["generator"] : mj;
      GeneratorSpec spec = g.is_string() ? parse_generator(g.get<std::string>()) : parse_generator(g);
      const std::string tag = mj.contains("tag") ? get_string(mj, "tag") : describe(spec);
      s.models.push_back({tag, std::move(spec)});
    }
  }
  if (j.contains("calibrate")) {
    const json& c = j["calibrate"];
    check_keys(c, {"n", "degrees"}, "calibrate");
    const std::size_t n = get_count(c, "n");
    for (const auto& d : get_grid(c, "degrees")) {
      auto models = calibrated_models(n, d.value);
      std::move(models.begin(), models.end(), std::back_inserter(s.models));
    }
  }
  if (j.contains("p_grid")) s.p_grid = get_grid(j, "p_grid");
  if (j.contains("k_grid")) s.k_grid = get_grid(j, "k_grid");
  if (j.contains("c_grid")) s.c_grid = get_grid(j, "c_grid");
  if (j.contains("replicates")) s.replicates = get_count(j, "replicates");
  if (j.contains("m")) s.m = get_count(j, "m");
  if (j.contains("init")) s.init = parse_init(get_string(j, "init"));
  if (j.contains("max_iters")) s.max_iters = get_count(j, "max_iters");
  if (j.contains("restarts")) s.restarts = get_count(j, "restarts");
  if (j.contains("seed")) s.seed = get_count(j, "seed");
  if (j.contains("threads")) s.threads = static_cast<unsigned>(get_count(j, "threads"));
  if (j.contains("out")) s.output = get_string(j, "out");
  validate(s);
  return s;
}

Config parse_config(const json& j) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  check_keys(j, {"seed", "threads", "out", "experiments"}, "config");
  Config cfg;
  const Seed seed = j.contains("seed") ? get_count(j, "seed") : 0;
  const unsigned threads = j.contains("threads") ? static_cast<unsigned>(get_count(j, "threads")) : 1;
  if (j.contains("out")) cfg.output = get_string(j, "out");
  if (!j.contains("experiments") || !j["experiments"].is_array())
    throw InputError("config needs an 'experiments' list");
  for (const auto& e : j["experiments"]) cfg.experiments.push_back(parse_experiment(e, seed, threads));
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw InputError("config '" + path + "': " + e.what());
  }
  return parse_config(j);
}

}  // namespace chanmatch
