#include "cascade_pricer/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "cascade_pricer/cascade.hpp"
#include "cascade_pricer/errors.hpp"
#include "cascade_pricer/local_search.hpp"
#include "cascade_pricer/oracle.hpp"

namespace cascade_pricer::cli {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("bad integer for " + what + ": '" + s + "'");
  }
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    std::uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("bad integer for " + what + ": '" + s + "'");
  }
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("bad number for " + what + ": '" + s + "'");
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> grid;
  for (const std::string& part : split_commas(s)) grid.push_back(parse_double(part, "grid"));
  return grid;
}

std::vector<int> parse_ids(const std::string& s, const std::string& what) {
  std::vector<int> ids;
  for (const std::string& part : split_commas(s)) ids.push_back(parse_int(part, what));
  return ids;
}

std::string require(const Manifest& m, const std::string& key) {
  if (!m.has(key)) throw ValidationError(m.command + " requires --" + key);
  return m.get(key);
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open graph file: " + path);
  return load_edge_list(in).graph;
}

PricingStrategy load_strategy_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open strategy file: " + path);
  return load_strategy(in);
}

BuyerModel resolve_model(const std::string& spec) {
  if (spec == "steps4")
    return BuyerModel::icm(CostFunction::regular_steps({0.7, 0.65, 0.2, 0.05}));
  if (spec == "affine") return BuyerModel::icm(CostFunction::affine());
  if (spec == "accept-half")
    return BuyerModel::icm(CostFunction::step({0.0, 0.5, 1.0}, {1.0, 0.0}));
  if (spec == "ltm-affine") return BuyerModel::ltm(InfluenceFunction::affine());
  std::ifstream in(spec);
  if (!in) throw ValidationError("unknown model alias or unreadable file: " + spec);
  return load_model_config(in);
}

/** Routes to --<key> when present, otherwise to the fallback stream. */
class OutFile {
 public:
  OutFile(const Manifest& m, std::ostream& fallback, const std::string& key = "out") {
    const std::string path = m.get(key);
    if (path.empty() || path == "-") {
      os_ = &fallback;
    } else {
      file_.open(path);
      if (!file_) throw ValidationError("cannot open output file: " + path);
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

void cmd_generate(const Manifest& m, std::ostream& out) {
  OutFile sink(m, out);
  m.echo(sink.stream());
  if (m.has("gap6")) {
    save_edge_list(adaptivity_gap_instance().graph, sink.stream());
  } else if (m.has("pa")) {
    std::vector<int> nm = parse_ids(m.get("pa"), "pa");
    if (nm.size() != 2) throw ValidationError("--pa wants N,M");
    Graph g = generate_preferential_attachment(nm[0], nm[1],
                                               parse_u64(m.get("seed", "0"), "seed"));
    save_edge_list(g, sink.stream());
  } else {
    throw ValidationError("generate needs --pa N,M or --gap6");
  }
}

void run_estimate_only(const Manifest& m, const Graph& g, const BuyerModel& model,
                       std::ostream& out) {
  PricingStrategy s = load_strategy_file(require(m, "strategy"));
  SeedSet seeds(parse_ids(m.get("seed-nodes", "0"), "seed-nodes"));
  OutFile sink(m, out);
  m.echo(sink.stream());
  RevenueEstimate e =
      estimate_revenue(g, seeds, s, model, ThresholdTape(parse_u64(m.get("seed", "0"), "seed")),
                       parse_int(m.get("trials", "10000"), "trials"), 0, m.threads);
  write_estimate_csv(e, sink.stream());
}

void run_trace(const Manifest& m, const Graph& g, const BuyerModel& model, std::ostream& out) {
  PricingStrategy s = load_strategy_file(require(m, "strategy"));
  SeedSet seeds(parse_ids(m.get("seed-nodes", "0"), "seed-nodes"));
  OutFile sink(m, out, "trace-out");
  m.echo(sink.stream());
  CascadeTrace t =
      simulate_once(g, seeds, s, model, ThresholdTape(parse_u64(m.get("seed", "0"), "seed")),
                    parse_u64(m.get("trial", "0"), "trial"));
  t.write(sink.stream());
}

/*
 * The experiment pipeline: for each repeat draw a seed node, build the
 * tree-based assignment and a random one, and improve both by local
 * search against a shared tape. Rows average the incumbent estimate at
 * each iteration across repeats.
 */
void run_pipeline(const Manifest& m, const Graph& g, const BuyerModel& model, std::ostream& out) {
  const int repeats = parse_int(m.get("repeats", "5"), "repeats");
  const int iterations = parse_int(m.get("iterations", "200"), "iterations");
  const std::vector<double> grid = parse_grid(m.get("grid", "0,0.25,0.5,0.75,1"));
  const double z = parse_double(m.get("cashback", "0"), "cashback");
  if (repeats < 1) throw ValidationError("at least one repeat");
  if (iterations < 0) throw ValidationError("negative iteration count");

  SearchConfig cfg;
  cfg.grid = grid;
  cfg.trials_per_estimate = parse_int(m.get("trials", "300"), "trials");
  cfg.max_visits = iterations;
  cfg.max_passes = iterations + 1;
  cfg.epsilon = m.has("epsilon") ? parse_double(m.get("epsilon"), "epsilon") : -1.0;
  cfg.threads = m.threads;

  std::mt19937_64 rng(parse_u64(m.get("seed", "0"), "seed"));
  const auto rows = static_cast<std::size_t>(iterations) + 1;
  struct Acc {
    std::vector<double> mean, var;
  };
  Acc acc[2];
  for (Acc& a : acc) {
    a.mean.assign(rows, 0.0);
    a.var.assign(rows, 0.0);
  }
  const char* names[2] = {"maxleaf", "random"};

  for (int rep = 0; rep < repeats; ++rep) {
    std::uniform_int_distribution<int> pick(0, g.node_count() - 1);
    const int seed_node = pick(rng);
    const std::uint64_t tape_seed = rng();
    const std::uint64_t maxleaf_seed = rng();
    const std::uint64_t random_seed = rng();
    SeedSet seeds{seed_node};
    ThresholdTape tape(tape_seed);

    for (int which = 0; which < 2; ++which) {
      PricingStrategy start =
          which == 0 ? build_strategy_maxleaf(g, seeds, model, maxleaf_seed).strategy
                     : build_random_pricing(g, grid, random_seed);
      RevenueEstimate e0 = estimate_revenue(g, seeds, start, model, tape,
                                            cfg.trials_per_estimate, 0, m.threads);
      if (z > 0.0) {
        set_cashback(start, z, e0.mean);
        e0 = estimate_revenue(g, seeds, start, model, tape, cfg.trials_per_estimate, 0,
                              m.threads);
      }
      SearchResult res = local_search_improve(g, seeds, start, model, tape, cfg);

      double cur_mean = e0.mean, cur_err = e0.std_error;
      std::size_t it = 0;
      acc[which].mean[0] += cur_mean;
      acc[which].var[0] += cur_err * cur_err;
      for (const SearchStep& step : res.history) {
        cur_mean = step.estimate;
        cur_err = step.std_error;
        if (++it >= rows) break;
        acc[which].mean[it] += cur_mean;
        acc[which].var[it] += cur_err * cur_err;
      }
      // A converged search pads the remaining rows with its final state.
      while (++it < rows) {
        acc[which].mean[it] += cur_mean;
        acc[which].var[it] += cur_err * cur_err;
      }
    }
  }

  OutFile sink(m, out);
  m.echo(sink.stream());
  sink.stream() << "strategy,iteration,mean_revenue,stderr\n";
  for (int which = 0; which < 2; ++which) {
    for (std::size_t it = 0; it < rows; ++it) {
      sink.stream() << names[which] << "," << it << ","
                    << fmt(acc[which].mean[it] / repeats) << ","
                    << fmt(std::sqrt(acc[which].var[it]) / repeats) << "\n";
    }
  }
}

void cmd_run(const Manifest& m, std::ostream& out) {
  Graph g = load_graph_file(require(m, "graph"));
  BuyerModel model = resolve_model(m.get("model", "steps4"));
  if (m.has("estimate-only"))
    run_estimate_only(m, g, model, out);
  else if (m.has("trace-out"))
    run_trace(m, g, model, out);
  else
    run_pipeline(m, g, model, out);
}

void cmd_localsearch(const Manifest& m, std::ostream& out) {
  Graph g = load_graph_file(require(m, "graph"));
  BuyerModel model = resolve_model(m.get("model", "steps4"));
  SeedSet seeds(parse_ids(m.get("seed-nodes", "0"), "seed-nodes"));

  PricingStrategy start = [&] {
    if (m.has("strategy")) return load_strategy_file(m.get("strategy"));
    if (m.has("uniform")) {
      PricingStrategy s = build_uniform_pricing(g, parse_double(m.get("uniform"), "uniform"));
      for (int v : seeds.ids()) s.mark_seed(v);
      return s;
    }
    throw ValidationError("localsearch needs --strategy FILE or --uniform PRICE");
  }();

  SearchConfig cfg;
  cfg.grid = parse_grid(m.get("grid", "0,0.25,0.5,0.75,1"));
  cfg.trials_per_estimate = parse_int(m.get("trials", "1000"), "trials");
  cfg.max_passes = parse_int(m.get("passes", "10"), "passes");
  cfg.max_visits = parse_int(m.get("visits", "-1"), "visits");
  cfg.epsilon = m.has("epsilon") ? parse_double(m.get("epsilon"), "epsilon") : -1.0;
  cfg.threads = m.threads;

  SearchResult res = local_search_improve(
      g, seeds, std::move(start), model,
      ThresholdTape(parse_u64(m.get("seed", "0"), "seed")), cfg);

  OutFile sink(m, out);
  m.echo(sink.stream());
  sink.stream() << "iteration,node,adopted,price,mean_revenue,stderr\n";
  for (const SearchStep& s : res.history) {
    sink.stream() << s.iteration << "," << s.node << "," << (s.adopted ? 1 : 0) << ","
                  << fmt(s.price) << "," << fmt(s.estimate) << "," << fmt(s.std_error) << "\n";
  }
  if (m.has("strategy-out")) {
    std::ofstream sfile(m.get("strategy-out"));
    if (!sfile) throw ValidationError("cannot open output file: " + m.get("strategy-out"));
    m.echo(sfile);
    save_strategy(res.strategy, sfile);
  }
}

void cmd_oracle(const Manifest& m, std::ostream& out) {
  GapInstance inst = m.has("gap6")
                         ? adaptivity_gap_instance()
                         : GapInstance{load_graph_file(require(m, "graph")),
                                       SeedSet(parse_ids(m.get("seed-nodes", "0"), "seed-nodes")),
                                       resolve_model(m.get("model", "accept-half")),
                                       parse_grid(m.get("grid", "0,0.5,1"))};

  NonAdaptiveOptimum fixed =
      optimal_nonadaptive_bruteforce(inst.graph, inst.seeds, inst.model, inst.grid);
  const double adaptive =
      optimal_adaptive_value(inst.graph, inst.seeds, inst.model, inst.grid);

  OutFile sink(m, out);
  m.echo(sink.stream());
  sink.stream() << "static,adaptive,ratio\n"
                << fmt(fixed.revenue) << "," << fmt(adaptive) << ","
                << fmt(adaptive / fixed.revenue) << "\n";
}

void cmd_hardness(const Manifest& m, std::ostream& out) {
  Graph source = [&] {
    if (m.has("edge")) return Graph::from_edges(2, {{0, 1}});
    if (m.has("triangle")) return Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
    return load_graph_file(require(m, "source"));
  }();
  HardnessInstance inst =
      build_hardness_instance(source, parse_int(m.get("k", "-1"), "k"));

  const std::string prefix = require(m, "out-prefix");
  {
    std::ofstream edges(prefix + ".edges");
    if (!edges) throw ValidationError("cannot open output file: " + prefix + ".edges");
    m.echo(edges);
    save_edge_list(inst.graph, edges);
  }
  {
    std::ofstream layers(prefix + ".layers");
    if (!layers) throw ValidationError("cannot open output file: " + prefix + ".layers");
    m.echo(layers);
    for (int v = 0; v < inst.graph.node_count(); ++v)
      layers << v << " " << inst.layer[static_cast<std::size_t>(v)] << "\n";
  }

  m.echo(out);
  out << "n,d,k,p,cover_size,cover_revenue\n";
  out << inst.graph.node_count() << "," << inst.d << "," << inst.k << "," << fmt(inst.p);
  if (m.has("cover")) {
    std::vector<int> cover = parse_ids(m.get("cover"), "cover");
    out << "," << cover.size() << "," << fmt(hardness_cover_revenue(inst, cover));
  } else {
    out << ",,";
  }
  out << "\n";
}

}  // namespace

bool Manifest::has(const std::string& key) const {
  for (const auto& [k, v] : options)
    if (k == key) return true;
  return false;
}

std::string Manifest::get(const std::string& key, const std::string& fallback) const {
  for (const auto& [k, v] : options)
    if (k == key) return v;
  return fallback;
}

void Manifest::echo(std::ostream& out) const {
  out << "# command=" << command << "\n";
  for (const auto& [k, v] : options) out << "# " << k << "=" << v << "\n";
}

Manifest parse_args(int argc, const char* const* argv) {
  if (argc < 2)
    throw ValidationError("usage: cascade-pricer <generate|run|localsearch|oracle|hardness> ...");
  Manifest m;
  m.command = argv[1];
  bool threads_set = false;
  for (int i = 2; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--", 0) != 0)
      throw ValidationError("expected a --flag, got '" + arg + "'");
    const std::string key = arg.substr(2);
    if (key.empty()) throw ValidationError("empty flag name");
    std::string value = "1";
    if (i + 1 < argc && std::string(argv[i + 1]).rfind("--", 0) != 0) value = argv[++i];
    if (key == "threads") {
      m.threads = parse_int(value, "threads");
      threads_set = true;
    } else {
      m.options.emplace_back(key, value);
    }
  }
  if (!threads_set) {
    if (const char* env = std::getenv("CASCADE_PRICER_THREADS"))
      m.threads = parse_int(env, "CASCADE_PRICER_THREADS");
  }
  if (m.threads < 1) throw ValidationError("thread count must be positive");
  return m;
}

void execute(const Manifest& m, std::ostream& out) {
  if (m.command == "generate")
    cmd_generate(m, out);
  else if (m.command == "run")
    cmd_run(m, out);
  else if (m.command == "localsearch")
    cmd_localsearch(m, out);
  else if (m.command == "oracle")
    cmd_oracle(m, out);
  else if (m.command == "hardness")
    cmd_hardness(m, out);
  else
    throw ValidationError("unknown command: '" + m.command + "'");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    execute(parse_args(argc, argv), out);
    return 0;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cascade_pricer::cli
