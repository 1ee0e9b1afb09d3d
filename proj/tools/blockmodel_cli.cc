// Command-line front end: generate, ingest, infer, score, sweep.

#include <openssl/evp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blockmodel/corpus.h"
#include "blockmodel/edge_list_io.h"
#include "blockmodel/inference.h"
#include "blockmodel/key_value.h"
#include "blockmodel/metrics.h"
#include "blockmodel/sweep.h"
#include "blockmodel/synth.h"

namespace fs = std::filesystem;
using namespace blockmodel;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return hex.str();
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

/// key=value manifest written once per output bundle.
class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& argv)
      : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {
    for (const auto& a : argv) args_ += (args_.empty() ? "" : " ") + a;
  }

  void config(const std::string& key, const std::string& value) { config_.emplace_back(key, value); }
  void input(const std::string& path) { inputs_.emplace_back(path, sha256_file(path)); }
  void output(const std::string& name, const fs::path& path) { outputs_.emplace_back(name, path.string()); }

  void write(const fs::path& dir) const {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::ofstream out(dir / "manifest.txt");
    out << "command = " << command_ << '\n' << "argv = " << args_ << '\n';
    for (const auto& [k, v] : config_) out << "config." << k << " = " << v << '\n';
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      out << "input." << i << ".path = " << inputs_[i].first << '\n'
          << "input." << i << ".sha256 = " << inputs_[i].second << '\n';
    }
    for (const auto& [k, v] : outputs_) out << "output." << k << " = " << v << '\n';
    out << "elapsed_seconds = " << fmt(seconds) << '\n';
    if (!out) throw std::runtime_error("failed to write manifest in '" + dir.string() + "'");
  }

 private:
  std::string command_;
  std::string args_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::pair<std::string, std::string>> config_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::pair<std::string, std::string>> outputs_;
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& i : items) s += (s.empty() ? "" : ",") + i;
  return s;
}

ModelSpec parse_model_or_usage(const std::string& name) {
  try {
    return parse_model_name(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// --- generate -------------------------------------------------------------

struct GenerateArgs {
  std::string spec;
  std::string out;
  std::uint64_t seed = 1;
  bool raw = false;
};

void cmd_generate(const GenerateArgs& a, const std::vector<std::string>& argv) {
  const KeyValues kv = read_key_values_file(a.spec);
  const SynthSpec spec = synth_spec_from(kv);
  degree_priors_from(kv, "prior.");
  kv.reject_unused();

  Manifest manifest("generate", argv);
  manifest.input(a.spec);
  std::mt19937_64 rng(a.seed);
  const SynthResult raw = generate(spec, rng);
  Graph graph = raw.graph;
  Partition truth = raw.truth;
  std::vector<std::string> labels = integer_labels(graph.num_vertices());
  if (!a.raw) {
    Postprocessed kept = postprocess(raw.graph, raw.truth, spec.lambda);
    labels.clear();
    for (const VertexId old : kept.new_to_old) labels.push_back(std::to_string(old));
    graph = std::move(kept.graph);
    truth = std::move(kept.truth);
  }

  const fs::path dir(a.out);
  fs::create_directories(dir);
  const fs::path edges = dir / "edges.tsv", truth_path = dir / "truth.tsv";
  auto e = open_output(edges);
  write_edge_list(e, graph, &labels);
  finish(e, edges);
  auto t = open_output(truth_path);
  write_partition(t, truth, &labels);
  finish(t, truth_path);

  std::istringstream echo(to_key_values(spec));
  for (std::string line; std::getline(echo, line);) {
    const auto eq = line.find(" = ");
    manifest.config(line.substr(0, eq), line.substr(eq + 3));
  }
  manifest.config("seed", std::to_string(a.seed));
  manifest.config("postprocess", a.raw ? "none" : (spec.lambda == 1.0 ? "giant_per_block" : "giant"));
  for (std::size_t r = 0; r < spec.blocks.size(); ++r) {
    const std::string base = "realized.block." + std::to_string(r) + ".";
    manifest.config(base + "kappa_out", fmt(raw.kappa_out[r]));
    if (spec.directed) manifest.config(base + "kappa_in", fmt(raw.kappa_in[r]));
    if (spec.blocks[r].family == PriorFamily::kPowerLaw) {
      manifest.config(base + "theta_min", fmt(raw.theta_min[r]));
    } else {
      manifest.config(base + "theta_draws", spec.blocks[r].poisson_theta == PoissonTheta::kConstant
                                                ? "constant theta equal to the mean"
                                                : "poisson integers used directly as theta");
    }
  }
  manifest.config("realized.vertices", std::to_string(graph.num_vertices()));
  manifest.config("realized.edges", std::to_string(graph.num_edges()));
  manifest.output("edges", edges);
  manifest.output("truth", truth_path);
  manifest.write(dir);
  std::cout << "wrote " << graph.num_vertices() << " vertices and " << graph.num_edges() << " edges to "
            << dir.string() << '\n';
}

// --- ingest ---------------------------------------------------------------

struct IngestArgs {
  std::string corpus;
  std::string out;
  int min_count = 1;
  bool simple = false;
  bool giant = false;
  bool bridge = false;
  std::string adjective_tags;
  std::string noun_tags;
};

void cmd_ingest(const IngestArgs& a, const std::vector<std::string>& argv) {
  Manifest manifest("ingest", argv);
  manifest.input(a.corpus);
  IngestConfig cfg;
  cfg.min_count = a.min_count;
  cfg.multigraph = !a.simple;
  cfg.restrict_to_giant = a.giant;
  cfg.bridge_nonvocab = a.bridge;
  if (!a.adjective_tags.empty()) {
    const auto tags = split_list(a.adjective_tags);
    cfg.adjective_tags = {tags.begin(), tags.end()};
  }
  if (!a.noun_tags.empty()) {
    const auto tags = split_list(a.noun_tags);
    cfg.noun_tags = {tags.begin(), tags.end()};
  }
  const CorpusNetwork net = build_network(read_tagged_stream_file(a.corpus), cfg);
  const NetworkSummary s = network_summary(net.graph, net.truth);

  const fs::path dir(a.out);
  fs::create_directories(dir);
  const fs::path edges = dir / "edges.tsv", truth = dir / "truth.tsv", labels = dir / "labels.tsv";
  auto e = open_output(edges);
  write_edge_list(e, net.graph, &net.labels);
  finish(e, edges);
  auto t = open_output(truth);
  write_partition(t, net.truth, &net.labels);
  finish(t, truth);
  auto l = open_output(labels);
  write_label_map(l, net.labels);
  finish(l, labels);

  manifest.config("min_count", std::to_string(cfg.min_count));
  manifest.config("multigraph", cfg.multigraph ? "true" : "false");
  manifest.config("restrict_to_giant", cfg.restrict_to_giant ? "true" : "false");
  manifest.config("bridge_nonvocab", cfg.bridge_nonvocab ? "true" : "false");
  manifest.config("adjective_tags", join({cfg.adjective_tags.begin(), cfg.adjective_tags.end()}));
  manifest.config("noun_tags", join({cfg.noun_tags.begin(), cfg.noun_tags.end()}));
  manifest.config("summary.n", std::to_string(s.n));
  manifest.config("summary.adjectives", std::to_string(s.adjectives));
  manifest.config("summary.nouns", std::to_string(s.nouns));
  manifest.config("summary.edges", std::to_string(s.edges));
  manifest.output("edges", edges);
  manifest.output("truth", truth);
  manifest.output("labels", labels);
  manifest.write(dir);
  std::cout << "n\tadjectives\tnouns\tedges\n"
            << s.n << '\t' << s.adjectives << '\t' << s.nouns << '\t' << s.edges << '\n';
}

// --- infer ----------------------------------------------------------------

struct InferArgs {
  std::string edges;
  bool undirected = false;
  std::string model = "dc";
  int k = 2;
  int runs = 10;
  std::int64_t steps = 1'000'000;
  std::string init = "random";
  bool kl = true;
  std::uint64_t seed = 1;
  std::string out;
  std::string priors;
  std::string truth;
  int threads = 0;
};

void cmd_infer(const InferArgs& a, const std::vector<std::string>& argv) {
  InferenceConfig cfg;
  cfg.model = parse_model_or_usage(a.model);
  cfg.k = a.k;
  cfg.runs = a.runs;
  cfg.mcmc_steps = a.steps;
  cfg.use_kl = a.kl;
  cfg.seed = a.seed;
  cfg.threads = a.threads;

  Manifest manifest("infer", argv);
  manifest.input(a.edges);
  LabeledGraph input = read_edge_list_file(a.edges, !a.undirected);
  if (input.graph.num_vertices() == 0) throw std::runtime_error("edge list '" + a.edges + "' has no edges");

  if (a.init == "nh") {
    if (a.undirected) throw UsageError("--init nh needs a directed edge list");
    cfg.init = InitKind::kNaiveHeuristic;
  } else if (a.init.rfind("file:", 0) == 0) {
    const std::string path = a.init.substr(5);
    manifest.input(path);
    cfg.init = InitKind::kGiven;
    cfg.given = align_partition(read_partition_file(path), input.labels, a.k);
  } else if (a.init != "random") {
    throw UsageError("--init must be random, nh or file:<path>");
  }
  if (!a.priors.empty()) {
    if (!cfg.model.degree_generation) throw UsageError("--priors only applies to dg-* models");
    const KeyValues kv = read_key_values_file(a.priors);
    cfg.model.degree_generation = degree_priors_from(kv).value_or(DegreePriorSet{});
    kv.reject_unused();
    manifest.input(a.priors);
  }

  // The naive heuristic reads directions, so it runs on the directed input.
  Graph graph = input.graph;
  bool projected = false;
  if (graph.directed() && !family_is_directed(cfg.model.family)) {
    std::cerr << "warning: model " << a.model << " is undirected; using the undirected projection\n";
    if (cfg.init == InitKind::kNaiveHeuristic) {
      std::mt19937_64 rng(cfg.seed);
      cfg.given = naive_heuristic(degrees(graph), rng);
      cfg.init = InitKind::kGiven;
    }
    graph = undirected_projection(graph);
    projected = true;
  } else if (!graph.directed() && family_is_directed(cfg.model.family)) {
    throw UsageError("model " + a.model + " needs a directed edge list");
  }

  const InferenceResult result = run_inference(graph, cfg);

  const fs::path dir(a.out);
  fs::create_directories(dir);
  const fs::path partition_path = dir / "partition.tsv", result_path = dir / "result.txt";
  auto p = open_output(partition_path);
  write_partition(p, result.best_partition, &input.labels);
  finish(p, partition_path);

  auto r = open_output(result_path);
  r << std::setprecision(15);
  r << "[result]\n"
    << "model = " << model_name(cfg.model) << '\n'
    << "k = " << cfg.k << '\n'
    << "objective = " << result.best_objective << '\n'
    << "occupied_blocks = " << result.best_partition.occupied_blocks() << '\n'
    << "vertices = " << graph.num_vertices() << '\n'
    << "edges = " << graph.num_edges() << '\n'
    << "projected = " << (projected ? "true" : "false") << '\n'
    << "\n[config]\n"
    << "runs = " << cfg.runs << '\n'
    << "steps = " << cfg.mcmc_steps << '\n'
    << "init = " << a.init << '\n'
    << "kl = " << (cfg.use_kl ? "true" : "false") << '\n'
    << "seed = " << result.seed << '\n'
    << "\n[runs]\n";
  for (const auto& run : result.runs) {
    const std::string base = "run." + std::to_string(run.run) + ".";
    r << base << "seed = " << run.seed << '\n'
      << base << "initial_objective = " << run.initial_objective << '\n'
      << base << "final_objective = " << run.final_objective << '\n';
  }
  if (!a.truth.empty()) {
    manifest.input(a.truth);
    const Partition truth = align_partition(read_partition_file(a.truth), input.labels, 1);
    r << "\n[truth]\n"
      << "nmi = " << nmi(truth, result.best_partition) << '\n';
    if (std::max(truth.num_blocks(), result.best_partition.num_blocks()) <= 8) {
      r << "accuracy = " << best_match_accuracy(truth, result.best_partition) << '\n';
    }
  }
  finish(r, result_path);

  manifest.config("model", model_name(cfg.model));
  manifest.config("k", std::to_string(cfg.k));
  manifest.config("runs", std::to_string(cfg.runs));
  manifest.config("steps", std::to_string(cfg.mcmc_steps));
  manifest.config("init", a.init);
  manifest.config("kl", cfg.use_kl ? "true" : "false");
  manifest.config("seed", std::to_string(cfg.seed));
  manifest.config("directed_input", a.undirected ? "false" : "true");
  manifest.config("projected", projected ? "true" : "false");
  manifest.output("partition", partition_path);
  manifest.output("result", result_path);
  manifest.write(dir);
  std::cout << "objective\t" << fmt(result.best_objective) << '\n';
}

// --- score ----------------------------------------------------------------

void cmd_score(const std::string& a_path, const std::string& b_path) {
  const auto a_entries = read_partition_file(a_path);
  const auto b_entries = read_partition_file(b_path);
  std::vector<std::string> labels;
  labels.reserve(a_entries.size());
  for (const auto& e : a_entries) labels.push_back(e.vertex);
  const Partition a = align_partition(a_entries, labels, 1);
  const Partition b = align_partition(b_entries, labels, 1);
  std::cout << std::setprecision(6) << std::fixed << "nmi\t" << nmi(a, b) << '\n';
  if (std::max(a.num_blocks(), b.num_blocks()) <= 8) {
    std::cout << "accuracy\t" << best_match_accuracy(a, b) << '\n';
  }
}

// --- sweep ----------------------------------------------------------------

struct SweepArgs {
  std::string spec;
  std::string lambdas;
  std::string models;
  int networks = 1;
  int runs = 1;
  std::int64_t steps = 100'000;
  bool kl = true;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 0;
};

void cmd_sweep(const SweepArgs& a, const std::vector<std::string>& argv) {
  SweepConfig cfg;
  for (const auto& name : split_list(a.models)) cfg.models.push_back(parse_model_or_usage(name));
  if (cfg.models.empty()) throw UsageError("--models needs at least one model name");
  for (const auto& l : split_list(a.lambdas)) {
    try {
      std::size_t used = 0;
      cfg.lambdas.push_back(std::stod(l, &used));
      if (used != l.size()) throw std::invalid_argument(l);
    } catch (const std::exception&) {
      throw UsageError("--lambdas: '" + l + "' is not a number");
    }
  }
  if (cfg.lambdas.empty()) throw UsageError("--lambdas needs at least one value");

  const KeyValues kv = read_key_values_file(a.spec);
  cfg.spec = synth_spec_from(kv);
  cfg.priors = degree_priors_from(kv, "prior.");
  kv.reject_unused();
  cfg.networks = a.networks;
  cfg.runs = a.runs;
  cfg.steps = a.steps;
  cfg.use_kl = a.kl;
  cfg.seed = a.seed;
  cfg.threads = a.threads;

  Manifest manifest("sweep", argv);
  manifest.input(a.spec);
  const auto rows = run_sweep(cfg);

  const fs::path dir(a.out);
  fs::create_directories(dir);
  const fs::path table = dir / "sweep.tsv";
  auto t = open_output(table);
  write_sweep_tsv(t, rows);
  finish(t, table);

  manifest.config("lambdas", a.lambdas);
  manifest.config("models", a.models);
  manifest.config("networks", std::to_string(cfg.networks));
  manifest.config("runs", std::to_string(cfg.runs));
  manifest.config("steps", std::to_string(cfg.steps));
  manifest.config("kl", cfg.use_kl ? "true" : "false");
  manifest.config("seed", std::to_string(cfg.seed));
  manifest.output("table", table);
  manifest.write(dir);
  std::cout << "wrote " << rows.size() << " rows to " << table.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson stochastic block models: generate, ingest, infer, score, sweep"};
  app.require_subcommand(1);
  const std::vector<std::string> args(argv, argv + argc);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Generate a synthetic planted network");
  generate_cmd->add_option("--spec", gen.spec, "Spec file (key = value)")->required()->check(CLI::ExistingFile);
  generate_cmd->add_option("--out", gen.out, "Output directory")->required();
  generate_cmd->add_option("--seed", gen.seed, "Random seed");
  generate_cmd->add_flag("--raw", gen.raw, "Keep isolated vertices and small components");

  IngestArgs ing;
  auto* ingest_cmd = app.add_subcommand("ingest", "Build a word adjacency network from a tagged corpus");
  ingest_cmd->add_option("--corpus", ing.corpus, "token<TAB>tag file")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--out", ing.out, "Output directory")->required();
  ingest_cmd->add_option("--min-count", ing.min_count, "Minimum word frequency")->check(CLI::PositiveNumber);
  ingest_cmd->add_flag("--simple", ing.simple, "Collapse repeated adjacencies to single edges");
  ingest_cmd->add_flag("--giant", ing.giant, "Keep only the giant component");
  ingest_cmd->add_flag("--bridge-nonvocab", ing.bridge, "Link vocabulary words across other tokens");
  ingest_cmd->add_option("--adjective-tags", ing.adjective_tags, "Comma-separated adjective tags");
  ingest_cmd->add_option("--noun-tags", ing.noun_tags, "Comma-separated noun tags");

  InferArgs inf;
  auto* infer_cmd = app.add_subcommand("infer", "Fit a block model to an edge list");
  infer_cmd->add_option("--edges", inf.edges, "Edge list file")->required()->check(CLI::ExistingFile);
  infer_cmd->add_flag("--undirected", inf.undirected, "Read the edge list as undirected");
  infer_cmd->add_option("--model", inf.model, "sbm, dc, ddc, odc, dg-dc, dg-ddc or dg-odc");
  infer_cmd->add_option("--k", inf.k, "Number of blocks")->check(CLI::PositiveNumber);
  infer_cmd->add_option("--runs", inf.runs, "Independent runs")->check(CLI::PositiveNumber);
  infer_cmd->add_option("--steps", inf.steps, "Heat-bath steps per run")->check(CLI::NonNegativeNumber);
  infer_cmd->add_option("--init", inf.init, "random, nh or file:<path>");
  infer_cmd->add_flag("--kl,!--no-kl", inf.kl, "Run the KL heuristic before sampling");
  infer_cmd->add_option("--seed", inf.seed, "Random seed");
  infer_cmd->add_option("--out", inf.out, "Output directory")->required();
  infer_cmd->add_option("--priors", inf.priors, "Degree prior file for dg-* models")->check(CLI::ExistingFile);
  infer_cmd->add_option("--truth", inf.truth, "Ground-truth partition to score against")->check(CLI::ExistingFile);
  infer_cmd->add_option("--threads", inf.threads, "Parallel runs (0 = all cores)");

  std::string score_a, score_b;
  auto* score_cmd = app.add_subcommand("score", "Compare two partition files");
  score_cmd->add_option("first", score_a, "Partition file")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("second", score_b, "Partition file")->required()->check(CLI::ExistingFile);

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "NMI over lambda for several models");
  sweep_cmd->add_option("--spec", sw.spec, "Spec file (key = value)")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--lambdas", sw.lambdas, "Comma-separated lambda values")->required();
  sweep_cmd->add_option("--models", sw.models, "Comma-separated model names")->required();
  sweep_cmd->add_option("--networks", sw.networks, "Networks per lambda")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--runs", sw.runs, "Runs per network")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--steps", sw.steps, "Heat-bath steps per run")->check(CLI::NonNegativeNumber);
  sweep_cmd->add_flag("--kl,!--no-kl", sw.kl, "Run the KL heuristic before sampling");
  sweep_cmd->add_option("--seed", sw.seed, "Random seed");
  sweep_cmd->add_option("--out", sw.out, "Output directory")->required();
  sweep_cmd->add_option("--threads", sw.threads, "Parallel jobs (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate_cmd->parsed()) cmd_generate(gen, args);
    if (ingest_cmd->parsed()) cmd_ingest(ing, args);
    if (infer_cmd->parsed()) cmd_infer(inf, args);
    if (score_cmd->parsed()) cmd_score(score_a, score_b);
    if (sweep_cmd->parsed()) cmd_sweep(sw, args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
