#include "blockmodel/sweep.h"

#include <iomanip>
#include <stdexcept>

#include "blockmodel/metrics.h"
#include "blockmodel/parallel.h"

namespace blockmodel {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Network {
  Graph graph;
  Graph projected;  // undirected projection of a directed graph
  Partition truth;
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return splitmix64(h ^ c);
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  if (config.lambdas.empty()) throw std::invalid_argument("sweep needs at least one lambda");
  if (config.models.empty()) throw std::invalid_argument("sweep needs at least one model");
  if (config.networks < 1) throw std::invalid_argument("sweep needs at least one network per lambda");
  for (const auto& model : config.models) {
    if (family_is_directed(model.family) && !config.spec.directed) {
      throw std::invalid_argument("model " + model_name(model) + " needs a directed spec");
    }
  }
  for (const double lambda : config.lambdas) {
    SynthSpec s = config.spec;
    s.lambda = lambda;
    validate(s);
  }

  const std::size_t n_lambda = config.lambdas.size();
  const auto n_networks = static_cast<std::size_t>(config.networks);
  const std::size_t n_models = config.models.size();
  const int threads = resolve_threads(config.threads);

  std::vector<Network> networks(n_lambda * n_networks);
  parallel_for(networks.size(), threads, [&](std::size_t i) {
    SynthSpec spec = config.spec;
    spec.lambda = config.lambdas[i / n_networks];
    std::mt19937_64 rng(derive_seed(config.seed, i / n_networks, i % n_networks));
    const SynthResult raw = generate(spec, rng);
    Postprocessed kept = postprocess(raw.graph, raw.truth, spec.lambda);
    Network& net = networks[i];
    net.truth = std::move(kept.truth);
    net.graph = std::move(kept.graph);
    if (net.graph.directed()) net.projected = undirected_projection(net.graph);
  });

  const auto k = static_cast<BlockId>(config.spec.blocks.size());
  std::vector<SweepRow> rows(n_lambda * n_models * n_networks);
  parallel_for(rows.size(), threads, [&](std::size_t job) {
    const std::size_t li = job / (n_models * n_networks);
    const std::size_t mi = (job / n_networks) % n_models;
    const std::size_t ni = job % n_networks;
    const Network& net = networks[li * n_networks + ni];

    InferenceConfig ic;
    ic.k = k;
    ic.model = config.models[mi];
    if (ic.model.degree_generation && config.priors && *ic.model.degree_generation == DegreePriorSet{}) {
      ic.model.degree_generation = config.priors;
    }
    ic.mcmc_steps = config.steps;
    ic.runs = config.runs;
    ic.use_kl = config.use_kl;
    ic.init = config.init;
    ic.seed = derive_seed(config.seed, li, ni, mi + 1);
    ic.threads = 1;
    const bool project = net.graph.directed() && !family_is_directed(ic.model.family);
    const Graph& g = project ? net.projected : net.graph;
    SweepRow& row = rows[job];
    row.lambda = config.lambdas[li];
    row.model = model_name(config.models[mi]);
    row.network = static_cast<int>(ni);
    row.n = g.num_vertices();
    row.edges = g.num_edges();
    if (g.num_vertices() == 0) return;
    const InferenceResult result = run_inference(g, ic);
    row.nmi = nmi(net.truth, result.best_partition);
    row.objective = result.best_objective;
  });
  return rows;
}

void write_sweep_tsv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "lambda\tmodel\tnetwork\tnmi\tobjective\tn\tedges\n";
  const auto precision = out.precision();
  for (const auto& r : rows) {
    out << std::setprecision(6) << r.lambda << '\t' << r.model << '\t' << r.network << '\t'
        << std::setprecision(10) << r.nmi << '\t' << std::setprecision(12) << r.objective << '\t' << r.n
        << '\t' << r.edges << '\n';
  }
  out.precision(precision);
}

}  // namespace blockmodel
