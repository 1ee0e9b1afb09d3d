#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "blockmodel/inference.h"
#include "blockmodel/likelihood.h"
#include "blockmodel/synth.h"

namespace blockmodel {

struct SweepConfig {
  SynthSpec spec;
  std::vector<double> lambdas;
  /// DG models without priors of their own get `priors` when set.
  std::vector<ModelSpec> models;
  std::optional<DegreePriorSet> priors;
  int networks = 1;
  int runs = 1;
  std::int64_t steps = 100'000;
  bool use_kl = true;
  InitKind init = InitKind::kRandom;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = all cores, capped by BLOCKMODEL_THREADS
};

struct SweepRow {
  double lambda = 0.0;
  std::string model;
  int network = 0;
  double nmi = 0.0;
  double objective = 0.0;
  VertexId n = 0;
  EdgeCount edges = 0;
};

/// Derives a child seed from a base seed and up to three indices.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

/// For every lambda and network index, generates and post-processes one
/// network, then runs every model on it with k equal to the number of blocks
/// in the network spec. Undirected models are run on the undirected projection of a
/// directed network. Rows are ordered by lambda, model, network.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Columns: lambda, model, network, nmi, objective, n, edges.
void write_sweep_tsv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace blockmodel
