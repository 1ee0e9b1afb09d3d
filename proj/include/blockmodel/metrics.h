#pragma once

#include <vector>

#include "blockmodel/graph.h"

namespace blockmodel {

/// counts[i][j]: vertices with block i in the first partition and j in the
/// second.
struct ConfusionTable {
  std::vector<std::vector<EdgeCount>> counts;
  std::vector<EdgeCount> row_totals;
  std::vector<EdgeCount> col_totals;
  EdgeCount total = 0;
};

ConfusionTable confusion_table(const Partition& a, const Partition& b);

/// 2 I(A;B) / (H(A) + H(B)) in nats. 1 when both partitions have a single
/// occupied block, 0 when only one of them does.
double nmi(const Partition& a, const Partition& b);
double nmi(const ConfusionTable& table);

/// Largest fraction of agreeing vertices over relabelings of `b`. Needs at
/// most 8 blocks in each partition.
double best_match_accuracy(const Partition& a, const Partition& b);

}  // namespace blockmodel
