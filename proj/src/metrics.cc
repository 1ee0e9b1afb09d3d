#include "blockmodel/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace blockmodel {
namespace {

constexpr BlockId kMaxPermutationBlocks = 8;

double entropy(const std::vector<EdgeCount>& totals, double n) {
  double h = 0.0;
  for (const EdgeCount c : totals) {
    if (c > 0) {
      const double p = static_cast<double>(c) / n;
      h -= p * std::log(p);
    }
  }
  return h;
}

}  // namespace

ConfusionTable confusion_table(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("partitions cover " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()) + " vertices");
  }
  ConfusionTable t;
  const auto ka = static_cast<std::size_t>(a.num_blocks());
  const auto kb = static_cast<std::size_t>(b.num_blocks());
  t.counts.assign(ka, std::vector<EdgeCount>(kb, 0));
  t.row_totals.assign(ka, 0);
  t.col_totals.assign(kb, 0);
  for (VertexId v = 0; v < a.size(); ++v) {
    const auto i = static_cast<std::size_t>(a[v]);
    const auto j = static_cast<std::size_t>(b[v]);
    ++t.counts[i][j];
    ++t.row_totals[i];
    ++t.col_totals[j];
  }
  t.total = a.size();
  return t;
}

double nmi(const ConfusionTable& t) {
  if (t.total == 0) return 1.0;
  const auto n = static_cast<double>(t.total);
  const double ha = entropy(t.row_totals, n);
  const double hb = entropy(t.col_totals, n);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  if (ha == 0.0 || hb == 0.0) return 0.0;
  // Terms are summed in sorted order so that swapping the arguments gives a
  // bit-identical result.
  std::vector<double> terms;
  for (std::size_t i = 0; i < t.counts.size(); ++i) {
    for (std::size_t j = 0; j < t.counts[i].size(); ++j) {
      const EdgeCount c = t.counts[i][j];
      if (c == 0) continue;
      const double pij = static_cast<double>(c) / n;
      terms.push_back(pij * std::log(pij * n * n / (static_cast<double>(t.row_totals[i]) *
                                                    static_cast<double>(t.col_totals[j]))));
    }
  }
  std::sort(terms.begin(), terms.end());
  const double mi = std::accumulate(terms.begin(), terms.end(), 0.0);
  return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

double nmi(const Partition& a, const Partition& b) {
  return nmi(confusion_table(a, b));
}

double best_match_accuracy(const Partition& a, const Partition& b) {
  const ConfusionTable t = confusion_table(a, b);
  if (t.total == 0) return 1.0;
  const BlockId k = std::max(a.num_blocks(), b.num_blocks());
  if (k > kMaxPermutationBlocks) {
    throw std::invalid_argument("best_match_accuracy supports at most 8 blocks; use nmi instead");
  }
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  auto cell = [&](int i, int j) -> EdgeCount {
    const auto ui = static_cast<std::size_t>(i);
    const auto uj = static_cast<std::size_t>(j);
    return ui < t.counts.size() && uj < t.counts[ui].size() ? t.counts[ui][uj] : 0;
  };
  EdgeCount best = 0;
  do {
    EdgeCount agree = 0;
    for (int i = 0; i < k; ++i) agree += cell(i, perm[static_cast<std::size_t>(i)]);
    best = std::max(best, agree);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(t.total);
}

}  // namespace blockmodel
