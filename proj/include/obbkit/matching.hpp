#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "obbkit/cost.hpp"

namespace obbkit {

struct MatchPair {
  std::size_t gt = 0;
  std::size_t pred = 0;

  friend auto operator<=>(const MatchPair&, const MatchPair&) = default;
};

struct Assignment {
  // Sorted by gt index. Length is min(K, M).
  std::vector<MatchPair> pairs;
  double total_cost = 0.0;
};

// Minimum-cost injective matching between the columns (ground truths) and
// rows (predictions) of `c`. Rectangular matrices are supported directly:
// every gt is matched when K >= M, every prediction when K < M.
//
// Among all optimal matchings the lexicographically smallest pair list
// (ordered by gt, then pred) is returned. Optimal matchings are exactly the
// perfect matchings of the zero-reduced-cost graph of the solver's dual, so
// the tie-break walks the gts in order and moves each one to the smallest
// prediction that still admits such a matching. Reduced costs count as zero
// within 1e-9 * max(1, max|c|).
//
// Throws std::domain_error for non-finite entries.
Assignment hungarian_assign(const CostMatrix& c);

// Per-layer matched query index of each gt: layers[l][m] = G^l_m.
struct LayerMatchRecord {
  std::vector<std::vector<long long>> layers;
  // Number of queries K when known; entries are then checked against it.
  std::optional<long long> num_queries;

  std::size_t num_layers() const { return layers.size(); }
  std::size_t num_gts() const { return layers.empty() ? 0 : layers.front().size(); }

  // Throws std::invalid_argument for fewer than two layers, no gts, ragged
  // layers, or an index outside [0, K).
  void validate() const;
};

enum class InstabilityMode {
  // Fraction of gts whose query index is not constant across layers.
  kIndicator,
  // Literal XOR fold of the index values across layers, summed over gts and
  // divided by M. Not bounded by 1; kept for comparison only.
  kBitwiseXor,
};

double instability(const LayerMatchRecord& rec,
                   InstabilityMode mode = InstabilityMode::kIndicator);

}  // namespace obbkit
