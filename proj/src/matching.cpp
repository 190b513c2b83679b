#include "obbkit/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace obbkit {

namespace {

constexpr double kTightRel = 1e-9;

// Square minimisation problem: rows are gts, columns predictions, padded with
// zero-cost dummies up to n = max(K, M).
struct SquareProblem {
  std::size_t n = 0;
  std::vector<double> a;
  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

struct DualSolution {
  std::vector<double> u;              // row potentials
  std::vector<double> v;              // column potentials
  std::vector<std::size_t> row_to_col;
  std::vector<std::size_t> col_to_row;
};

// Shortest augmenting path Hungarian method with potentials. Keeps
// a(i, j) - u[i] - v[j] >= 0 throughout and equal to zero on matched edges.
DualSolution solve_square(const SquareProblem& p) {
  const std::size_t n = p.n;
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; index 0 is the virtual root column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<double> minv(n + 1);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = p.at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  DualSolution s;
  s.u.assign(u.begin() + 1, u.end());
  s.v.assign(v.begin() + 1, v.end());
  s.row_to_col.assign(n, 0);
  s.col_to_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    s.col_to_row[j - 1] = match[j] - 1;
    s.row_to_col[match[j] - 1] = j - 1;
  }
  return s;
}

// Moves every real row, in index order, onto the smallest real column that
// keeps the matching inside the tight graph.
void lexicographic_refine(const SquareProblem& p, std::size_t real_rows,
                          std::size_t real_cols, double tol, DualSolution& s) {
  const std::size_t n = p.n;
  const auto tight = [&](std::size_t i, std::size_t j) {
    return std::abs(p.at(i, j) - s.u[i] - s.v[j]) <= tol;
  };

  std::vector<char> locked_col(n, 0);
  std::vector<std::size_t> prev_row(n);
  std::vector<char> seen(n);
  std::vector<std::size_t> queue;
  queue.reserve(n);

  for (std::size_t m = 0; m < real_rows; ++m) {
    const std::size_t current = s.row_to_col[m];
    const std::size_t limit = std::min(current, real_cols);
    for (std::size_t j = 0; j < limit; ++j) {
      if (locked_col[j] || !tight(m, j)) continue;
      const std::size_t start = s.col_to_row[j];

      // Alternating path from `start` to the column m gives up.
      std::fill(seen.begin(), seen.end(), 0);
      queue.clear();
      queue.push_back(start);
      bool found = false;
      for (std::size_t head = 0; head < queue.size() && !found; ++head) {
        const std::size_t x = queue[head];
        for (std::size_t c = 0; c < n; ++c) {
          if (seen[c] || locked_col[c] || c == j || !tight(x, c)) continue;
          seen[c] = 1;
          prev_row[c] = x;
          if (c == current) {
            found = true;
            break;
          }
          queue.push_back(s.col_to_row[c]);
        }
      }
      if (!found) continue;

      std::size_t c = current;
      for (;;) {
        const std::size_t x = prev_row[c];
        const std::size_t old = s.row_to_col[x];
        s.row_to_col[x] = c;
        s.col_to_row[c] = x;
        if (x == start) break;
        c = old;
      }
      s.row_to_col[m] = j;
      s.col_to_row[j] = m;
      break;
    }
    locked_col[s.row_to_col[m]] = 1;
  }
}

}  // namespace

Assignment hungarian_assign(const CostMatrix& c) {
  if (!c.all_finite()) {
    throw std::domain_error("hungarian_assign: non-finite cost entry");
  }
  Assignment out;
  if (c.empty()) return out;

  const std::size_t num_preds = c.rows();
  const std::size_t num_gts = c.cols();
  SquareProblem p;
  p.n = std::max(num_preds, num_gts);
  p.a.assign(p.n * p.n, 0.0);
  double scale = 1.0;
  for (std::size_t m = 0; m < num_gts; ++m) {
    for (std::size_t k = 0; k < num_preds; ++k) {
      p.at(m, k) = c(k, m);
      scale = std::max(scale, std::abs(c(k, m)));
    }
  }

  DualSolution s = solve_square(p);
  lexicographic_refine(p, num_gts, num_preds, kTightRel * scale, s);

  for (std::size_t m = 0; m < num_gts; ++m) {
    const std::size_t k = s.row_to_col[m];
    if (k >= num_preds) continue;
    out.pairs.push_back({m, k});
    out.total_cost += c(k, m);
  }
  return out;
}

void LayerMatchRecord::validate() const {
  if (layers.size() < 2) {
    throw std::invalid_argument("instability needs at least two layers");
  }
  const std::size_t m = layers.front().size();
  if (m == 0) throw std::invalid_argument("instability needs at least one gt");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].size() != m) {
      throw std::invalid_argument("layer " + std::to_string(l) + " has " +
                                  std::to_string(layers[l].size()) +
                                  " entries, expected " + std::to_string(m));
    }
    for (const long long k : layers[l]) {
      if (k < 0 || (num_queries && k >= *num_queries)) {
        throw std::invalid_argument("layer " + std::to_string(l) +
                                    " holds query index " + std::to_string(k) +
                                    " outside [0, K)");
      }
    }
  }
}

double instability(const LayerMatchRecord& rec, InstabilityMode mode) {
  rec.validate();
  const std::size_t m_count = rec.num_gts();
  double total = 0.0;
  for (std::size_t m = 0; m < m_count; ++m) {
    if (mode == InstabilityMode::kIndicator) {
      const long long first = rec.layers.front()[m];
      const bool changed = std::any_of(
          rec.layers.begin(), rec.layers.end(),
          [&](const auto& layer) { return layer[m] != first; });
      total += changed ? 1.0 : 0.0;
    } else {
      long long acc = 0;
      for (const auto& layer : rec.layers) acc ^= layer[m];
      total += static_cast<double>(acc);
    }
  }
  return total / static_cast<double>(m_count);
}

}  // namespace obbkit
