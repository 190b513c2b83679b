#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "obbkit/matching.hpp"
#include "oracles.hpp"

using obbkit::CostMatrix;
using obbkit::MatchPair;

namespace {

CostMatrix from_rows(std::vector<std::vector<double>> rows) {
  CostMatrix c(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < c.rows(); ++r)
    for (std::size_t k = 0; k < c.cols(); ++k) c(r, k) = rows[r][k];
  return c;
}

CostMatrix random_int_matrix(std::mt19937_64& rng, std::size_t k, std::size_t m, int hi) {
  std::uniform_int_distribution<int> d(0, hi);
  CostMatrix c(k, m);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j < m; ++j) c(r, j) = d(rng);
  return c;
}

// Lexicographically smallest optimal pair list by exhaustive enumeration.
std::vector<MatchPair> brute_lexmin(const CostMatrix& c) {
  const std::size_t k = c.rows(), m = c.cols(), n = std::max(k, m);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  std::vector<MatchPair> out;
  do {
    double total = 0;
    std::vector<MatchPair> pairs;
    for (std::size_t j = 0; j < m; ++j) {
      if (perm[j] < k) {
        total += c(perm[j], j);
        pairs.push_back({j, perm[j]});
      }
    }
    if (total < best || (total == best && pairs < out)) {
      best = total;
      out = pairs;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

void check_valid(const obbkit::Assignment& a, const CostMatrix& c) {
  CHECK(a.pairs.size() == std::min(c.rows(), c.cols()));
  std::vector<bool> seen_gt(c.cols()), seen_pred(c.rows());
  double total = 0;
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    const auto& p = a.pairs[i];
    REQUIRE(p.gt < c.cols());
    REQUIRE(p.pred < c.rows());
    CHECK_FALSE(seen_gt[p.gt]);
    CHECK_FALSE(seen_pred[p.pred]);
    seen_gt[p.gt] = seen_pred[p.pred] = true;
    if (i > 0) CHECK(a.pairs[i - 1].gt < p.gt);
    total += c(p.pred, p.gt);
  }
  CHECK(total == doctest::Approx(a.total_cost).epsilon(1e-12));
}

}  // namespace

TEST_SUITE("matching") {

TEST_CASE("hungarian examples") {
  auto a = obbkit::hungarian_assign(from_rows({{1, 2}, {2, 1}}));
  CHECK(a.pairs == std::vector<MatchPair>{{0, 0}, {1, 1}});
  CHECK(a.total_cost == 2);
  a = obbkit::hungarian_assign(from_rows({{1, 1}, {1, 1}}));
  CHECK(a.pairs == std::vector<MatchPair>{{0, 0}, {1, 1}});
  CHECK(a.total_cost == 2);
  CHECK(obbkit::hungarian_assign(CostMatrix{}).pairs.empty());
  CHECK(obbkit::hungarian_assign(CostMatrix(0, 3)).pairs.empty());
}

TEST_CASE("non-finite entries are rejected") {
  CHECK_THROWS_AS(obbkit::hungarian_assign(from_rows({{1, NAN}})), std::domain_error);
  CHECK_THROWS_AS(obbkit::hungarian_assign(from_rows({{INFINITY}})), std::domain_error);
}

TEST_CASE("hungarian equals exhaustive search, including the tie-break") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = dim(rng), m = dim(rng);
    // Small value range so ties are common.
    const CostMatrix c = random_int_matrix(rng, k, m, t % 2 == 0 ? 3 : 50);
    const auto a = obbkit::hungarian_assign(c);
    check_valid(a, c);
    const std::vector<double> flat(c.values().begin(), c.values().end());
    CHECK(a.total_cost == oracle::brute_force_assignment(flat, k, m));
    CHECK(a.pairs == brute_lexmin(c));
  }
}

TEST_CASE("real-valued matrices: value matches exhaustive search") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> v(-5, 5);
  for (int t = 0; t < 300; ++t) {
    CostMatrix c(6, 6);
    for (std::size_t r = 0; r < 6; ++r)
      for (std::size_t j = 0; j < 6; ++j) c(r, j) = v(rng);
    const std::vector<double> flat(c.values().begin(), c.values().end());
    CHECK(obbkit::hungarian_assign(c).total_cost ==
          doctest::Approx(oracle::brute_force_assignment(flat, 6, 6)).epsilon(1e-12));
  }
}

TEST_CASE("optimum beats random injective assignments") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> v(0, 1);
  CostMatrix c(30, 12);
  for (std::size_t r = 0; r < 30; ++r)
    for (std::size_t j = 0; j < 12; ++j) c(r, j) = v(rng);
  const double best = obbkit::hungarian_assign(c).total_cost;
  std::vector<std::size_t> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  for (int t = 0; t < 10000; ++t) {
    std::shuffle(perm.begin(), perm.end(), rng);
    double total = 0;
    for (std::size_t j = 0; j < 12; ++j) total += c(perm[j], j);
    CHECK(best <= total + 1e-12);
  }
}

TEST_CASE("shift and scale keep the pair set") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> v(0, 10);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 3 + t % 5, m = 2 + t % 4;
    CostMatrix c(k, m);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t j = 0; j < m; ++j) c(r, j) = std::round(v(rng) * 4) / 4;
    const auto base = obbkit::hungarian_assign(c);
    CostMatrix shifted = c, scaled = c;
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t j = 0; j < m; ++j) {
        shifted(r, j) += 3.5;
        scaled(r, j) *= 2.0;
      }
    }
    const auto s = obbkit::hungarian_assign(shifted);
    CHECK(s.pairs == base.pairs);
    CHECK(s.total_cost ==
          doctest::Approx(base.total_cost + 3.5 * static_cast<double>(std::min(k, m))));
    CHECK(obbkit::hungarian_assign(scaled).pairs == base.pairs);
  }
}

TEST_CASE("large rectangular problem") {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> v(0, 1);
  CostMatrix c(300, 40);
  for (std::size_t r = 0; r < 300; ++r)
    for (std::size_t j = 0; j < 40; ++j) c(r, j) = v(rng);
  const auto a = obbkit::hungarian_assign(c);
  check_valid(a, c);
}

TEST_CASE("instability examples") {
  obbkit::LayerMatchRecord r;
  r.layers = {{4, 9}, {4, 9}, {4, 9}};
  CHECK(obbkit::instability(r) == 0.0);
  r.layers = {{5}, {7}, {5}};
  CHECK(obbkit::instability(r) == 1.0);
  r.layers = {{5, 2}, {5, 3}};
  CHECK(obbkit::instability(r) == 0.5);
}

TEST_CASE("instability validation") {
  obbkit::LayerMatchRecord r;
  r.layers = {{1, 2}};
  CHECK_THROWS_AS(obbkit::instability(r), std::invalid_argument);
  r.layers = {{1, 2}, {1}};
  CHECK_THROWS_AS(obbkit::instability(r), std::invalid_argument);
  r.layers = {{}, {}};
  CHECK_THROWS_AS(obbkit::instability(r), std::invalid_argument);
  r.layers = {{1, 2}, {1, 5}};
  r.num_queries = 5;
  CHECK_THROWS_AS(obbkit::instability(r), std::invalid_argument);
  r.num_queries = 6;
  CHECK(obbkit::instability(r) == 0.5);
  r.layers = {{-1}, {0}};
  r.num_queries.reset();
  CHECK_THROWS_AS(obbkit::instability(r), std::invalid_argument);
}

TEST_CASE("instability is 0 iff all constant and 1 iff none is") {
  std::mt19937_64 rng(26);
  std::uniform_int_distribution<long long> q(0, 3);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t layers = 2 + t % 4, gts = 1 + t % 5;
    obbkit::LayerMatchRecord r;
    r.layers.assign(layers, std::vector<long long>(gts));
    for (auto& l : r.layers)
      for (auto& x : l) x = q(rng);
    std::size_t changing = 0;
    for (std::size_t m = 0; m < gts; ++m) {
      bool same = true;
      for (std::size_t l = 1; l < layers; ++l) same = same && r.layers[l][m] == r.layers[0][m];
      changing += same ? 0 : 1;
    }
    const double is = obbkit::instability(r);
    CHECK(is == doctest::Approx(static_cast<double>(changing) / static_cast<double>(gts)));
    CHECK((is == 0.0) == (changing == 0));
    CHECK((is == 1.0) == (changing == gts));
  }
}

TEST_CASE("literal xor fold") {
  obbkit::LayerMatchRecord r;
  r.layers = {{5}, {7}, {5}};
  // 5 ^ 7 ^ 5 = 7
  CHECK(obbkit::instability(r, obbkit::InstabilityMode::kBitwiseXor) == 7.0);
  r.layers = {{4, 9}, {4, 9}};
  CHECK(obbkit::instability(r, obbkit::InstabilityMode::kBitwiseXor) == 0.0);
  r.layers = {{4, 9}, {4, 9}, {4, 9}};
  // Odd layer count: a constant sequence folds to the index itself.
  CHECK(obbkit::instability(r, obbkit::InstabilityMode::kBitwiseXor) == 6.5);
}

}  // TEST_SUITE
