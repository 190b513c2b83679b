#include <cmath>
#include <random>

#include "doctest.h"
#include "obbkit/ocd.hpp"
#include "ocd_bands.hpp"

using obbkit::OrientedBox;
using obbkit::kPi;
namespace ocd = obbkit::ocd;

namespace {

OrientedBox random_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-50, 50), size(1.0, 20.0), ang(0.0, kPi);
  return OrientedBox(pos(rng), pos(rng), size(rng), size(rng), ang(rng));
}

ocd::NoiseConfig with_mode(ocd::NoiseMode m) {
  ocd::NoiseConfig c;
  c.mode = m;
  return c;
}

}  // namespace

TEST_SUITE("ocd") {

TEST_CASE("config validation") {
  CHECK_NOTHROW(ocd::NoiseConfig{}.validate());
  ocd::NoiseConfig c;
  c.lambda1 = 3;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.lambda3 = 20;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.lambda6 = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.lambda5 = -0.1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.total_queries = 7;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.total_queries = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(ocd::noise_mode_from_string("geometric") == ocd::NoiseMode::kGeometric);
  CHECK_THROWS_AS(ocd::noise_mode_from_string("gauss"), std::invalid_argument);
  for (auto m : {ocd::NoiseMode::kBox, ocd::NoiseMode::kAngle, ocd::NoiseMode::kGeometric,
                 ocd::NoiseMode::kProbability}) {
    CHECK(ocd::noise_mode_from_string(ocd::to_string(m)) == m);
  }
}

TEST_CASE("sample_annulus stays in its band and covers both sides") {
  ocd::Rng rng(41);
  int neg = 0;
  for (int i = 0; i < 10000; ++i) {
    const double v = ocd::sample_annulus(rng, 1.0, 3.0);
    CHECK(std::abs(v) >= 1.0);
    CHECK(std::abs(v) < 3.0);
    if (v < 0) ++neg;
  }
  CHECK(neg > 4500);
  CHECK(neg < 5500);
  for (int i = 0; i < 100; ++i) CHECK(std::abs(ocd::sample_annulus(rng, 2.0, 2.0)) == 2.0);
}

TEST_CASE("box noise bands") {
  ocd::Rng rng(42);
  std::mt19937_64 boxes(43);
  const auto cfg = with_mode(ocd::NoiseMode::kBox);
  for (int i = 0; i < 10000; ++i) {
    const OrientedBox gt = random_box(boxes);
    const auto p = ocd::box_noise_pair(gt, cfg, rng);
    CHECK(bands::box_positive(gt, p.positive, cfg));
    CHECK(bands::box_negative(gt, p.negative, cfg));
    CHECK(p.positive.theta() == gt.theta());
    CHECK(p.negative.theta() == gt.theta());
  }
}

TEST_CASE("box noise with a zero positive band returns the gt") {
  ocd::Rng rng(44);
  auto cfg = with_mode(ocd::NoiseMode::kBox);
  cfg.lambda1 = 0.0;
  const OrientedBox gt(1, 2, 3, 4, 0.5);
  for (int i = 0; i < 100; ++i) {
    const auto p = ocd::box_noise_pair(gt, cfg, rng);
    CHECK(p.positive == gt);
    CHECK(bands::box_negative(gt, p.negative, cfg));
  }
}

TEST_CASE("box noise collapse is swapped and floored") {
  ocd::Rng rng(45);
  auto cfg = with_mode(ocd::NoiseMode::kBox);
  cfg.lambda1 = 10;
  cfg.lambda2 = 20;
  const OrientedBox gt(0, 0, 1, 1, 0);
  for (int i = 0; i < 2000; ++i) {
    const auto p = ocd::box_noise_pair(gt, cfg, rng);
    CHECK(p.positive.w() >= 1e-6);
    CHECK(p.negative.h() >= 1e-6);
  }
}

TEST_CASE("angle noise bands and degenerate theta") {
  ocd::Rng rng(46);
  std::mt19937_64 boxes(47);
  const auto cfg = with_mode(ocd::NoiseMode::kAngle);
  for (int i = 0; i < 10000; ++i) {
    const OrientedBox gt = random_box(boxes);
    const auto p = ocd::angle_noise_pair(gt, cfg, rng);
    CHECK(bands::angle_positive(gt, p.positive, cfg));
    CHECK(bands::angle_negative(gt, p.negative, cfg));
  }
  const OrientedBox flat(0, 0, 4, 2, 0.0);
  const auto p = ocd::angle_noise_pair(flat, cfg, rng);
  CHECK(p.positive == flat);
  CHECK(p.negative == flat);

  // theta = pi/2 and lambda3 = 9: the positive offset stays within pi/4.
  const OrientedBox up(0, 0, 4, 2, kPi / 2);
  for (int i = 0; i < 1000; ++i) {
    const double d = ocd::angle_noise_pair(up, cfg, rng).positive.theta() - kPi / 2;
    CHECK(d >= -kPi / 4 - 1e-12);
    CHECK(d < kPi / 4 + 1e-12);
  }
  CHECK(OrientedBox(0, 0, 1, 1, 3.0 + 0.3).theta() == doctest::Approx(3.3 - kPi));
}

TEST_CASE("geometric noise satisfies both parents' bands") {
  ocd::Rng rng(48);
  std::mt19937_64 boxes(49);
  const auto cfg = with_mode(ocd::NoiseMode::kGeometric);
  for (int i = 0; i < 10000; ++i) {
    const OrientedBox gt = random_box(boxes);
    const auto p = ocd::geometric_noise_pair(gt, cfg, rng);
    CHECK(bands::box_positive(gt, p.positive, cfg));
    CHECK(bands::angle_positive(gt, p.positive, cfg));
    CHECK(bands::box_negative(gt, p.negative, cfg));
    CHECK(bands::angle_negative(gt, p.negative, cfg));
  }
}

TEST_CASE("geometric noise with zero angle bands equals box noise") {
  auto cfg = with_mode(ocd::NoiseMode::kGeometric);
  cfg.lambda3 = cfg.lambda4 = 0.0;
  auto box_cfg = cfg;
  box_cfg.mode = ocd::NoiseMode::kBox;
  const OrientedBox gt(5, 5, 6, 3, 1.0);
  for (std::uint64_t s = 0; s < 200; ++s) {
    ocd::Rng a(s), b(s);
    const auto g = ocd::geometric_noise_pair(gt, cfg, a);
    const auto x = ocd::box_noise_pair(gt, box_cfg, b);
    CHECK(g.positive == x.positive);
    CHECK(g.negative == x.negative);
  }
  cfg.lambda1 = 0.0;
  ocd::Rng r(7);
  CHECK(ocd::geometric_noise_pair(gt, cfg, r).positive == gt);
}

TEST_CASE("probability noise") {
  const OrientedBox sq(3, 4, 2, 2, 0.7);
  const OrientedBox mixed = ocd::mix_with_identity(sq, 0.3);
  CHECK(mixed.w() == doctest::Approx(2 * std::sqrt(0.475) * 2).epsilon(1e-12));
  CHECK(mixed.h() == doctest::Approx(2 * std::sqrt(0.475) * 2).epsilon(1e-12));
  CHECK(mixed.theta() == doctest::Approx(0.7));
  CHECK(mixed.cx() == 3);
  CHECK(mixed.cy() == 4);

  std::mt19937_64 boxes(50);
  for (int i = 0; i < 1000; ++i) {
    const OrientedBox gt = random_box(boxes);
    const OrientedBox same = ocd::mix_with_identity(gt, 0.0);
    CHECK(std::abs(same.w() - gt.w()) < 1e-9);
    CHECK(std::abs(same.h() - gt.h()) < 1e-9);
  }

  ocd::Rng rng(51);
  const auto cfg = with_mode(ocd::NoiseMode::kProbability);
  for (int i = 0; i < 10000; ++i) {
    const OrientedBox gt = random_box(boxes);
    const auto p = ocd::probability_noise_pair(gt, cfg, rng);
    CHECK(bands::probability_positive(gt, p.positive, cfg));
    CHECK(bands::probability_negative(gt, p.negative, cfg));
  }
}

TEST_CASE("probability noise converges to the gt as lambda5 shrinks") {
  auto cfg = with_mode(ocd::NoiseMode::kProbability);
  cfg.lambda5 = 1e-6;
  ocd::Rng rng(52);
  std::mt19937_64 boxes(53);
  for (int i = 0; i < 1000; ++i) {
    const OrientedBox gt = random_box(boxes);
    CHECK(obbkit::rectangle_distance(ocd::probability_noise_pair(gt, cfg, rng).positive, gt) < 1e-3);
  }
}

TEST_CASE("all modes emit valid boxes and are reproducible") {
  for (auto m : {ocd::NoiseMode::kBox, ocd::NoiseMode::kAngle, ocd::NoiseMode::kGeometric,
                 ocd::NoiseMode::kProbability}) {
    auto cfg = with_mode(m);
    cfg.seed = 99;
    std::mt19937_64 boxes(54);
    std::vector<OrientedBox> gts;
    for (int i = 0; i < 37; ++i) gts.push_back(random_box(boxes));
    const auto a = ocd::generate_denoise_groups(gts, cfg);
    const auto b = ocd::generate_denoise_groups(gts, cfg);
    REQUIRE(a.positives.size() == b.positives.size());
    for (std::size_t i = 0; i < a.positives.size(); ++i) {
      CHECK(a.positives[i].box == b.positives[i].box);
      CHECK(a.negatives[i].box == b.negatives[i].box);
      for (const auto* e : {&a.positives[i], &a.negatives[i]}) {
        CHECK(e->box.theta() >= 0.0);
        CHECK(e->box.theta() < kPi);
        CHECK(e->box.w() > 0.0);
        CHECK(e->box.h() > 0.0);
        CHECK(e->gt_index < gts.size());
      }
    }
    cfg.seed = 100;
    const auto c = ocd::generate_denoise_groups(gts, cfg);
    bool differs = false;
    for (std::size_t i = 0; i < a.positives.size(); ++i) {
      differs = differs || !(a.negatives[i].box == c.negatives[i].box);
    }
    CHECK(differs);
  }
}

TEST_CASE("group counts") {
  CHECK(ocd::denoise_group_count(10, 200) == 10);
  CHECK(ocd::denoise_group_count(300, 200) == 1);
  CHECK(ocd::denoise_group_count(1, 2) == 1);
  CHECK(ocd::denoise_group_count(0, 200) == 0);
  CHECK(ocd::denoise_group_count(3, 200) == 33);

  std::vector<OrientedBox> gts(10, OrientedBox(0, 0, 2, 1, 0.2));
  const auto g = ocd::generate_denoise_groups(gts, {});
  CHECK(g.num_groups == 10);
  CHECK(g.positives.size() == 100);
  CHECK(g.negatives.size() == 100);
  for (std::size_t i = 0; i < g.positives.size(); ++i) {
    CHECK(g.positives[i].group == i / 10);
    CHECK(g.positives[i].gt_index == i % 10);
  }
  CHECK(ocd::generate_denoise_groups({}, {}).positives.empty());
  std::vector<OrientedBox> many(300, OrientedBox(0, 0, 2, 1, 0.2));
  CHECK(ocd::generate_denoise_groups(many, {}).negatives.size() == 300);
}

TEST_CASE("cells do not depend on generation order") {
  ocd::NoiseConfig cfg;
  cfg.seed = 5;
  std::vector<OrientedBox> gts{OrientedBox(0, 0, 4, 2, 0.3), OrientedBox(10, 10, 3, 3, 1.2)};
  const auto g = ocd::generate_denoise_groups(gts, cfg);
  auto rng = ocd::substream(5, 7, 1);
  const auto p = ocd::noise_pair(gts[1], cfg, rng);
  CHECK(g.positives[7 * 2 + 1].box == p.positive);
  CHECK(g.negatives[7 * 2 + 1].box == p.negative);
}

TEST_CASE("zero noise bands reproduce identical positive and negative samples") {
  ocd::NoiseConfig cfg;
  cfg.lambda1 = cfg.lambda2 = 0.0;
  cfg.lambda3 = cfg.lambda4 = 0.0;
  cfg.lambda5 = cfg.lambda6 = 0.0;
  const OrientedBox gt(4, 5, 6, 2, 0.9);
  for (auto m : {ocd::NoiseMode::kBox, ocd::NoiseMode::kAngle, ocd::NoiseMode::kGeometric,
                 ocd::NoiseMode::kProbability}) {
    cfg.mode = m;
    ocd::Rng rng(55);
    const auto p = ocd::noise_pair(gt, cfg, rng);
    CHECK(obbkit::rectangle_distance(p.positive, gt) < 1e-9);
    CHECK(obbkit::rectangle_distance(p.negative, gt) < 1e-9);
  }
}

}  // TEST_SUITE
