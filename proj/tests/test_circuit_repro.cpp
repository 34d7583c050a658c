#include <doctest.h>

#include <array>
#include <numbers>

#include "dfq/circuit_repro.hpp"

using namespace dfq;

namespace {

// Outcome probabilities (00, 01, 10, 11) worked out by hand.
std::array<double, 4> hand_distribution(FigureId id) {
  switch (id) {
    case FigureId::Fig1: return {0, 0, 0, 1};          // X_dp readout of the singlet
    case FigureId::Fig2: return {0, 0.5, 0, 0.5};      // fake |01> read in X_dp
    case FigureId::Fig3: return {0, 0.5, 0.5, 0};      // singlet measured directly
    case FigureId::Fig4: return {0, 0.5, 0.5, 0};      // X_r readout of |-_r>
    case FigureId::Fig5: return {0.25, 0.25, 0.25, 0.25};  // fake phi+ read in X_r
    case FigureId::Fig6: return {0.25, 0.25, 0.25, 0.25};  // |-_r> measured directly
  }
  return {};
}

}  // namespace

TEST_CASE("scenario table") {
  const auto all = FigureScenario::all(500);
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(all[i].name() == "fig" + std::to_string(i + 1));
    CHECK(all[i].shots == 500);
    CHECK(all[i].prepared == LogicalValue::Minus);
    CHECK(all[i].family == (i < 3 ? EncodingFamily::Dephasing : EncodingFamily::Rotation));
  }
  CHECK(all[1].fake == LogicalValue::Zero);
  CHECK(all[4].fake == LogicalValue::Zero);
  CHECK(all[2].operation == Operation::Sift);
  CHECK(all[5].operation == Operation::Sift);
  CHECK(all[0].operation == Operation::Ctrl);
}

TEST_CASE("expected distributions match the hand calculation") {
  for (const auto& s : FigureScenario::all()) {
    CAPTURE(s.name());
    const auto expected = expected_distribution(s);
    const auto hand = hand_distribution(s.id);
    for (std::size_t i = 0; i < 4; ++i) CHECK(expected[i] == doctest::Approx(hand[i]).epsilon(1e-12));
  }
}

TEST_CASE("distributions do not depend on the noise angle") {
  RandomSource rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const double theta = 2 * std::numbers::pi * rng.uniform();
    for (const auto& s : FigureScenario::all()) {
      const auto expected = expected_distribution(s, theta);
      const auto hand = hand_distribution(s.id);
      for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(expected[i] - hand[i]) < 1e-10);
    }
  }
}

TEST_CASE("sampled histograms pass the 4-sigma check") {
  RandomSource rng(62);
  for (const auto& s : FigureScenario::all(10000)) {
    const Histogram h = run_scenario(s, rng);
    CHECK(h.shots == 10000);
    CHECK(h.counts[0] + h.counts[1] + h.counts[2] + h.counts[3] == 10000);
    CHECK(check_histogram(h, expected_distribution(s)) == CheckStatus::Pass);
    const auto hand = hand_distribution(s.id);
    for (std::size_t i = 0; i < 4; ++i) {
      if (hand[i] == 0.0) CHECK(h.counts[i] == 0);
    }
  }
}

TEST_CASE("histogram check") {
  const std::array<double, 4> half{0, 0.5, 0.5, 0};
  Histogram ok{{0, 5030, 4970, 0}, 10000};
  CHECK(check_histogram(ok, half) == CheckStatus::Pass);
  Histogram off{{0, 5300, 4700, 0}, 10000};
  CHECK(check_histogram(off, half) == CheckStatus::Fail);
  Histogram leak{{1, 4999, 5000, 0}, 10000};
  CHECK(check_histogram(leak, half) == CheckStatus::Fail);
  Histogram tiny{{0, 60, 39, 0}, 99};
  CHECK(check_histogram(tiny, half) == CheckStatus::Skipped);
  CHECK(to_string(CheckStatus::Skipped) == "SKIPPED");
}

TEST_CASE("histogram csv") {
  const Histogram h{{0, 12, 0, 88}, 100};
  CHECK(histogram_csv(h) == "outcome,count\n01,12\n11,88\n");
}

TEST_CASE("runs replay under the same seed") {
  const FigureScenario s = FigureScenario::make(FigureId::Fig5, 2000);
  RandomSource a(7), b(7);
  CHECK(run_scenario(s, a).counts == run_scenario(s, b).counts);
}
