#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dfq/df_codec.hpp"
#include "dfq/protocol.hpp"
#include "dfq/random.hpp"

namespace dfq {

// The six hardware experiments: |-> sent through a collective-noise channel,
// optionally replaced by Eve's fake |0>, then read out by TP (CTRL) or
// measured by the participant (SIFT).
enum class FigureId { Fig1 = 1, Fig2, Fig3, Fig4, Fig5, Fig6 };

struct FigureScenario {
  FigureId id = FigureId::Fig1;
  EncodingFamily family = EncodingFamily::Dephasing;
  LogicalValue prepared = LogicalValue::Minus;
  std::optional<LogicalValue> fake;  // set for an insecure channel
  Operation operation = Operation::Ctrl;
  std::size_t shots = 10000;

  static FigureScenario make(FigureId id, std::size_t shots = 10000);
  static std::array<FigureScenario, 6> all(std::size_t shots = 10000);

  std::string name() const;  // "fig1" .. "fig6"
};

// Per-qubit noise gate used in the experiments.
inline constexpr double kFigureNoiseAngle = std::numbers::pi / 5.0;

// Counts indexed by the two-bit outcome (00, 01, 10, 11).
struct Histogram {
  std::array<std::size_t, 4> counts{};
  std::size_t shots = 0;
};

// Noise layer is RZ(theta) on each qubit for dephasing, RY(theta) for rotation.
StateVector scenario_final_state(const FigureScenario& s, double theta = kFigureNoiseAngle);
std::array<double, 4> expected_distribution(const FigureScenario& s,
                                            double theta = kFigureNoiseAngle);
Histogram run_scenario(const FigureScenario& s, RandomSource& rng,
                       double theta = kFigureNoiseAngle);

enum class CheckStatus { Pass, Fail, Skipped };
std::string_view to_string(CheckStatus c);

// Below this many shots the statistical check is reported as skipped.
inline constexpr std::size_t kMinCheckShots = 100;

// Every outcome within 4 binomial sigma of its expected probability;
// zero-variance outcomes must match exactly.
CheckStatus check_histogram(const Histogram& h, const std::array<double, 4>& expected);

std::string histogram_csv(const Histogram& h);

}  // namespace dfq
