#include "dfq/circuit_repro.hpp"

#include <cmath>
#include <stdexcept>

namespace dfq {

FigureScenario FigureScenario::make(FigureId id, std::size_t shots) {
  FigureScenario s;
  s.id = id;
  s.shots = shots;
  s.prepared = LogicalValue::Minus;
  switch (id) {
    case FigureId::Fig1: s.family = EncodingFamily::Dephasing; break;
    case FigureId::Fig2:
      s.family = EncodingFamily::Dephasing;
      s.fake = LogicalValue::Zero;
      break;
    case FigureId::Fig3:
      s.family = EncodingFamily::Dephasing;
      s.operation = Operation::Sift;
      break;
    case FigureId::Fig4: s.family = EncodingFamily::Rotation; break;
    case FigureId::Fig5:
      s.family = EncodingFamily::Rotation;
      s.fake = LogicalValue::Zero;
      break;
    case FigureId::Fig6:
      s.family = EncodingFamily::Rotation;
      s.operation = Operation::Sift;
      break;
    default: throw std::invalid_argument("unknown figure id");
  }
  return s;
}

std::array<FigureScenario, 6> FigureScenario::all(std::size_t shots) {
  return {make(FigureId::Fig1, shots), make(FigureId::Fig2, shots), make(FigureId::Fig3, shots),
          make(FigureId::Fig4, shots), make(FigureId::Fig5, shots), make(FigureId::Fig6, shots)};
}

std::string FigureScenario::name() const { return "fig" + std::to_string(static_cast<int>(id)); }

StateVector scenario_final_state(const FigureScenario& s, double theta) {
  StateVector state = prepare(s.family, s.fake.value_or(s.prepared));
  const Gate noise = s.family == EncodingFamily::Dephasing ? Gate::rz(theta) : Gate::ry(theta);
  state = apply_single(apply_single(state, noise, 1), noise, 2);
  if (s.operation == Operation::Ctrl) {
    state = apply_readout(state, {s.family, BasisKind::X});
  }
  return state;
}

std::array<double, 4> expected_distribution(const FigureScenario& s, double theta) {
  const auto p = probabilities(scenario_final_state(s, theta));
  return {p[0], p[1], p[2], p[3]};
}

Histogram run_scenario(const FigureScenario& s, RandomSource& rng, double theta) {
  const StateVector final_state = scenario_final_state(s, theta);
  Histogram h;
  h.shots = s.shots;
  for (std::size_t shot = 0; shot < s.shots; ++shot) {
    ++h.counts[measure_computational(final_state, rng).index];
  }
  return h;
}

std::string_view to_string(CheckStatus c) {
  switch (c) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Skipped: return "SKIPPED";
  }
  return "?";
}

CheckStatus check_histogram(const Histogram& h, const std::array<double, 4>& expected) {
  if (h.shots < kMinCheckShots) return CheckStatus::Skipped;
  const double n = static_cast<double>(h.shots);
  for (std::size_t i = 0; i < 4; ++i) {
    double p = expected[i];
    if (p < kProbabilityFloor) p = 0.0;
    if (p > 1.0 - kProbabilityFloor) p = 1.0;
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    const double freq = static_cast<double>(h.counts[i]) / n;
    if (std::abs(freq - p) > 4.0 * sigma + 1e-12) return CheckStatus::Fail;
  }
  return CheckStatus::Pass;
}

std::string histogram_csv(const Histogram& h) {
  std::string out = "outcome,count\n";
  for (std::size_t i = 0; i < 4; ++i) {
    if (h.counts[i] == 0) continue;
    out += bitstring(i, 2) + "," + std::to_string(h.counts[i]) + "\n";
  }
  return out;
}

}  // namespace dfq
