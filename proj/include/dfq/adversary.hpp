#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfq/attack.hpp"
#include "dfq/protocol.hpp"
#include "dfq/random.hpp"

namespace dfq {

// Detection probability 1 - (1 - p)^m for m attacked pairs, where p is the
// per-pair probability that TP's Case-1 check catches the attack:
//   intercept-resend with a Z-basis fake of the same family: p = 1/4
//   measure-resend in the family's Z basis:                    p = 1/20
//   no attack:                                                  p = 0
// Throws std::invalid_argument for other models or m < 0.
double closed_form_detection(const AttackModel& model, EncodingFamily family, int m);
bool has_closed_form(const AttackModel& model, EncodingFamily family);

struct DetectionReport {
  std::string model;
  EncodingFamily family = EncodingFamily::Dephasing;
  int m = 1;
  std::size_t trials = 0;
  double per_group_estimate = 0.0;
  double per_group_stderr = 0.0;
  double overall_estimate = 0.0;
  double overall_stderr = 0.0;
  std::optional<double> closed_form_per_group;
  std::optional<double> closed_form_overall;
  // Case-1 mismatch, or a Case-2 SIFT bit disagreeing with the initial state
  // (what a Step-4 audit would flag if that pair were tested).
  double any_check_per_group_estimate = 0.0;

  // |overall - closed form| <= 4 sigma with the closed-form binomial sigma.
  // Empty when there is no closed form.
  std::optional<bool> passes_4sigma() const;
};

struct GroupTrial {
  bool case1_detected = false;
  bool any_check_detected = false;
};

// One attacked pair: Step-1 mix (Z:X = 4:1, uniform values), channel noise,
// attack on the outbound leg, participant coin, TP readout.
GroupTrial simulate_attacked_group(EncodingFamily family, const AttackModel& model,
                                   const ThetaPolicy& theta, RandomSource& rng);

DetectionReport monte_carlo_detection(const ProtocolConfig& config, const AttackModel& model,
                                      int m, std::size_t trials, RandomSource& rng);

nlohmann::ordered_json to_json(const DetectionReport& r);
std::string csv_header();
std::string csv_row(const DetectionReport& r);

// --- entangling attack --------------------------------------------------

struct EntanglingAnalysis {
  double detection_prob = 0.0;
  double eve_distinguishability = 0.0;
};

// Exact (no sampling). Detection is TP's Case-1 failure probability for a
// CTRL pair drawn from the Step-1 mix (each Z codeword 2/5, each X codeword
// 1/10). Distinguishability is the trace distance between Eve's ancilla
// states after logical 0 and logical 1 were sent.
EntanglingAnalysis entangling_attack_analysis(const EntangleParams& params,
                                              EncodingFamily family);

// Haar-random unitary of the given dimension (Gram-Schmidt on Gaussian columns).
std::vector<Amplitude> random_unitary(std::size_t dim, RandomSource& rng);

// Attack drawn from one of three generators, selected by `kind`:
//   0: Haar-random 8x8
//   1: protocol-controlled ancilla unitaries (block diagonal, random blocks)
//   2: zero-disturbance: both Z codewords map to codeword (x) |E> for one
//      random ancilla state |E>, remaining columns completed at random
EntangleParams random_entangle_params(int kind, EncodingFamily family, RandomSource& rng);

}  // namespace dfq
