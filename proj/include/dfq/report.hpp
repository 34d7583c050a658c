#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfq/protocol.hpp"
#include "dfq/random.hpp"

namespace dfq {

// Malformed or out-of-range configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// How each trial's secrets are chosen: "equal", "one_bit_differs", "random",
// or an explicit list of n bit strings.
struct SecretsSpec {
  std::string mode = "equal";
  std::vector<std::string> explicit_bits;

  std::vector<Secret> draw(int n, int l, RandomSource& rng) const;
};

// JSON run configuration. Field names match ProtocolConfig, plus trials,
// secrets, out_dir and write_transcripts. Unknown fields are rejected.
//
// Defaults:
//   family "dephasing", n 3, l 8, delta 1.0, theta_policy {"kind": "random"},
//   seed 1, attack {"kind": "none"}, tolerable_error_rate 0.0, trials 100,
//   secrets "equal", out_dir "dfq-out", write_transcripts false
struct RunConfigFile {
  ProtocolConfig protocol;
  bool seed_given = false;
  std::size_t trials = 100;
  SecretsSpec secrets;
  std::string out_dir = "dfq-out";
  bool write_transcripts = false;
};

RunConfigFile parse_run_config(const std::string& text);
nlohmann::ordered_json to_json(const RunConfigFile& cfg);
// Canonical file form: two-space indent, fixed field order, trailing newline.
std::string serialize_run_config(const RunConfigFile& cfg);

nlohmann::ordered_json attack_to_json(const AttackModel& model);
AttackModel attack_from_json(const nlohmann::json& j);

// Qubit efficiency xi = compared bits / qubits prepared.
struct EfficiencyReport {
  int n = 0;
  int l = 0;
  std::uint64_t qubits_prepared_by_tp = 0;
  std::uint64_t qubits_prepared_by_participants = 0;
  std::uint64_t compared_bits = 0;
  std::uint64_t xi_numerator = 0;    // reduced
  std::uint64_t xi_denominator = 1;  // reduced

  // Realized counts from simulated quantum phases (delta = 0).
  std::size_t runs = 0;
  double measured_participant_qubits_mean = 0.0;
  double measured_participant_qubits_stderr = 0.0;
  double measured_tp_qubits_mean = 0.0;
  double measured_xi = 0.0;
};

// Expected-count accounting at delta = 0: TP sends 5l pairs to each
// participant (10nl qubits); half are SIFTed and re-prepared (5nl qubits).
EfficiencyReport ideal_efficiency(int n, int l);

// Runs TP preparation plus the participants' CTRL/SIFT phase `runs` times and
// fills the measured fields.
void measure_efficiency(EfficiencyReport& report, std::size_t runs, RandomSource& rng);

nlohmann::ordered_json to_json(const EfficiencyReport& r);

}  // namespace dfq
