#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dfq/attack.hpp"
#include "dfq/df_codec.hpp"
#include "dfq/random.hpp"
#include "dfq/statevector.hpp"
#include "dfq/transcript.hpp"

namespace dfq {

using Bits = std::vector<std::uint8_t>;

// Source of the collective-noise angle for each transmission of a pair.
struct ThetaPolicy {
  enum class Kind { Fixed, Random };
  Kind kind = Kind::Random;
  double value = 0.0;  // used when kind == Fixed

  static ThetaPolicy fixed(double theta) { return {Kind::Fixed, theta}; }
  static ThetaPolicy random() { return {Kind::Random, 0.0}; }

  // Random draws are uniform on [0, 2pi).
  double draw(RandomSource& rng) const;
};

struct ProtocolConfig {
  EncodingFamily family = EncodingFamily::Dephasing;
  int n = 3;           // participants
  int l = 8;           // secret length in bits
  double delta = 1.0;  // oversampling fraction
  ThetaPolicy theta_policy = ThetaPolicy::random();
  std::uint64_t seed = 1;
  AttackModel attack = NoAttack{};
  double tolerable_error_rate = 0.0;

  // ceil(4 l (1 + delta)) and ceil(l (1 + delta)).
  std::size_t z_count() const;
  std::size_t x_count() const;

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

struct Secret {
  Bits bits;
};

// Pre-shared among participants; TP never sees it.
struct SharedKey {
  Bits bits;
};

SharedKey draw_shared_key(int l, RandomSource& rng);

std::string to_bitstring(const Bits& bits);
Bits parse_bits(std::string_view s);

// TP-side ground truth for one prepared pair.
struct Descriptor {
  LogicalBasis basis;
  LogicalValue value = LogicalValue::Zero;
  std::size_t original_index = 0;
};

struct LogicalParticle {
  StateVector state;
  Descriptor descriptor;
};

std::vector<LogicalParticle> tp_prepare_sequence(const ProtocolConfig& config, RandomSource& rng);

enum class Operation { Ctrl, Sift };

struct SiftEntry {
  std::size_t index = 0;   // position in the sequence as received
  std::optional<int> bit;  // empty if the outcome has no encoding
  std::string raw;
};

struct ParticipantRecord {
  std::vector<Operation> operations;  // indexed by received position
  std::vector<SiftEntry> sift_bits;   // ascending index
  // particles_out[k] is the processed pair received at permutation[k].
  std::vector<std::size_t> permutation;

  const SiftEntry* find_sift(std::size_t index) const;
};

struct ParticipantOutput {
  std::vector<StateVector> particles_out;
  ParticipantRecord record;
};

struct ParticipantOptions {
  std::optional<Operation> forced_operation;  // test hook
};

ParticipantOutput participant_process(std::span<const StateVector> particles_in,
                                      EncodingFamily family, RandomSource& rng,
                                      const ParticipantOptions& options = {});

enum class Verdict {
  AllEqual,
  NotAllEqual,
  AbortedInsecureChannel,
  AbortedInsufficientParticles,
  AbortedDishonestTP,
};

std::string_view to_string(Verdict v);
bool is_abort(Verdict v);

struct Case1Measurement {
  std::size_t index = 0;
  std::string raw;
  bool error = false;
};

struct CaseOutcome {
  std::size_t ctrl_count = 0;
  std::size_t case1_errors = 0;
  double case1_error_rate = 0.0;
  std::vector<std::size_t> case2;  // original indices, ascending
  std::size_t case3_dropped = 0;
  std::vector<Case1Measurement> measurements;
  std::optional<Verdict> abort;
};

// TP undoes the announced permutation and applies the Case 1/2/3 table.
// Throws std::invalid_argument when the permutation is not a bijection or the
// announcement sizes disagree.
CaseOutcome tp_classify_and_check(std::span<const StateVector> returned,
                                  std::span<const std::size_t> permutation,
                                  std::span<const Operation> operations,
                                  std::span<const Descriptor> descriptors,
                                  const ProtocolConfig& config, RandomSource& rng);

// TP's answer when asked for the initial state of a pair.
using RevealFn = std::function<LogicalValue(std::size_t original_index)>;

struct VerificationOutcome {
  std::vector<std::size_t> tests;
  std::vector<std::size_t> remaining;
  std::vector<LogicalValue> revealed;  // parallel to tests
  std::size_t mismatches = 0;
  double error_rate = 0.0;
  std::optional<Verdict> abort;
};

// Dephasing tests exactly l pairs, rotation tests floor(count / 2). Any
// mismatch aborts. Throws std::invalid_argument if too few pairs exist.
VerificationOutcome participant_verify_tp(std::span<const std::size_t> case2,
                                          const ParticipantRecord& record,
                                          const RevealFn& reveal, EncodingFamily family,
                                          int l, RandomSource& rng);

// r_j = K_j ^ x_j ^ m_j
Bits encode_announcement(const Bits& secret, const Bits& key, const Bits& m);

struct ComparisonResult {
  std::vector<Bits> u;  // n x l
  std::vector<int> c;   // per bit: sum over adjacent participants of u_i ^ u_{i+1}
  Verdict verdict = Verdict::AllEqual;
};

// u = M ^ r, then C_j. Throws std::invalid_argument on ragged/mismatched input.
ComparisonResult tp_compare(const std::vector<Bits>& r, const std::vector<Bits>& m);

struct SessionStats {
  std::size_t pairs_prepared = 0;
  std::size_t sift_count = 0;
  std::size_t ctrl_count = 0;
  std::size_t case1_errors = 0;
  double case1_error_rate = 0.0;
  std::size_t case2_count = 0;
  std::optional<double> step4_error_rate;
};

struct RunOutcome {
  ComparisonResult result;
  ProtocolTranscript transcript;
  std::vector<SessionStats> sessions;  // one per participant reached
};

struct RunHooks {
  std::optional<SharedKey> key;
  // TP misreports the initial state of its first revealed test pair.
  bool dishonest_tp = false;
};

RunOutcome run_protocol(const ProtocolConfig& config, std::span<const Secret> secrets,
                        RandomSource& rng, const RunHooks& hooks = {});

}  // namespace dfq
