#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>

#include "dfq/df_codec.hpp"
#include "dfq/random.hpp"
#include "dfq/statevector.hpp"

namespace dfq {

// Row-major 8x8 unitary on (protocol qubit 1, protocol qubit 2, ancilla).
using Matrix8 = std::array<Amplitude, 64>;

// Eavesdropper coupling for the entangling attack. The ancilla starts in |0>.
class EntangleParams {
 public:
  // Throws std::invalid_argument if `unitary` is not unitary within 1e-10.
  EntangleParams(std::string name, const Matrix8& unitary);

  static EntangleParams identity();
  // Copies protocol qubit 1 into the ancilla.
  static EntangleParams cnot_copy();

  const std::string& name() const { return name_; }
  const Matrix8& unitary() const { return unitary_; }

 private:
  std::string name_;
  Matrix8 unitary_;
};

struct NoAttack {};

// Eve swallows the genuine pair and forwards a pre-built fake codeword.
struct InterceptResend {
  LogicalValue fake_value = LogicalValue::Zero;
  EncodingFamily fake_family = EncodingFamily::Dephasing;
};

// Eve measures in a logical basis and forwards the codeword she observed.
struct MeasureResend {
  LogicalBasis measure_basis;
};

struct Entangle {
  EntangleParams params;
};

using AttackModel = std::variant<NoAttack, InterceptResend, MeasureResend, Entangle>;

std::string describe(const AttackModel& model);

struct EveRecord {
  std::optional<StateVector> stored;       // intercept-resend keeps the genuine pair
  std::optional<LogicalOutcome> measured;  // measure-resend readout
};

struct AttackResult {
  // Two qubits, or three when the ancilla rides along (entangling attack).
  StateVector to_participant;
  EveRecord eve;
};

// Acts on the TP -> participant leg.
AttackResult apply_attack(const AttackModel& model, const StateVector& particle,
                          RandomSource& rng);

}  // namespace dfq
