#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "dfq/random.hpp"
#include "dfq/statevector.hpp"

namespace dfq {

// Decoherence-free logical encodings over two physical qubits.
//
//   Dephasing: |0> = |01>, |1> = |10>, |+> = psi+, |-> = psi-
//   Rotation:  |0> = phi+, |1> = psi-, |+-> = (phi+ +- psi-)/sqrt2
//
// Functions in this header act on qubits 1 and 2. States may carry a third
// (eavesdropper ancilla) qubit, which is left untouched.

enum class EncodingFamily { Dephasing, Rotation };
enum class LogicalValue { Zero, One, Plus, Minus };
enum class BasisKind { Z, X };

struct LogicalBasis {
  EncodingFamily family = EncodingFamily::Dephasing;
  BasisKind kind = BasisKind::Z;
  friend bool operator==(const LogicalBasis&, const LogicalBasis&) = default;
};

struct LogicalOutcome {
  std::optional<LogicalValue> value;  // empty when the pair left the codespace
  std::string raw;                    // physical bits after the readout circuit

  bool is_invalid() const { return !value.has_value(); }
};

BasisKind basis_of(LogicalValue v);
// 0 for Zero, 1 for One; throws for X-basis values.
int bit_of(LogicalValue v);
LogicalValue z_value(int bit);
LogicalValue x_value(int bit);  // 0 -> Plus, 1 -> Minus

std::string_view to_string(EncodingFamily f);
std::string_view to_string(LogicalValue v);
std::string_view to_string(BasisKind b);
char symbol(LogicalValue v);  // '0', '1', '+', '-'
EncodingFamily parse_family(std::string_view s);
LogicalValue parse_value(std::string_view s);
BasisKind parse_basis_kind(std::string_view s);

// Builds the codeword from |00> with the family's preparation gate sequence.
StateVector prepare(EncodingFamily family, LogicalValue value);

// U (x) U with U = diag(1, e^{i theta}).
StateVector apply_collective_dephasing(const StateVector& state, double theta);
// U (x) U with U = [[cos theta, -sin theta], [sin theta, cos theta]].
StateVector apply_collective_rotation(const StateVector& state, double theta);
StateVector apply_collective_noise(const StateVector& state, EncodingFamily family, double theta);

// Readout gates that map the basis onto computational outcomes:
// X_dp: CNOT(1,2) then H(1); X_r: H(2); Z bases: none.
StateVector apply_readout(const StateVector& state, LogicalBasis basis);

// Decoding of the two raw bits produced after apply_readout.
LogicalOutcome decode(LogicalBasis basis, std::string_view raw);

LogicalOutcome measure_logical(const StateVector& state, LogicalBasis basis, RandomSource& rng);

struct SiftResult {
  std::optional<int> bit;  // empty for dephasing pairs outside {01, 10}
  std::string raw;
  StateVector fresh;       // two-qubit product state matching `raw`
};

// Z(x)Z measurement followed by re-preparation of the measured product state.
SiftResult sift_measure_and_resend(const StateVector& state, EncodingFamily family,
                                   RandomSource& rng);

// Classical bit a SIFT outcome encodes under the family's rule.
std::optional<int> sift_decode(EncodingFamily family, std::string_view raw);

}  // namespace dfq
