#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dfq/random.hpp"

namespace dfq {

using Amplitude = std::complex<double>;

// Row-major 2x2 matrix acting on a single qubit.
using Matrix2 = std::array<Amplitude, 4>;

inline constexpr int kMaxQubits = 3;
inline constexpr std::size_t kMaxDimension = std::size_t{1} << kMaxQubits;
inline constexpr double kNormTolerance = 1e-10;

// Dense state of 1..3 qubits. Basis index i encodes |binary(i)>, qubit 1 is
// the most significant bit. Instances are always normalized.
class StateVector {
 public:
  static StateVector basis(int num_qubits, std::size_t index);
  // Throws std::invalid_argument unless the length is 2, 4 or 8, every entry
  // is finite and the squared norm is 1 within kNormTolerance.
  static StateVector from_amplitudes(std::span<const Amplitude> amps);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return std::size_t{1} << num_qubits_; }
  std::span<const Amplitude> amplitudes() const { return {amps_.data(), dimension()}; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const;

  // Multiplies by a unit-modulus scalar.
  StateVector with_phase(Amplitude phase) const;

  // |this> (x) |other>, other occupying the least significant qubits.
  StateVector tensor(const StateVector& other) const;

 private:
  StateVector() = default;
  friend struct StateAccess;

  int num_qubits_ = 0;
  std::array<Amplitude, kMaxDimension> amps_{};
};

enum class GateKind { I, X, H, RZ, RY, CNOT };

struct Gate {
  GateKind kind = GateKind::I;
  double theta = 0.0;  // radians, RZ / RY only

  static Gate identity() { return {GateKind::I, 0.0}; }
  static Gate x() { return {GateKind::X, 0.0}; }
  static Gate h() { return {GateKind::H, 0.0}; }
  // diag(1, e^{i theta})
  static Gate rz(double theta) { return {GateKind::RZ, theta}; }
  // [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]
  static Gate ry(double theta) { return {GateKind::RY, theta}; }
  static Gate cnot() { return {GateKind::CNOT, 0.0}; }

  bool is_single_qubit() const { return kind != GateKind::CNOT; }
  Gate adjoint() const;

  // 2x2 matrix for single-qubit kinds; throws for CNOT.
  Matrix2 matrix() const;
  // Full matrix: 2x2 for single-qubit kinds, 4x4 (control = qubit 1) for CNOT.
  std::vector<Amplitude> full_matrix() const;
};

// True when U^dagger U = I within tol. `matrix` is row-major, dim x dim.
bool is_unitary(std::span<const Amplitude> matrix, std::size_t dim, double tol = kNormTolerance);

StateVector new_basis_state(int num_qubits, std::size_t index);

// Qubits are numbered from 1 (most significant).
StateVector apply_single(const StateVector& state, const Gate& gate, int qubit);
StateVector apply_matrix(const StateVector& state, const Matrix2& m, int qubit);
StateVector apply_cnot(const StateVector& state, int control, int target);
// Full-register unitary, row-major, dimension x dimension.
StateVector apply_unitary(const StateVector& state, std::span<const Amplitude> matrix);

struct Measurement {
  std::string bits;  // one character per measured qubit, qubit 1 first
  std::size_t index = 0;
  StateVector post_state;
};

Measurement measure_computational(const StateVector& state, RandomSource& rng);

// Measures qubits 1..count only; the remaining qubits stay coherent in the
// renormalized post-measurement state.
Measurement measure_leading(const StateVector& state, int count, RandomSource& rng);

std::vector<double> probabilities(const StateVector& state);

// Marginal distribution of qubits 1..count.
std::vector<double> leading_probabilities(const StateVector& state, int count);

Amplitude inner_product(const StateVector& a, const StateVector& b);

// |<a|b>| >= 1 - tol. Throws std::invalid_argument on dimension mismatch.
bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tol);

// Max-abs amplitude difference <= tol (no phase freedom).
bool approx_equal(const StateVector& a, const StateVector& b, double tol);

std::string bitstring(std::size_t index, int width);

// Samples an index from a discrete distribution. Entries below
// kProbabilityFloor are treated as exactly zero and never drawn.
inline constexpr double kProbabilityFloor = 1e-14;
std::size_t sample_index(std::span<const double> probs, RandomSource& rng);

}  // namespace dfq
