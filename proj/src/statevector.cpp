#include "dfq/statevector.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dfq {

struct StateAccess {
  static StateVector make(int num_qubits) {
    StateVector s;
    s.num_qubits_ = num_qubits;
    return s;
  }
  static Amplitude* data(StateVector& s) { return s.amps_.data(); }
};

namespace {

void check_qubit_count(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in 1.." + std::to_string(kMaxQubits));
  }
}

void check_qubit(const StateVector& s, int qubit) {
  if (qubit < 1 || qubit > s.num_qubits()) {
    throw std::out_of_range("qubit " + std::to_string(qubit) + " out of range for " +
                            std::to_string(s.num_qubits()) + "-qubit state");
  }
}

std::size_t bit_mask(int num_qubits, int qubit) {
  return std::size_t{1} << (num_qubits - qubit);
}

}  // namespace

StateVector StateVector::basis(int num_qubits, std::size_t index) {
  check_qubit_count(num_qubits);
  if (index >= (std::size_t{1} << num_qubits)) {
    throw std::out_of_range("basis index " + std::to_string(index) + " out of range");
  }
  StateVector s = StateAccess::make(num_qubits);
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(std::span<const Amplitude> amps) {
  int n = 0;
  switch (amps.size()) {
    case 2: n = 1; break;
    case 4: n = 2; break;
    case 8: n = 3; break;
    default: throw std::invalid_argument("amplitude count must be 2, 4 or 8");
  }
  StateVector s = StateAccess::make(n);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (!std::isfinite(amps[i].real()) || !std::isfinite(amps[i].imag())) {
      throw std::invalid_argument("amplitude is not finite");
    }
    s.amps_[i] = amps[i];
  }
  if (std::abs(s.norm_squared() - 1.0) > kNormTolerance) {
    throw std::invalid_argument("state is not normalized");
  }
  return s;
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amplitudes()) total += std::norm(a);
  return total;
}

StateVector StateVector::with_phase(Amplitude phase) const {
  if (std::abs(std::abs(phase) - 1.0) > kNormTolerance) {
    throw std::invalid_argument("phase factor must have unit modulus");
  }
  StateVector s = *this;
  for (std::size_t i = 0; i < dimension(); ++i) s.amps_[i] *= phase;
  return s;
}

StateVector StateVector::tensor(const StateVector& other) const {
  check_qubit_count(num_qubits_ + other.num_qubits_);
  StateVector s = StateAccess::make(num_qubits_ + other.num_qubits_);
  for (std::size_t i = 0; i < dimension(); ++i) {
    for (std::size_t j = 0; j < other.dimension(); ++j) {
      s.amps_[i * other.dimension() + j] = amps_[i] * other.amps_[j];
    }
  }
  return s;
}

Gate Gate::adjoint() const {
  switch (kind) {
    case GateKind::RZ: return rz(-theta);
    case GateKind::RY: return ry(-theta);
    default: return *this;
  }
}

Matrix2 Gate::matrix() const {
  using std::numbers::sqrt2;
  switch (kind) {
    case GateKind::I: return {1.0, 0.0, 0.0, 1.0};
    case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::H: return {1.0 / sqrt2, 1.0 / sqrt2, 1.0 / sqrt2, -1.0 / sqrt2};
    case GateKind::RZ: return {1.0, 0.0, 0.0, std::polar(1.0, theta)};
    case GateKind::RY: {
      const double c = std::cos(theta / 2.0);
      const double s = std::sin(theta / 2.0);
      return {c, -s, s, c};
    }
    case GateKind::CNOT: break;
  }
  throw std::invalid_argument("CNOT has no single-qubit matrix");
}

std::vector<Amplitude> Gate::full_matrix() const {
  if (kind == GateKind::CNOT) {
    std::vector<Amplitude> m(16, 0.0);
    m[0 * 4 + 0] = 1.0;
    m[1 * 4 + 1] = 1.0;
    m[2 * 4 + 3] = 1.0;
    m[3 * 4 + 2] = 1.0;
    return m;
  }
  const Matrix2 m = matrix();
  return {m.begin(), m.end()};
}

bool is_unitary(std::span<const Amplitude> matrix, std::size_t dim, double tol) {
  if (matrix.size() != dim * dim) return false;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      Amplitude sum = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        sum += std::conj(matrix[k * dim + i]) * matrix[k * dim + j];
      }
      const Amplitude expected = (i == j) ? 1.0 : 0.0;
      if (std::abs(sum - expected) > tol) return false;
    }
  }
  return true;
}

StateVector new_basis_state(int num_qubits, std::size_t index) {
  return StateVector::basis(num_qubits, index);
}

StateVector apply_matrix(const StateVector& state, const Matrix2& m, int qubit) {
  check_qubit(state, qubit);
  const std::size_t mask = bit_mask(state.num_qubits(), qubit);
  StateVector out = state;
  Amplitude* amps = StateAccess::data(out);
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    if (i & mask) continue;
    const Amplitude a0 = state[i];
    const Amplitude a1 = state[i | mask];
    amps[i] = m[0] * a0 + m[1] * a1;
    amps[i | mask] = m[2] * a0 + m[3] * a1;
  }
  return out;
}

StateVector apply_single(const StateVector& state, const Gate& gate, int qubit) {
  if (!gate.is_single_qubit()) {
    throw std::invalid_argument("CNOT passed to single-qubit gate application");
  }
  return apply_matrix(state, gate.matrix(), qubit);
}

StateVector apply_cnot(const StateVector& state, int control, int target) {
  check_qubit(state, control);
  check_qubit(state, target);
  if (control == target) throw std::invalid_argument("CNOT control equals target");
  const std::size_t cmask = bit_mask(state.num_qubits(), control);
  const std::size_t tmask = bit_mask(state.num_qubits(), target);
  StateVector out = state;
  Amplitude* amps = StateAccess::data(out);
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    if (i & cmask) amps[i] = state[i ^ tmask];
  }
  return out;
}

StateVector apply_unitary(const StateVector& state, std::span<const Amplitude> matrix) {
  const std::size_t dim = state.dimension();
  if (matrix.size() != dim * dim) {
    throw std::invalid_argument("unitary dimension does not match state");
  }
  StateVector out = StateAccess::make(state.num_qubits());
  Amplitude* amps = StateAccess::data(out);
  for (std::size_t r = 0; r < dim; ++r) {
    Amplitude sum = 0.0;
    for (std::size_t c = 0; c < dim; ++c) sum += matrix[r * dim + c] * state[c];
    amps[r] = sum;
  }
  return out;
}

std::vector<double> probabilities(const StateVector& state) {
  std::vector<double> p(state.dimension());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(state[i]);
  return p;
}

std::vector<double> leading_probabilities(const StateVector& state, int count) {
  if (count < 1 || count > state.num_qubits()) {
    throw std::out_of_range("measured qubit count out of range");
  }
  const int rest = state.num_qubits() - count;
  std::vector<double> p(std::size_t{1} << count, 0.0);
  for (std::size_t i = 0; i < state.dimension(); ++i) p[i >> rest] += std::norm(state[i]);
  return p;
}

std::size_t sample_index(std::span<const double> probs, RandomSource& rng) {
  double total = 0.0;
  for (double p : probs) {
    if (p >= kProbabilityFloor) total += p;
  }
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] < kProbabilityFloor) continue;
    acc += probs[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

std::string bitstring(std::size_t index, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int q = 0; q < width; ++q) {
    if (index & (std::size_t{1} << (width - 1 - q))) s[static_cast<std::size_t>(q)] = '1';
  }
  return s;
}

Measurement measure_leading(const StateVector& state, int count, RandomSource& rng) {
  const auto marginal = leading_probabilities(state, count);
  const std::size_t outcome = sample_index(marginal, rng);
  const int rest = state.num_qubits() - count;
  StateVector post = StateAccess::make(state.num_qubits());
  Amplitude* amps = StateAccess::data(post);
  const double scale = 1.0 / std::sqrt(marginal[outcome]);
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    if ((i >> rest) == outcome) amps[i] = state[i] * scale;
  }
  return {bitstring(outcome, count), outcome, post};
}

Measurement measure_computational(const StateVector& state, RandomSource& rng) {
  const auto probs = probabilities(state);
  const std::size_t outcome = sample_index(probs, rng);
  return {bitstring(outcome, state.num_qubits()), outcome,
          StateVector::basis(state.num_qubits(), outcome)};
}

Amplitude inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("state dimension mismatch");
  }
  Amplitude sum = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tol) {
  return std::abs(inner_product(a, b)) >= 1.0 - tol;
}

bool approx_equal(const StateVector& a, const StateVector& b, double tol) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("state dimension mismatch");
  }
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

}  // namespace dfq
