#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "dfq/statevector.hpp"
#include "test_util.hpp"

using namespace dfq;
using dfq::test::random_state;
using dfq::test::within_4sigma;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

StateVector state_of(std::initializer_list<Amplitude> amps) {
  return StateVector::from_amplitudes(std::vector<Amplitude>(amps));
}

}  // namespace

TEST_CASE("basis states") {
  CHECK(approx_equal(new_basis_state(2, 0), state_of({1, 0, 0, 0}), 0.0));
  CHECK(approx_equal(new_basis_state(2, 1), state_of({0, 1, 0, 0}), 0.0));
  const StateVector s = new_basis_state(3, 5);
  CHECK(s.num_qubits() == 3);
  for (std::size_t i = 0; i < 8; ++i) CHECK(s[i] == Amplitude(i == 5 ? 1.0 : 0.0));
  CHECK(bitstring(5, 3) == "101");

  CHECK_THROWS_AS(new_basis_state(2, 4), std::out_of_range);
  CHECK_THROWS_AS(new_basis_state(4, 0), std::invalid_argument);
}

TEST_CASE("from_amplitudes validates") {
  CHECK_THROWS_AS(state_of({1, 1, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(state_of({1, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(state_of({std::nan(""), 0}), std::invalid_argument);
}

TEST_CASE("single-qubit gates") {
  CHECK(approx_equal(apply_single(new_basis_state(1, 0), Gate::x(), 1), new_basis_state(1, 1), 0.0));

  const StateVector plus_first = apply_single(new_basis_state(2, 0), Gate::h(), 1);
  CHECK(approx_equal(plus_first, state_of({kInvSqrt2, 0, kInvSqrt2, 0}), 1e-15));

  // RZ(pi/5) on qubit 2 of |01>: multiply by diag(1, e^{i pi/5}) by hand.
  const double theta = std::numbers::pi / 5.0;
  const Amplitude phase(std::cos(theta), std::sin(theta));
  const StateVector rz = apply_single(new_basis_state(2, 1), Gate::rz(theta), 2);
  CHECK(approx_equal(rz, state_of({0, phase, 0, 0}), 1e-15));

  CHECK_THROWS_AS(apply_single(new_basis_state(2, 0), Gate::x(), 3), std::out_of_range);
  CHECK_THROWS_AS(apply_single(new_basis_state(2, 0), Gate::cnot(), 1), std::invalid_argument);
}

TEST_CASE("RY convention") {
  const double theta = 0.7;
  const StateVector s = apply_single(new_basis_state(1, 0), Gate::ry(theta), 1);
  CHECK(s[0].real() == doctest::Approx(std::cos(theta / 2)));
  CHECK(s[1].real() == doctest::Approx(std::sin(theta / 2)));
}

TEST_CASE("CNOT truth table") {
  CHECK(approx_equal(apply_cnot(new_basis_state(2, 2), 1, 2), new_basis_state(2, 3), 0.0));
  CHECK(approx_equal(apply_cnot(new_basis_state(2, 0), 1, 2), new_basis_state(2, 0), 0.0));
  const StateVector psi_plus = state_of({0, kInvSqrt2, kInvSqrt2, 0});
  CHECK(approx_equal(apply_cnot(psi_plus, 1, 2), state_of({0, kInvSqrt2, 0, kInvSqrt2}), 0.0));
  // control on the least significant qubit of three
  CHECK(approx_equal(apply_cnot(new_basis_state(3, 1), 3, 1), new_basis_state(3, 5), 0.0));
  CHECK_THROWS_AS(apply_cnot(psi_plus, 1, 1), std::invalid_argument);
}

TEST_CASE("gate matrices are unitary") {
  for (const Gate& g : {Gate::identity(), Gate::x(), Gate::h(), Gate::rz(0.3), Gate::ry(2.1),
                        Gate::cnot()}) {
    const auto m = g.full_matrix();
    CHECK(is_unitary(m, g.is_single_qubit() ? 2 : 4));
  }
  const std::vector<Amplitude> not_unitary{1, 1, 0, 1};
  CHECK_FALSE(is_unitary(not_unitary, 2));
}

TEST_CASE("gate followed by adjoint restores the input") {
  RandomSource rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const StateVector s = random_state(3, rng);
    for (const Gate& g : {Gate::x(), Gate::h(), Gate::rz(rng.uniform() * 6.0),
                          Gate::ry(rng.uniform() * 6.0), Gate::identity()}) {
      const int q = 1 + static_cast<int>(rng.below(3));
      CHECK(approx_equal(apply_single(apply_single(s, g, q), g.adjoint(), q), s, 1e-10));
    }
    CHECK(approx_equal(apply_cnot(apply_cnot(s, 1, 3), 1, 3), s, 1e-10));
  }
}

TEST_CASE("norm is preserved by gate sequences") {
  RandomSource rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    StateVector s = random_state(3, rng);
    for (int step = 0; step < 40; ++step) {
      const int q = 1 + static_cast<int>(rng.below(3));
      switch (rng.below(5)) {
        case 0: s = apply_single(s, Gate::h(), q); break;
        case 1: s = apply_single(s, Gate::rz(rng.uniform() * 6.3), q); break;
        case 2: s = apply_single(s, Gate::ry(rng.uniform() * 6.3), q); break;
        case 3: s = apply_single(s, Gate::x(), q); break;
        default: s = apply_cnot(s, q, q % 3 + 1); break;
      }
    }
    CHECK(std::abs(s.norm_squared() - 1.0) < 1e-10);
  }
}

TEST_CASE("probabilities") {
  CHECK(probabilities(new_basis_state(2, 3)) == std::vector<double>{0, 0, 0, 1});
  const auto p = probabilities(state_of({0, kInvSqrt2, kInvSqrt2, 0}));
  CHECK(p[1] == doctest::Approx(0.5));
  CHECK(p[2] == doctest::Approx(0.5));
  const double theta = std::numbers::pi / 5.0;
  CHECK(probabilities(new_basis_state(2, 3).with_phase(std::polar(1.0, theta))) ==
        std::vector<double>{0, 0, 0, 1});
}

TEST_CASE("probabilities ignore global phase") {
  RandomSource rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const StateVector s = random_state(2, rng);
    const auto shifted = probabilities(s.with_phase(std::polar(1.0, rng.uniform() * 6.3)));
    const auto plain = probabilities(s);
    for (std::size_t i = 0; i < 4; ++i) CHECK(shifted[i] == doctest::Approx(plain[i]).epsilon(1e-12));
  }
}

TEST_CASE("measurement of an eigenstate is deterministic") {
  RandomSource rng(14);
  for (int i = 0; i < 100; ++i) {
    const Measurement m = measure_computational(new_basis_state(2, 1), rng);
    CHECK(m.bits == "01");
    CHECK(approx_equal(m.post_state, new_basis_state(2, 1), 0.0));
  }
}

TEST_CASE("measurement statistics within 4 sigma") {
  RandomSource rng(15);
  const std::size_t shots = 100000;
  SUBCASE("singlet") {
    const StateVector singlet = state_of({0, kInvSqrt2, -kInvSqrt2, 0});
    std::array<std::size_t, 4> counts{};
    for (std::size_t i = 0; i < shots; ++i) ++counts[measure_computational(singlet, rng).index];
    CHECK(counts[0] == 0);
    CHECK(counts[3] == 0);
    CHECK(within_4sigma(counts[1], shots, 0.5));
  }
  SUBCASE("uniform with a sign") {
    const StateVector s = state_of({0.5, 0.5, 0.5, -0.5});
    std::array<std::size_t, 4> counts{};
    for (std::size_t i = 0; i < shots; ++i) ++counts[measure_computational(s, rng).index];
    for (auto c : counts) CHECK(within_4sigma(c, shots, 0.25));
  }
  SUBCASE("random state") {
    const StateVector s = random_state(3, rng);
    const auto p = probabilities(s);
    std::array<std::size_t, 8> counts{};
    for (std::size_t i = 0; i < shots; ++i) ++counts[measure_computational(s, rng).index];
    for (std::size_t i = 0; i < 8; ++i) CHECK(within_4sigma(counts[i], shots, p[i]));
  }
}

TEST_CASE("partial measurement keeps the rest coherent") {
  RandomSource rng(16);
  // (|00> + |11>)/sqrt2 (x) |+>: measuring two qubits leaves |+> on the third.
  const StateVector plus = apply_single(new_basis_state(1, 0), Gate::h(), 1);
  const StateVector bell = apply_cnot(apply_single(new_basis_state(2, 0), Gate::h(), 1), 1, 2);
  const StateVector joint = bell.tensor(plus);
  for (int i = 0; i < 20; ++i) {
    const Measurement m = measure_leading(joint, 2, rng);
    CHECK((m.bits == "00" || m.bits == "11"));
    CHECK(std::abs(m.post_state.norm_squared() - 1.0) < 1e-12);
    const std::size_t base = m.bits == "00" ? 0 : 6;
    CHECK(std::abs(m.post_state[base] - Amplitude(kInvSqrt2)) < 1e-12);
    CHECK(std::abs(m.post_state[base + 1] - Amplitude(kInvSqrt2)) < 1e-12);
  }
}

TEST_CASE("equality up to global phase") {
  const StateVector a = new_basis_state(2, 1);
  CHECK(equal_up_to_global_phase(a, a.with_phase(std::polar(1.0, 0.4)), 1e-10));
  CHECK_FALSE(equal_up_to_global_phase(a, new_basis_state(2, 2), 1e-10));
  const StateVector singlet = state_of({0, kInvSqrt2, -kInvSqrt2, 0});
  CHECK(equal_up_to_global_phase(singlet, singlet, 1e-10));
  CHECK_THROWS_AS(equal_up_to_global_phase(a, new_basis_state(3, 1), 1e-10), std::invalid_argument);
}

TEST_CASE("sampling never draws zero-probability outcomes") {
  RandomSource rng(17);
  const std::vector<double> p{0.0, 1e-20, 1.0, 0.0};
  for (int i = 0; i < 1000; ++i) CHECK(sample_index(p, rng) == 2);
}
