#pragma once

#include <cmath>
#include <vector>

#include "dfq/random.hpp"
#include "dfq/statevector.hpp"

namespace dfq::test {

inline StateVector random_state(int num_qubits, RandomSource& rng) {
  std::vector<Amplitude> amps(std::size_t{1} << num_qubits);
  double norm = 0.0;
  for (auto& a : amps) {
    a = Amplitude(rng.normal(), rng.normal());
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return StateVector::from_amplitudes(amps);
}

// Binomial 4-sigma acceptance for an observed count.
inline bool within_4sigma(std::size_t count, std::size_t shots, double p) {
  const double n = static_cast<double>(shots);
  const double sigma = std::sqrt(p * (1.0 - p) / n);
  return std::abs(static_cast<double>(count) / n - p) <= 4.0 * sigma + 1e-12;
}

inline std::vector<Amplitude> amps_of(const StateVector& s) {
  return {s.amplitudes().begin(), s.amplitudes().end()};
}

}  // namespace dfq::test
