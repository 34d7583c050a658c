#include "dfq/df_codec.hpp"

#include <cmath>
#include <stdexcept>

namespace dfq {

namespace {

StateVector run(StateVector s, std::initializer_list<std::pair<Gate, int>> gates) {
  for (const auto& [gate, qubit] : gates) s = apply_single(s, gate, qubit);
  return s;
}

StateVector first_pair_basis(std::string_view raw) {
  return StateVector::basis(2, static_cast<std::size_t>((raw[0] - '0') * 2 + (raw[1] - '0')));
}

}  // namespace

BasisKind basis_of(LogicalValue v) {
  return (v == LogicalValue::Zero || v == LogicalValue::One) ? BasisKind::Z : BasisKind::X;
}

int bit_of(LogicalValue v) {
  switch (v) {
    case LogicalValue::Zero: return 0;
    case LogicalValue::One: return 1;
    default: throw std::invalid_argument("X-basis value has no classical bit");
  }
}

LogicalValue z_value(int bit) { return bit ? LogicalValue::One : LogicalValue::Zero; }
LogicalValue x_value(int bit) { return bit ? LogicalValue::Minus : LogicalValue::Plus; }

std::string_view to_string(EncodingFamily f) {
  return f == EncodingFamily::Dephasing ? "dephasing" : "rotation";
}

std::string_view to_string(LogicalValue v) {
  switch (v) {
    case LogicalValue::Zero: return "zero";
    case LogicalValue::One: return "one";
    case LogicalValue::Plus: return "plus";
    case LogicalValue::Minus: return "minus";
  }
  return "?";
}

std::string_view to_string(BasisKind b) { return b == BasisKind::Z ? "z" : "x"; }

char symbol(LogicalValue v) {
  switch (v) {
    case LogicalValue::Zero: return '0';
    case LogicalValue::One: return '1';
    case LogicalValue::Plus: return '+';
    case LogicalValue::Minus: return '-';
  }
  return '?';
}

EncodingFamily parse_family(std::string_view s) {
  if (s == "dephasing") return EncodingFamily::Dephasing;
  if (s == "rotation") return EncodingFamily::Rotation;
  throw std::invalid_argument("unknown encoding family: " + std::string(s));
}

LogicalValue parse_value(std::string_view s) {
  if (s == "zero") return LogicalValue::Zero;
  if (s == "one") return LogicalValue::One;
  if (s == "plus") return LogicalValue::Plus;
  if (s == "minus") return LogicalValue::Minus;
  throw std::invalid_argument("unknown logical value: " + std::string(s));
}

BasisKind parse_basis_kind(std::string_view s) {
  if (s == "z") return BasisKind::Z;
  if (s == "x") return BasisKind::X;
  throw std::invalid_argument("unknown basis: " + std::string(s));
}

StateVector prepare(EncodingFamily family, LogicalValue value) {
  const StateVector ground = StateVector::basis(2, 0);
  const Gate x = Gate::x();
  const Gate h = Gate::h();
  if (family == EncodingFamily::Dephasing) {
    switch (value) {
      case LogicalValue::Zero: return run(ground, {{x, 2}});
      case LogicalValue::One: return run(ground, {{x, 1}});
      case LogicalValue::Plus: return apply_cnot(run(ground, {{h, 1}, {x, 2}}), 1, 2);
      case LogicalValue::Minus: return apply_cnot(run(ground, {{x, 1}, {x, 2}, {h, 1}}), 1, 2);
    }
  } else {
    switch (value) {
      case LogicalValue::Zero: return apply_cnot(run(ground, {{h, 1}}), 1, 2);
      case LogicalValue::One: return apply_cnot(run(ground, {{x, 1}, {x, 2}, {h, 1}}), 1, 2);
      case LogicalValue::Plus:
        return apply_single(apply_cnot(run(ground, {{h, 1}, {x, 2}}), 1, 2), h, 1);
      case LogicalValue::Minus:
        // |00> -X1-> |10> -H1-> |-0> -CNOT-> (|00>-|11>)/sqrt2 -H1->
        return apply_single(apply_cnot(run(ground, {{x, 1}, {h, 1}}), 1, 2), h, 1);
    }
  }
  throw std::invalid_argument("unknown logical value");
}

StateVector apply_collective_dephasing(const StateVector& state, double theta) {
  const Gate rz = Gate::rz(theta);
  return apply_single(apply_single(state, rz, 1), rz, 2);
}

StateVector apply_collective_rotation(const StateVector& state, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Matrix2 u{c, -s, s, c};
  return apply_matrix(apply_matrix(state, u, 1), u, 2);
}

StateVector apply_collective_noise(const StateVector& state, EncodingFamily family,
                                   double theta) {
  return family == EncodingFamily::Dephasing ? apply_collective_dephasing(state, theta)
                                             : apply_collective_rotation(state, theta);
}

StateVector apply_readout(const StateVector& state, LogicalBasis basis) {
  if (basis.kind == BasisKind::Z) return state;
  if (basis.family == EncodingFamily::Dephasing) {
    return apply_single(apply_cnot(state, 1, 2), Gate::h(), 1);
  }
  return apply_single(state, Gate::h(), 2);
}

LogicalOutcome decode(LogicalBasis basis, std::string_view raw) {
  if (raw.size() != 2) throw std::invalid_argument("raw outcome must have two bits");
  LogicalOutcome out{std::nullopt, std::string(raw)};
  const bool parity_odd = raw[0] != raw[1];
  if (basis.family == EncodingFamily::Dephasing) {
    if (basis.kind == BasisKind::Z) {
      if (raw == "01") out.value = LogicalValue::Zero;
      if (raw == "10") out.value = LogicalValue::One;
    } else {
      if (raw == "01") out.value = LogicalValue::Plus;
      if (raw == "11") out.value = LogicalValue::Minus;
    }
  } else if (basis.kind == BasisKind::Z) {
    out.value = parity_odd ? LogicalValue::One : LogicalValue::Zero;
  } else {
    out.value = parity_odd ? LogicalValue::Minus : LogicalValue::Plus;
  }
  return out;
}

LogicalOutcome measure_logical(const StateVector& state, LogicalBasis basis, RandomSource& rng) {
  const Measurement m = measure_leading(apply_readout(state, basis), 2, rng);
  return decode(basis, m.bits);
}

std::optional<int> sift_decode(EncodingFamily family, std::string_view raw) {
  if (family == EncodingFamily::Rotation) return raw[0] != raw[1] ? 1 : 0;
  if (raw == "01") return 0;
  if (raw == "10") return 1;
  return std::nullopt;
}

SiftResult sift_measure_and_resend(const StateVector& state, EncodingFamily family,
                                   RandomSource& rng) {
  const Measurement m = measure_leading(state, 2, rng);
  return {sift_decode(family, m.bits), m.bits, first_pair_basis(m.bits)};
}

}  // namespace dfq
