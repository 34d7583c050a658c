#include "dfq/attack.hpp"

#include <stdexcept>

namespace dfq {

EntangleParams::EntangleParams(std::string name, const Matrix8& unitary)
    : name_(std::move(name)), unitary_(unitary) {
  if (!is_unitary(unitary_, 8)) {
    throw std::invalid_argument("entangling attack matrix is not unitary");
  }
}

EntangleParams EntangleParams::identity() {
  Matrix8 m{};
  for (std::size_t i = 0; i < 8; ++i) m[i * 8 + i] = 1.0;
  return {"identity", m};
}

EntangleParams EntangleParams::cnot_copy() {
  // Basis index = q1 q2 a (a least significant); flip a when q1 = 1.
  Matrix8 m{};
  for (std::size_t i = 0; i < 8; ++i) {
    const std::size_t j = (i & 4) ? (i ^ 1) : i;
    m[j * 8 + i] = 1.0;
  }
  return {"cnot-copy", m};
}

std::string describe(const AttackModel& model) {
  struct Visitor {
    std::string operator()(const NoAttack&) const { return "none"; }
    std::string operator()(const InterceptResend& a) const {
      return "intercept-resend/" + std::string(to_string(a.fake_family)) + "/" +
             std::string(to_string(a.fake_value));
    }
    std::string operator()(const MeasureResend& a) const {
      return "measure-resend/" + std::string(to_string(a.measure_basis.family)) + "/" +
             std::string(to_string(a.measure_basis.kind));
    }
    std::string operator()(const Entangle& a) const {
      return "entangle/" + a.params.name();
    }
  };
  return std::visit(Visitor{}, model);
}

AttackResult apply_attack(const AttackModel& model, const StateVector& particle,
                          RandomSource& rng) {
  if (const auto* ir = std::get_if<InterceptResend>(&model)) {
    return {prepare(ir->fake_family, ir->fake_value), {particle, std::nullopt}};
  }
  if (const auto* mr = std::get_if<MeasureResend>(&model)) {
    LogicalOutcome seen = measure_logical(particle, mr->measure_basis, rng);
    if (seen.value) {
      return {prepare(mr->measure_basis.family, *seen.value), {std::nullopt, seen}};
    }
    // No codeword matches; forward the raw product state.
    const auto idx = static_cast<std::size_t>((seen.raw[0] - '0') * 2 + (seen.raw[1] - '0'));
    return {StateVector::basis(2, idx), {std::nullopt, seen}};
  }
  if (const auto* en = std::get_if<Entangle>(&model)) {
    const StateVector joint = particle.tensor(StateVector::basis(1, 0));
    return {apply_unitary(joint, en->params.unitary()), {}};
  }
  return {particle, {}};
}

}  // namespace dfq
