#include "dfq/adversary.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dfq {

namespace {

using Vec = std::vector<Amplitude>;

double per_group_probability(const AttackModel& model, EncodingFamily family) {
  if (std::holds_alternative<NoAttack>(model)) return 0.0;
  if (const auto* ir = std::get_if<InterceptResend>(&model)) {
    if (ir->fake_family == family && basis_of(ir->fake_value) == BasisKind::Z) return 0.25;
  }
  if (const auto* mr = std::get_if<MeasureResend>(&model)) {
    if (mr->measure_basis == LogicalBasis{family, BasisKind::Z}) return 0.05;
  }
  throw std::invalid_argument("no closed-form detection probability for " + describe(model));
}

double binomial_stderr(double p, std::size_t trials) {
  return trials ? std::sqrt(p * (1.0 - p) / static_cast<double>(trials)) : 0.0;
}

bool within_4sigma(double estimate, double p, std::size_t trials) {
  const double sigma = binomial_stderr(p, trials);
  return std::abs(estimate - p) <= 4.0 * sigma + 1e-12;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

Amplitude dot(const Vec& a, const Vec& b) {
  Amplitude s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Orthonormal basis of C^dim whose leading vectors are `fixed` (assumed
// orthonormal); the rest come from Gaussian vectors, orthogonalized twice.
std::vector<Vec> complete_basis(std::vector<Vec> fixed, std::size_t dim, RandomSource& rng) {
  std::vector<Vec> basis = std::move(fixed);
  while (basis.size() < dim) {
    Vec v(dim);
    for (auto& x : v) x = Amplitude(rng.normal(), rng.normal());
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const Amplitude proj = dot(b, v);
        for (std::size_t i = 0; i < dim; ++i) v[i] -= proj * b[i];
      }
    }
    double norm = 0.0;
    for (const auto& x : v) norm += std::norm(x);
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;
    for (auto& x : v) x /= norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

Vec as_vec(const StateVector& s) { return {s.amplitudes().begin(), s.amplitudes().end()}; }

Matrix8 to_matrix8(const Vec& m) {
  Matrix8 out{};
  for (std::size_t i = 0; i < 64; ++i) out[i] = m[i];
  return out;
}

// Ancilla density matrix (2x2, row-major) of a protocol (x) ancilla state.
std::array<Amplitude, 4> ancilla_state(const StateVector& joint) {
  std::array<Amplitude, 4> rho{};
  for (std::size_t q = 0; q < 4; ++q) {
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        rho[a * 2 + b] += joint[q * 2 + a] * std::conj(joint[q * 2 + b]);
      }
    }
  }
  return rho;
}

}  // namespace

bool has_closed_form(const AttackModel& model, EncodingFamily family) {
  try {
    per_group_probability(model, family);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

double closed_form_detection(const AttackModel& model, EncodingFamily family, int m) {
  if (m < 0) throw std::invalid_argument("attacked group count must be >= 0");
  const double p = per_group_probability(model, family);
  return 1.0 - std::pow(1.0 - p, m);
}

GroupTrial simulate_attacked_group(EncodingFamily family, const AttackModel& model,
                                   const ThetaPolicy& theta, RandomSource& rng) {
  const bool z_pair = rng.bernoulli(0.8);
  const LogicalValue value = z_pair ? z_value(rng.coin()) : x_value(rng.coin());
  const LogicalBasis basis{family, z_pair ? BasisKind::Z : BasisKind::X};

  StateVector outbound = apply_collective_noise(prepare(family, value), family, theta.draw(rng));
  const StateVector received = apply_attack(model, outbound, rng).to_participant;

  GroupTrial t;
  if (!rng.coin()) {  // CTRL
    const StateVector back = apply_collective_noise(received, family, theta.draw(rng));
    t.case1_detected = measure_logical(back, basis, rng).value != value;
    t.any_check_detected = t.case1_detected;
  } else {
    const SiftResult sift = sift_measure_and_resend(received, family, rng);
    if (z_pair) t.any_check_detected = !sift.bit || *sift.bit != bit_of(value);
  }
  return t;
}

DetectionReport monte_carlo_detection(const ProtocolConfig& config, const AttackModel& model,
                                      int m, std::size_t trials, RandomSource& rng) {
  if (m < 0) throw std::invalid_argument("attacked group count must be >= 0");
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");

  DetectionReport r;
  r.model = describe(model);
  r.family = config.family;
  r.m = m;
  r.trials = trials;

  std::size_t single = 0;
  std::size_t any = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const GroupTrial g = simulate_attacked_group(config.family, model, config.theta_policy, rng);
    single += g.case1_detected;
    any += g.any_check_detected;
  }
  std::size_t overall = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    bool caught = false;
    for (int g = 0; g < m; ++g) {
      caught |= simulate_attacked_group(config.family, model, config.theta_policy, rng)
                    .case1_detected;
    }
    overall += caught;
  }

  const double n = static_cast<double>(trials);
  r.per_group_estimate = single / n;
  r.per_group_stderr = binomial_stderr(r.per_group_estimate, trials);
  r.overall_estimate = overall / n;
  r.overall_stderr = binomial_stderr(r.overall_estimate, trials);
  r.any_check_per_group_estimate = any / n;
  if (has_closed_form(model, config.family)) {
    r.closed_form_per_group = closed_form_detection(model, config.family, 1);
    r.closed_form_overall = closed_form_detection(model, config.family, m);
  }
  return r;
}

std::optional<bool> DetectionReport::passes_4sigma() const {
  if (!closed_form_overall) return std::nullopt;
  return within_4sigma(per_group_estimate, *closed_form_per_group, trials) &&
         within_4sigma(overall_estimate, *closed_form_overall, trials);
}

nlohmann::ordered_json to_json(const DetectionReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["model"] = r.model;
  j["family"] = to_string(r.family);
  j["m"] = r.m;
  j["trials"] = r.trials;
  j["per_group_estimate"] = r.per_group_estimate;
  j["per_group_stderr"] = r.per_group_stderr;
  j["overall_estimate"] = r.overall_estimate;
  j["overall_stderr"] = r.overall_stderr;
  j["closed_form_per_group"] = r.closed_form_per_group ? nlohmann::ordered_json(*r.closed_form_per_group)
                                                       : nlohmann::ordered_json(nullptr);
  j["closed_form_overall"] = r.closed_form_overall ? nlohmann::ordered_json(*r.closed_form_overall)
                                                   : nlohmann::ordered_json(nullptr);
  j["any_check_per_group_estimate"] = r.any_check_per_group_estimate;
  const auto pass = r.passes_4sigma();
  j["pass_4sigma"] = pass ? nlohmann::ordered_json(*pass) : nlohmann::ordered_json(nullptr);
  return j;
}

std::string csv_header() {
  return "schema_version,model,family,m,trials,per_group_estimate,per_group_stderr,"
         "overall_estimate,overall_stderr,closed_form_per_group,closed_form_overall,"
         "any_check_per_group_estimate,result";
}

std::string csv_row(const DetectionReport& r) {
  const auto pass = r.passes_4sigma();
  std::string row = "1," + r.model + "," + std::string(to_string(r.family)) + "," +
                    std::to_string(r.m) + "," + std::to_string(r.trials) + "," +
                    fmt(r.per_group_estimate) + "," + fmt(r.per_group_stderr) + "," +
                    fmt(r.overall_estimate) + "," + fmt(r.overall_stderr) + ",";
  row += (r.closed_form_per_group ? fmt(*r.closed_form_per_group) : "") + ",";
  row += (r.closed_form_overall ? fmt(*r.closed_form_overall) : "") + ",";
  row += fmt(r.any_check_per_group_estimate) + ",";
  row += pass ? (*pass ? "PASS" : "FAIL") : "N/A";
  return row;
}

EntanglingAnalysis entangling_attack_analysis(const EntangleParams& params,
                                              EncodingFamily family) {
  struct Weighted {
    LogicalValue value;
    double weight;
  };
  static constexpr Weighted kMix[] = {{LogicalValue::Zero, 0.4},
                                      {LogicalValue::One, 0.4},
                                      {LogicalValue::Plus, 0.1},
                                      {LogicalValue::Minus, 0.1}};
  const StateVector ancilla = StateVector::basis(1, 0);

  EntanglingAnalysis out;
  std::array<Amplitude, 4> rho[2];
  for (const auto& [value, weight] : kMix) {
    const StateVector joint =
        apply_unitary(prepare(family, value).tensor(ancilla), params.unitary());
    if (value == LogicalValue::Zero) rho[0] = ancilla_state(joint);
    if (value == LogicalValue::One) rho[1] = ancilla_state(joint);

    const LogicalBasis basis{family, basis_of(value)};
    const auto marginal = leading_probabilities(apply_readout(joint, basis), 2);
    for (std::size_t raw = 0; raw < 4; ++raw) {
      if (decode(basis, bitstring(raw, 2)).value != value) out.detection_prob += weight * marginal[raw];
    }
  }

  std::array<Amplitude, 4> d{};
  for (std::size_t i = 0; i < 4; ++i) d[i] = rho[0][i] - rho[1][i];
  const double mean = 0.5 * (d[0].real() + d[3].real());
  const double half_gap = 0.5 * (d[0].real() - d[3].real());
  const double radius = std::sqrt(half_gap * half_gap + std::norm(d[1]));
  out.eve_distinguishability = 0.5 * (std::abs(mean + radius) + std::abs(mean - radius));
  return out;
}

std::vector<Amplitude> random_unitary(std::size_t dim, RandomSource& rng) {
  const auto cols = complete_basis({}, dim, rng);
  std::vector<Amplitude> m(dim * dim);
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t r = 0; r < dim; ++r) m[r * dim + c] = cols[c][r];
  }
  return m;
}

EntangleParams random_entangle_params(int kind, EncodingFamily family, RandomSource& rng) {
  Vec m(64, 0.0);
  switch (kind) {
    case 0: {
      m = random_unitary(8, rng);
      return {"haar", to_matrix8(m)};
    }
    case 1: {
      for (std::size_t q = 0; q < 4; ++q) {
        const auto block = random_unitary(2, rng);
        for (std::size_t a = 0; a < 2; ++a) {
          for (std::size_t b = 0; b < 2; ++b) m[(q * 2 + a) * 8 + (q * 2 + b)] = block[a * 2 + b];
        }
      }
      return {"controlled", to_matrix8(m)};
    }
    case 2: {
      const auto e = random_unitary(2, rng);
      const StateVector eve = StateVector::from_amplitudes(std::array<Amplitude, 2>{e[0], e[2]});
      const StateVector zero = prepare(family, LogicalValue::Zero);
      const StateVector one = prepare(family, LogicalValue::One);
      const StateVector fresh = StateVector::basis(1, 0);
      const auto inputs =
          complete_basis({as_vec(zero.tensor(fresh)), as_vec(one.tensor(fresh))}, 8, rng);
      const auto outputs =
          complete_basis({as_vec(zero.tensor(eve)), as_vec(one.tensor(eve))}, 8, rng);
      // U = sum_k |out_k><in_k|
      for (std::size_t k = 0; k < 8; ++k) {
        for (std::size_t r = 0; r < 8; ++r) {
          for (std::size_t c = 0; c < 8; ++c) m[r * 8 + c] += outputs[k][r] * std::conj(inputs[k][c]);
        }
      }
      return {"zero-disturbance", to_matrix8(m)};
    }
    default: throw std::invalid_argument("unknown entangling attack generator");
  }
}

}  // namespace dfq
