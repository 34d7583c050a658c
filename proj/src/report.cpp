#include "dfq/report.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <type_traits>

namespace dfq {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown field \"" + key + "\" in " + where);
  }
}

template <class T>
T get_field(const json& obj, const char* key, const std::string& where) {
  if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
    const json* v = obj.contains(key) ? &obj.at(key) : nullptr;
    if (v && !v->is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
    if (v && std::is_unsigned_v<T> && !v->is_number_unsigned()) {
      throw ConfigError(where + "." + key + " must be non-negative");
    }
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

ThetaPolicy theta_from_json(const json& j) {
  reject_unknown(j, {"kind", "value"}, "theta_policy");
  const auto kind = get_field<std::string>(j, "kind", "theta_policy");
  if (kind == "random") {
    if (j.contains("value")) throw ConfigError("theta_policy.value only applies to kind \"fixed\"");
    return ThetaPolicy::random();
  }
  if (kind == "fixed") return ThetaPolicy::fixed(get_field<double>(j, "value", "theta_policy"));
  throw ConfigError("theta_policy.kind must be \"random\" or \"fixed\"");
}

ojson theta_to_json(const ThetaPolicy& t) {
  ojson j;
  if (t.kind == ThetaPolicy::Kind::Random) {
    j["kind"] = "random";
  } else {
    j["kind"] = "fixed";
    j["value"] = t.value;
  }
  return j;
}

template <class F>
auto as_config_error(F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

std::vector<Secret> SecretsSpec::draw(int n, int l, RandomSource& rng) const {
  const auto un = static_cast<std::size_t>(n);
  const auto ul = static_cast<std::size_t>(l);
  std::vector<Secret> out;
  if (!explicit_bits.empty()) {
    if (explicit_bits.size() != un) throw ConfigError("secrets list must have n entries");
    for (const auto& s : explicit_bits) {
      Secret sec{as_config_error([&] { return parse_bits(s); })};
      if (sec.bits.size() != ul) throw ConfigError("explicit secret length differs from l");
      out.push_back(std::move(sec));
    }
    return out;
  }
  auto random_bits = [&] {
    Bits b(ul);
    for (auto& x : b) x = rng.coin() ? 1 : 0;
    return b;
  };
  if (mode == "random") {
    for (std::size_t i = 0; i < un; ++i) out.push_back({random_bits()});
    return out;
  }
  const Bits base = random_bits();
  out.assign(un, Secret{base});
  if (mode == "one_bit_differs") {
    const std::size_t who = rng.below(un);
    const std::size_t bit = rng.below(ul);
    out[who].bits[bit] ^= 1;
  } else if (mode != "equal") {
    throw ConfigError("secrets must be \"equal\", \"one_bit_differs\", \"random\" or a list");
  }
  return out;
}

ojson attack_to_json(const AttackModel& model) {
  ojson j;
  if (std::holds_alternative<NoAttack>(model)) {
    j["kind"] = "none";
  } else if (const auto* ir = std::get_if<InterceptResend>(&model)) {
    j["kind"] = "intercept_resend";
    j["fake_value"] = to_string(ir->fake_value);
    j["fake_family"] = to_string(ir->fake_family);
  } else if (const auto* mr = std::get_if<MeasureResend>(&model)) {
    j["kind"] = "measure_resend";
    j["measure_basis"] = {{"family", to_string(mr->measure_basis.family)},
                          {"kind", to_string(mr->measure_basis.kind)}};
  } else if (const auto* en = std::get_if<Entangle>(&model)) {
    j["kind"] = "entangle";
    j["params"] = en->params.name();
    const auto& name = en->params.name();
    if (name != "identity" && name != "cnot-copy") {
      ojson u = ojson::array();
      for (const auto& a : en->params.unitary()) u.push_back({a.real(), a.imag()});
      j["unitary"] = u;
    }
  }
  return j;
}

AttackModel attack_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("attack must be an object");
  const auto kind = get_field<std::string>(j, "kind", "attack");
  return as_config_error([&]() -> AttackModel {
    if (kind == "none") {
      reject_unknown(j, {"kind"}, "attack");
      return NoAttack{};
    }
    if (kind == "intercept_resend") {
      reject_unknown(j, {"kind", "fake_value", "fake_family"}, "attack");
      return InterceptResend{parse_value(get_field<std::string>(j, "fake_value", "attack")),
                             parse_family(get_field<std::string>(j, "fake_family", "attack"))};
    }
    if (kind == "measure_resend") {
      reject_unknown(j, {"kind", "measure_basis"}, "attack");
      const json& b = j.at("measure_basis");
      reject_unknown(b, {"family", "kind"}, "attack.measure_basis");
      return MeasureResend{{parse_family(get_field<std::string>(b, "family", "measure_basis")),
                            parse_basis_kind(get_field<std::string>(b, "kind", "measure_basis"))}};
    }
    if (kind == "entangle") {
      reject_unknown(j, {"kind", "params", "unitary"}, "attack");
      const auto name = get_field<std::string>(j, "params", "attack");
      if (!j.contains("unitary")) {
        if (name == "identity") return Entangle{EntangleParams::identity()};
        if (name == "cnot-copy") return Entangle{EntangleParams::cnot_copy()};
        throw ConfigError("entangle params must be \"identity\", \"cnot-copy\" or give a unitary");
      }
      const json& u = j.at("unitary");
      if (!u.is_array() || u.size() != 64) throw ConfigError("attack.unitary needs 64 [re, im] pairs");
      Matrix8 m{};
      for (std::size_t i = 0; i < 64; ++i) {
        m[i] = Amplitude(u[i].at(0).get<double>(), u[i].at(1).get<double>());
      }
      return Entangle{EntangleParams(name, m)};
    }
    throw ConfigError("unknown attack kind \"" + kind + "\"");
  });
}

RunConfigFile parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j,
                 {"family", "n", "l", "delta", "theta_policy", "seed", "attack",
                  "tolerable_error_rate", "trials", "secrets", "out_dir", "write_transcripts"},
                 "config");

  RunConfigFile cfg;
  auto& p = cfg.protocol;
  const std::string where = "config";
  if (j.contains("family")) {
    p.family = as_config_error([&] { return parse_family(get_field<std::string>(j, "family", where)); });
  }
  if (j.contains("n")) p.n = get_field<int>(j, "n", where);
  if (j.contains("l")) p.l = get_field<int>(j, "l", where);
  if (j.contains("delta")) p.delta = get_field<double>(j, "delta", where);
  if (j.contains("theta_policy")) p.theta_policy = theta_from_json(j.at("theta_policy"));
  if (j.contains("seed")) {
    p.seed = get_field<std::uint64_t>(j, "seed", where);
    cfg.seed_given = true;
  }
  if (j.contains("attack")) p.attack = attack_from_json(j.at("attack"));
  if (j.contains("tolerable_error_rate")) {
    p.tolerable_error_rate = get_field<double>(j, "tolerable_error_rate", where);
  }
  if (j.contains("trials")) {
    const auto t = get_field<std::int64_t>(j, "trials", where);
    if (t < 1) throw ConfigError("trials must be >= 1");
    cfg.trials = static_cast<std::size_t>(t);
  }
  if (j.contains("secrets")) {
    const json& s = j.at("secrets");
    if (s.is_string()) {
      cfg.secrets.mode = s.get<std::string>();
    } else if (s.is_array()) {
      cfg.secrets.mode = "explicit";
      cfg.secrets.explicit_bits = get_field<std::vector<std::string>>(j, "secrets", where);
    } else {
      throw ConfigError("secrets must be a string or a list of bit strings");
    }
  }
  if (j.contains("out_dir")) cfg.out_dir = get_field<std::string>(j, "out_dir", where);
  if (j.contains("write_transcripts")) {
    cfg.write_transcripts = get_field<bool>(j, "write_transcripts", where);
  }

  as_config_error([&] {
    p.validate();
    return 0;
  });
  if (cfg.secrets.explicit_bits.empty() && cfg.secrets.mode != "equal" &&
      cfg.secrets.mode != "one_bit_differs" && cfg.secrets.mode != "random") {
    throw ConfigError("unknown secrets mode \"" + cfg.secrets.mode + "\"");
  }
  return cfg;
}

ojson to_json(const RunConfigFile& cfg) {
  const auto& p = cfg.protocol;
  ojson j;
  j["family"] = to_string(p.family);
  j["n"] = p.n;
  j["l"] = p.l;
  j["delta"] = p.delta;
  j["theta_policy"] = theta_to_json(p.theta_policy);
  j["seed"] = p.seed;
  j["attack"] = attack_to_json(p.attack);
  j["tolerable_error_rate"] = p.tolerable_error_rate;
  j["trials"] = cfg.trials;
  if (cfg.secrets.explicit_bits.empty()) {
    j["secrets"] = cfg.secrets.mode;
  } else {
    j["secrets"] = cfg.secrets.explicit_bits;
  }
  j["out_dir"] = cfg.out_dir;
  j["write_transcripts"] = cfg.write_transcripts;
  return j;
}

std::string serialize_run_config(const RunConfigFile& cfg) { return to_json(cfg).dump(2) + "\n"; }

EfficiencyReport ideal_efficiency(int n, int l) {
  if (n < 1 || l < 1) throw std::invalid_argument("n and l must be >= 1");
  EfficiencyReport r;
  r.n = n;
  r.l = l;
  const std::uint64_t nl = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(l);
  r.compared_bits = nl;
  r.qubits_prepared_by_tp = 2 * 5 * nl;
  r.qubits_prepared_by_participants = 5 * nl;  // 5nl/2 pairs re-prepared
  const std::uint64_t total = r.qubits_prepared_by_tp + r.qubits_prepared_by_participants;
  const std::uint64_t g = std::gcd(r.compared_bits, total);
  r.xi_numerator = r.compared_bits / g;
  r.xi_denominator = total / g;
  return r;
}

void measure_efficiency(EfficiencyReport& report, std::size_t runs, RandomSource& rng) {
  if (runs == 0) throw std::invalid_argument("runs must be >= 1");
  ProtocolConfig cfg;
  cfg.n = std::max(report.n, 2);
  cfg.l = report.l;
  cfg.delta = 0.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  double tp_sum = 0.0;
  for (std::size_t run = 0; run < runs; ++run) {
    double participant_qubits = 0.0;
    for (int i = 0; i < report.n; ++i) {
      const auto seq = tp_prepare_sequence(cfg, rng);
      std::vector<StateVector> states;
      states.reserve(seq.size());
      for (const auto& p : seq) states.push_back(p.state);
      const auto out = participant_process(states, cfg.family, rng);
      participant_qubits += 2.0 * static_cast<double>(out.record.sift_bits.size());
      tp_sum += 2.0 * static_cast<double>(seq.size());
    }
    sum += participant_qubits;
    sum_sq += participant_qubits * participant_qubits;
  }
  const double k = static_cast<double>(runs);
  const double mean = sum / k;
  const double var = runs > 1 ? (sum_sq - k * mean * mean) / (k - 1.0) : 0.0;
  report.runs = runs;
  report.measured_participant_qubits_mean = mean;
  report.measured_participant_qubits_stderr = std::sqrt(std::max(var, 0.0) / k);
  report.measured_tp_qubits_mean = tp_sum / k;
  report.measured_xi = static_cast<double>(report.compared_bits) /
                       (report.measured_tp_qubits_mean + report.measured_participant_qubits_mean);
}

ojson to_json(const EfficiencyReport& r) {
  ojson j;
  j["schema_version"] = 1;
  j["n"] = r.n;
  j["l"] = r.l;
  j["ideal"] = {{"qubits_prepared_by_tp", r.qubits_prepared_by_tp},
                {"qubits_prepared_by_participants", r.qubits_prepared_by_participants},
                {"compared_bits", r.compared_bits},
                {"xi", std::to_string(r.xi_numerator) + "/" + std::to_string(r.xi_denominator)},
                {"xi_value", static_cast<double>(r.xi_numerator) / static_cast<double>(r.xi_denominator)}};
  if (r.runs > 0) {
    j["measured"] = {{"runs", r.runs},
                     {"qubits_prepared_by_tp_mean", r.measured_tp_qubits_mean},
                     {"qubits_prepared_by_participants_mean", r.measured_participant_qubits_mean},
                     {"qubits_prepared_by_participants_stderr", r.measured_participant_qubits_stderr},
                     {"xi", r.measured_xi}};
  }
  return j;
}

}  // namespace dfq
