#include "dfq/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace dfq {

namespace {

// 4 l (1 + delta) is often a float a hair above an integer (e.g. 44.000000001).
std::size_t ceil_count(double x) { return static_cast<std::size_t>(std::ceil(x - 1e-9)); }

std::string symbols(const std::vector<Descriptor>& ds) {
  std::string s;
  s.reserve(ds.size());
  for (const auto& d : ds) s += symbol(d.value);
  return s;
}

std::string op_string(std::span<const Operation> ops) {
  std::string s;
  s.reserve(ops.size());
  for (auto op : ops) s += (op == Operation::Ctrl) ? 'C' : 'S';
  return s;
}

}  // namespace

double ThetaPolicy::draw(RandomSource& rng) const {
  return kind == Kind::Fixed ? value : 2.0 * std::numbers::pi * rng.uniform();
}

std::size_t ProtocolConfig::z_count() const { return ceil_count(4.0 * l * (1.0 + delta)); }
std::size_t ProtocolConfig::x_count() const { return ceil_count(l * (1.0 + delta)); }

void ProtocolConfig::validate() const {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (l < 1) throw std::invalid_argument("l must be at least 1");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be >= 0");
  if (!(tolerable_error_rate >= 0.0 && tolerable_error_rate < 1.0)) {
    throw std::invalid_argument("tolerable_error_rate must be in [0, 1)");
  }
  if (theta_policy.kind == ThetaPolicy::Kind::Fixed && !std::isfinite(theta_policy.value)) {
    throw std::invalid_argument("fixed theta must be finite");
  }
}

SharedKey draw_shared_key(int l, RandomSource& rng) {
  SharedKey key;
  key.bits.resize(static_cast<std::size_t>(l));
  for (auto& b : key.bits) b = rng.coin() ? 1 : 0;
  return key;
}

std::string to_bitstring(const Bits& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s += b ? '1' : '0';
  return s;
}

Bits parse_bits(std::string_view s) {
  Bits bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string must contain only 0 and 1");
    bits.push_back(c == '1' ? 1 : 0);
  }
  return bits;
}

std::vector<LogicalParticle> tp_prepare_sequence(const ProtocolConfig& config, RandomSource& rng) {
  std::vector<Descriptor> ds;
  ds.reserve(config.z_count() + config.x_count());
  for (std::size_t i = 0; i < config.z_count(); ++i) {
    ds.push_back({{config.family, BasisKind::Z}, z_value(rng.coin()), 0});
  }
  for (std::size_t i = 0; i < config.x_count(); ++i) {
    ds.push_back({{config.family, BasisKind::X}, x_value(rng.coin()), 0});
  }
  rng.shuffle(ds);

  std::vector<LogicalParticle> seq;
  seq.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    ds[i].original_index = i;
    seq.push_back({prepare(config.family, ds[i].value), ds[i]});
  }
  return seq;
}

const SiftEntry* ParticipantRecord::find_sift(std::size_t index) const {
  auto it = std::lower_bound(sift_bits.begin(), sift_bits.end(), index,
                             [](const SiftEntry& e, std::size_t i) { return e.index < i; });
  return (it != sift_bits.end() && it->index == index) ? &*it : nullptr;
}

ParticipantOutput participant_process(std::span<const StateVector> particles_in,
                                      EncodingFamily family, RandomSource& rng,
                                      const ParticipantOptions& options) {
  ParticipantRecord record;
  std::vector<StateVector> processed;
  processed.reserve(particles_in.size());
  record.operations.reserve(particles_in.size());

  for (std::size_t i = 0; i < particles_in.size(); ++i) {
    const Operation op = options.forced_operation.value_or(rng.coin() ? Operation::Sift
                                                                      : Operation::Ctrl);
    record.operations.push_back(op);
    if (op == Operation::Ctrl) {
      processed.push_back(particles_in[i]);
    } else {
      SiftResult sift = sift_measure_and_resend(particles_in[i], family, rng);
      record.sift_bits.push_back({i, sift.bit, sift.raw});
      processed.push_back(std::move(sift.fresh));
    }
  }

  record.permutation.resize(processed.size());
  std::iota(record.permutation.begin(), record.permutation.end(), std::size_t{0});
  rng.shuffle(record.permutation);

  ParticipantOutput out;
  out.particles_out.reserve(processed.size());
  for (std::size_t k = 0; k < processed.size(); ++k) {
    out.particles_out.push_back(processed[record.permutation[k]]);
  }
  out.record = std::move(record);
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::AllEqual: return "AllEqual";
    case Verdict::NotAllEqual: return "NotAllEqual";
    case Verdict::AbortedInsecureChannel: return "AbortedInsecureChannel";
    case Verdict::AbortedInsufficientParticles: return "AbortedInsufficientParticles";
    case Verdict::AbortedDishonestTP: return "AbortedDishonestTP";
  }
  return "?";
}

bool is_abort(Verdict v) { return v != Verdict::AllEqual && v != Verdict::NotAllEqual; }

CaseOutcome tp_classify_and_check(std::span<const StateVector> returned,
                                  std::span<const std::size_t> permutation,
                                  std::span<const Operation> operations,
                                  std::span<const Descriptor> descriptors,
                                  const ProtocolConfig& config, RandomSource& rng) {
  const std::size_t count = descriptors.size();
  if (returned.size() != count || permutation.size() != count || operations.size() != count) {
    throw std::invalid_argument("announcement sizes do not match the prepared sequence");
  }
  std::vector<std::size_t> position_of(count, count);
  for (std::size_t k = 0; k < count; ++k) {
    if (permutation[k] >= count || position_of[permutation[k]] != count) {
      throw std::invalid_argument("malformed permutation");
    }
    position_of[permutation[k]] = k;
  }

  CaseOutcome out;
  for (std::size_t o = 0; o < count; ++o) {
    const Descriptor& d = descriptors[o];
    if (operations[o] == Operation::Ctrl) {
      const LogicalOutcome seen = measure_logical(returned[position_of[o]], d.basis, rng);
      const bool error = seen.value != d.value;
      ++out.ctrl_count;
      if (error) ++out.case1_errors;
      out.measurements.push_back({o, seen.raw, error});
    } else if (d.basis.kind == BasisKind::Z) {
      out.case2.push_back(o);
    } else {
      ++out.case3_dropped;
    }
  }
  out.case1_error_rate =
      out.ctrl_count ? static_cast<double>(out.case1_errors) / out.ctrl_count : 0.0;

  if (out.case1_error_rate > config.tolerable_error_rate) {
    out.abort = Verdict::AbortedInsecureChannel;
  } else if (out.case2.size() < 2 * static_cast<std::size_t>(config.l)) {
    out.abort = Verdict::AbortedInsufficientParticles;
  }
  return out;
}

VerificationOutcome participant_verify_tp(std::span<const std::size_t> case2,
                                          const ParticipantRecord& record,
                                          const RevealFn& reveal, EncodingFamily family,
                                          int l, RandomSource& rng) {
  const std::size_t wanted = family == EncodingFamily::Dephasing
                                 ? static_cast<std::size_t>(l)
                                 : case2.size() / 2;
  if (case2.empty() || wanted == 0 || case2.size() < wanted) {
    throw std::invalid_argument("fewer Case-2 pairs than required test pairs");
  }

  std::vector<std::size_t> pool(case2.begin(), case2.end());
  rng.shuffle(pool);
  VerificationOutcome out;
  out.tests.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(wanted));
  out.remaining.assign(pool.begin() + static_cast<std::ptrdiff_t>(wanted), pool.end());
  std::sort(out.tests.begin(), out.tests.end());
  std::sort(out.remaining.begin(), out.remaining.end());

  for (std::size_t idx : out.tests) {
    const LogicalValue told = reveal(idx);
    out.revealed.push_back(told);
    const SiftEntry* entry = record.find_sift(idx);
    const bool ok = entry && entry->bit && basis_of(told) == BasisKind::Z &&
                    *entry->bit == bit_of(told);
    if (!ok) ++out.mismatches;
  }
  out.error_rate = static_cast<double>(out.mismatches) / out.tests.size();
  if (out.mismatches > 0) out.abort = Verdict::AbortedDishonestTP;
  return out;
}

Bits encode_announcement(const Bits& secret, const Bits& key, const Bits& m) {
  if (secret.size() != key.size() || secret.size() != m.size()) {
    throw std::invalid_argument("secret, key and message lengths differ");
  }
  Bits r(secret.size());
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = (secret[j] ^ key[j] ^ m[j]) & 1;
  return r;
}

ComparisonResult tp_compare(const std::vector<Bits>& r, const std::vector<Bits>& m) {
  if (r.size() != m.size() || r.empty()) {
    throw std::invalid_argument("announcement matrices must have the same non-zero row count");
  }
  const std::size_t l = r.front().size();
  ComparisonResult out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i].size() != l || m[i].size() != l) {
      throw std::invalid_argument("announcement rows must all have length l");
    }
    Bits u(l);
    for (std::size_t j = 0; j < l; ++j) u[j] = (m[i][j] ^ r[i][j]) & 1;
    out.u.push_back(std::move(u));
  }
  out.c.assign(l, 0);
  for (std::size_t i = 0; i + 1 < out.u.size(); ++i) {
    for (std::size_t j = 0; j < l; ++j) out.c[j] += out.u[i][j] ^ out.u[i + 1][j];
  }
  const bool all_zero = std::all_of(out.c.begin(), out.c.end(), [](int c) { return c == 0; });
  out.verdict = all_zero ? Verdict::AllEqual : Verdict::NotAllEqual;
  return out;
}

RunOutcome run_protocol(const ProtocolConfig& config, std::span<const Secret> secrets,
                        RandomSource& rng, const RunHooks& hooks) {
  config.validate();
  if (secrets.size() != static_cast<std::size_t>(config.n)) {
    throw std::invalid_argument("expected one secret per participant");
  }
  for (const auto& s : secrets) {
    if (s.bits.size() != static_cast<std::size_t>(config.l)) {
      throw std::invalid_argument("secret length differs from l");
    }
  }

  RunOutcome run;
  auto& log = run.transcript;
  log.append({{"event", "config"},
              {"family", to_string(config.family)},
              {"n", config.n},
              {"l", config.l},
              {"delta", config.delta},
              {"attack", describe(config.attack)},
              {"tolerable_error_rate", config.tolerable_error_rate}});

  const SharedKey key = hooks.key ? *hooks.key : draw_shared_key(config.l, rng);
  if (key.bits.size() != static_cast<std::size_t>(config.l)) {
    throw std::invalid_argument("shared key length differs from l");
  }
  log.append({{"event", "key_distributed"}, {"holders", config.n}, {"length", config.l}});

  auto abort_with = [&](Verdict v, int participant) {
    log.append({{"event", "abort"}, {"participant", participant}, {"verdict", to_string(v)}});
    run.result = ComparisonResult{{}, {}, v};
    return run;
  };

  std::vector<Bits> r_all;
  std::vector<Bits> m_tp;
  for (int i = 0; i < config.n; ++i) {
    const int who = i + 1;
    SessionStats stats;

    // Step 1: preparation and TP -> P_i transmission.
    const auto seq = tp_prepare_sequence(config, rng);
    std::vector<Descriptor> descriptors;
    std::vector<StateVector> outbound;
    descriptors.reserve(seq.size());
    outbound.reserve(seq.size());
    for (const auto& p : seq) {
      descriptors.push_back(p.descriptor);
      const StateVector noisy =
          apply_collective_noise(p.state, config.family, config.theta_policy.draw(rng));
      outbound.push_back(apply_attack(config.attack, noisy, rng).to_participant);
    }
    stats.pairs_prepared = seq.size();
    log.append({{"event", "tp_prepare"},
                {"participant", who},
                {"z_count", config.z_count()},
                {"x_count", config.x_count()},
                {"initial_states", symbols(descriptors)}});

    // Step 2: CTRL / SIFT, reorder, send back through the noisy channel.
    ParticipantOutput back = participant_process(outbound, config.family, rng);
    for (auto& s : back.particles_out) {
      s = apply_collective_noise(s, config.family, config.theta_policy.draw(rng));
    }
    stats.sift_count = back.record.sift_bits.size();

    // Step 3: announcements, then the Case 1/2/3 actions.
    std::vector<std::size_t> z_positions;
    for (const auto& d : descriptors) {
      if (d.basis.kind == BasisKind::Z) z_positions.push_back(d.original_index);
    }
    log.append({{"event", "tp_announce_z_positions"}, {"participant", who},
                {"positions", z_positions}});
    log.append({{"event", "participant_announce"},
                {"participant", who},
                {"permutation", back.record.permutation},
                {"operations", op_string(back.record.operations)}});

    const CaseOutcome cases =
        tp_classify_and_check(back.particles_out, back.record.permutation,
                              back.record.operations, descriptors, config, rng);
    nlohmann::ordered_json raw = nlohmann::ordered_json::array();
    for (const auto& m : cases.measurements) raw.push_back({m.index, m.raw});
    log.append({{"event", "tp_case_check"},
                {"participant", who},
                {"ctrl_count", cases.ctrl_count},
                {"case1_errors", cases.case1_errors},
                {"case1_error_rate", cases.case1_error_rate},
                {"case2_count", cases.case2.size()},
                {"case2_required", 2 * config.l},
                {"case3_dropped", cases.case3_dropped},
                {"case1_raw", raw}});
    stats.ctrl_count = cases.ctrl_count;
    stats.case1_errors = cases.case1_errors;
    stats.case1_error_rate = cases.case1_error_rate;
    stats.case2_count = cases.case2.size();
    run.sessions.push_back(stats);
    if (cases.abort) return abort_with(*cases.abort, who);

    // Step 4: participant audits TP on a subset of Case-2 pairs.
    bool lie_pending = hooks.dishonest_tp;
    RevealFn reveal = [&](std::size_t idx) {
      LogicalValue v = descriptors[idx].value;
      if (lie_pending) {
        lie_pending = false;
        v = (v == LogicalValue::Zero) ? LogicalValue::One : LogicalValue::Zero;
      }
      return v;
    };
    const VerificationOutcome audit =
        participant_verify_tp(cases.case2, back.record, reveal, config.family, config.l, rng);
    std::string told;
    for (auto v : audit.revealed) told += symbol(v);
    log.append({{"event", "participant_verify"},
                {"participant", who},
                {"test_positions", audit.tests},
                {"revealed", told},
                {"mismatches", audit.mismatches},
                {"error_rate", audit.error_rate}});
    run.sessions.back().step4_error_rate = audit.error_rate;
    if (audit.abort) return abort_with(*audit.abort, who);

    // Step 5: l message pairs from what is left; announce r.
    std::vector<std::size_t> pool = audit.remaining;
    rng.shuffle(pool);
    pool.resize(static_cast<std::size_t>(config.l));
    Bits m(pool.size());
    Bits tp_m(pool.size());
    for (std::size_t j = 0; j < pool.size(); ++j) {
      const SiftEntry* e = back.record.find_sift(pool[j]);
      m[j] = (e && e->bit) ? static_cast<std::uint8_t>(*e->bit) : 0;
      tp_m[j] = static_cast<std::uint8_t>(bit_of(descriptors[pool[j]].value));
    }
    const Bits r = encode_announcement(secrets[static_cast<std::size_t>(i)].bits, key.bits, m);
    log.append({{"event", "participant_announce_r"},
                {"participant", who},
                {"message_positions", pool},
                {"r", to_bitstring(r)}});
    r_all.push_back(r);
    m_tp.push_back(tp_m);
  }

  // Step 6.
  run.result = tp_compare(r_all, m_tp);
  std::vector<std::string> u;
  for (const auto& row : run.result.u) u.push_back(to_bitstring(row));
  log.append({{"event", "tp_compare"},
              {"u", u},
              {"c", run.result.c},
              {"verdict", to_string(run.result.verdict)}});
  return run;
}

}  // namespace dfq
