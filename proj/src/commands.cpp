#include "dfq/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "dfq/adversary.hpp"
#include "dfq/circuit_repro.hpp"
#include "dfq/protocol.hpp"
#include "dfq/report.hpp"

namespace dfq::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("write failed: " + path.string());
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
}

AttackModel sweep_model(const SweepOptions& o, EncodingFamily family) {
  if (o.model == "none") return NoAttack{};
  if (o.model == "intercept-resend") return InterceptResend{parse_value(o.fake), family};
  if (o.model == "measure-resend") return MeasureResend{{family, parse_basis_kind(o.basis)}};
  if (o.model == "entangle-identity") return Entangle{EntangleParams::identity()};
  if (o.model == "entangle-cnot") return Entangle{EntangleParams::cnot_copy()};
  throw ConfigError("unknown attack model \"" + o.model + "\"");
}

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag,
                           std::optional<std::uint64_t> from_config) {
  if (flag) return *flag;
  if (from_config) return *from_config;
  if (const char* env = std::getenv("DFQ_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw ConfigError("DFQ_SEED must be an unsigned integer");
  }
  return kDefaultSeed;
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfigFile cfg;
    if (opts.config_path) cfg = parse_run_config(read_file(*opts.config_path));
    auto& p = cfg.protocol;
    if (opts.family) p.family = parse_family(*opts.family);
    if (opts.n) p.n = *opts.n;
    if (opts.l) p.l = *opts.l;
    if (opts.delta) p.delta = *opts.delta;
    if (opts.trials) {
      if (*opts.trials < 1) throw ConfigError("trials must be >= 1");
      cfg.trials = *opts.trials;
    }
    if (opts.out_dir) cfg.out_dir = *opts.out_dir;
    p.seed = resolve_seed(opts.seed, cfg.seed_given ? std::optional(p.seed) : std::nullopt);
    p.validate();

    RandomSource rng(p.seed);
    std::map<Verdict, std::size_t> tally;
    std::size_t correct = 0;
    double case1_max = 0.0;
    double case1_sum = 0.0;
    std::size_t sessions = 0;
    double tp_qubits = 0.0;
    double participant_qubits = 0.0;
    std::size_t compared_bits = 0;
    std::string transcripts;

    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const auto secrets = cfg.secrets.draw(p.n, p.l, rng);
      bool equal = true;
      for (const auto& s : secrets) equal = equal && s.bits == secrets.front().bits;
      const RunOutcome run = run_protocol(p, secrets, rng);

      const Verdict v = run.result.verdict;
      ++tally[v];
      if (v == (equal ? Verdict::AllEqual : Verdict::NotAllEqual)) ++correct;
      for (const auto& s : run.sessions) {
        case1_max = std::max(case1_max, s.case1_error_rate);
        case1_sum += s.case1_error_rate;
        ++sessions;
        tp_qubits += 2.0 * static_cast<double>(s.pairs_prepared);
        participant_qubits += 2.0 * static_cast<double>(s.sift_count);
      }
      if (!is_abort(v)) compared_bits += static_cast<std::size_t>(p.n) * p.l;
      if (cfg.write_transcripts) {
        transcripts += ojson{{"event", "trial"}, {"trial", t}}.dump() + "\n";
        transcripts += run.transcript.to_jsonl();
      }
    }

    EfficiencyReport eff = ideal_efficiency(p.n, p.l);
    ojson report;
    report["schema_version"] = 1;
    report["command"] = "run";
    report["config"] = to_json(cfg);
    report["trials"] = cfg.trials;
    ojson counts;
    for (Verdict v : {Verdict::AllEqual, Verdict::NotAllEqual, Verdict::AbortedInsecureChannel,
                      Verdict::AbortedInsufficientParticles, Verdict::AbortedDishonestTP}) {
      counts[std::string(to_string(v))] = tally[v];
    }
    report["verdicts"] = counts;
    report["correct_verdicts"] = correct;
    report["case1_error_rate"] = {{"max", case1_max},
                                  {"mean", sessions ? case1_sum / sessions : 0.0}};
    const double total_qubits = tp_qubits + participant_qubits;
    report["efficiency"] = {
        {"expected_counts", to_json(eff)},
        {"realized",
         {{"qubits_prepared_by_tp", tp_qubits},
          {"qubits_prepared_by_participants", participant_qubits},
          {"compared_bits", compared_bits},
          {"xi", total_qubits > 0 ? compared_bits / total_qubits : 0.0}}}};

    ensure_dir(cfg.out_dir);
    const fs::path dir(cfg.out_dir);
    write_file(dir / "run_config.json", serialize_run_config(cfg));
    write_file(dir / "run_report.json", report.dump(2) + "\n");
    if (cfg.write_transcripts) write_file(dir / "transcripts.jsonl", transcripts);

    out << "trials: " << cfg.trials << "\n";
    for (const auto& [name, count] : counts.items()) out << name << ": " << count << "\n";
    out << "correct: " << correct << "/" << cfg.trials << "\n";
    out << "xi (expected counts): " << eff.xi_numerator << "/" << eff.xi_denominator << "\n";
    return kExitOk;
  });
}

int cmd_attack_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ProtocolConfig cfg;
    cfg.family = parse_family(opts.family);
    const AttackModel model = sweep_model(opts, cfg.family);
    if (opts.trials < 1) throw ConfigError("trials must be >= 1");
    if (opts.m_values.empty()) throw ConfigError("need at least one m value");
    for (int m : opts.m_values) {
      if (m < 0) throw ConfigError("m must be >= 0");
    }
    RandomSource rng(resolve_seed(opts.seed));

    std::string csv = csv_header() + "\n";
    ojson rows = ojson::array();
    for (int m : opts.m_values) {
      const DetectionReport r = monte_carlo_detection(cfg, model, m, opts.trials, rng);
      csv += csv_row(r) + "\n";
      rows.push_back(to_json(r));
    }
    ensure_dir(opts.out_dir);
    const fs::path dir(opts.out_dir);
    write_file(dir / "attack_sweep.csv", csv);
    write_file(dir / "attack_sweep.json",
               ojson{{"schema_version", 1}, {"command", "attack-sweep"}, {"reports", rows}}.dump(2) +
                   "\n");
    out << csv;
    return kExitOk;
  });
}

int cmd_repro_figures(const ReproOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.shots < 1) throw ConfigError("shots must be >= 1");
    RandomSource rng(resolve_seed(opts.seed));
    ensure_dir(opts.out_dir);
    const fs::path dir(opts.out_dir);

    std::string summary =
        "# noise angle pi/5; |-_r> = (phi+ - psi-)/sqrt2 = (|00> - |01> + |10> + |11>)/2\n";
    for (const auto& s : FigureScenario::all(opts.shots)) {
      const Histogram h = run_scenario(s, rng);
      const CheckStatus status = check_histogram(h, expected_distribution(s));
      write_file(dir / (s.name() + ".csv"), histogram_csv(h));
      summary += s.name() + " " + std::string(to_string(status)) + " family=" +
                 std::string(to_string(s.family)) + " channel=" + (s.fake ? "insecure" : "secure") +
                 " operation=" + (s.operation == Operation::Ctrl ? "ctrl" : "sift") +
                 " shots=" + std::to_string(h.shots) + "\n";
    }
    write_file(dir / "repro_summary.txt", summary);
    out << summary;
    return kExitOk;
  });
}

int cmd_efficiency(const EfficiencyOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.n < 1 || opts.l < 1) throw ConfigError("n and l must be >= 1");
    RandomSource rng(resolve_seed(opts.seed));
    EfficiencyReport r = ideal_efficiency(opts.n, opts.l);
    if (opts.runs > 0) measure_efficiency(r, opts.runs, rng);
    ensure_dir(opts.out_dir);
    const std::string text = to_json(r).dump(2) + "\n";
    write_file(fs::path(opts.out_dir) / "efficiency.json", text);
    out << text;
    return kExitOk;
  });
}

}  // namespace dfq::cli
