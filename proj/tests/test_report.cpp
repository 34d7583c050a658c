#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dfq/adversary.hpp"
#include "dfq/commands.hpp"
#include "dfq/report.hpp"

using namespace dfq;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dfq-test-report-" + name);
  fs::remove_all(dir);
  return dir;
}

int hamming(const Bits& a, const Bits& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

}  // namespace

TEST_CASE("canonical config round-trips byte for byte") {
  const std::string text = slurp(fs::path(DFQ_TEST_DATA_DIR) / "canonical_config.json");
  REQUIRE_FALSE(text.empty());
  const RunConfigFile cfg = parse_run_config(text);
  CHECK(cfg.protocol.family == EncodingFamily::Rotation);
  CHECK(cfg.protocol.n == 4);
  CHECK(cfg.protocol.l == 6);
  CHECK(cfg.protocol.theta_policy.kind == ThetaPolicy::Kind::Fixed);
  CHECK(cfg.seed_given);
  CHECK(cfg.protocol.seed == 20261018u);
  CHECK(cfg.trials == 25);
  CHECK(cfg.secrets.explicit_bits.size() == 4);
  CHECK(serialize_run_config(cfg) == text);
  CHECK(serialize_run_config(parse_run_config(serialize_run_config(cfg))) == text);
}

TEST_CASE("empty config gives the documented defaults") {
  const RunConfigFile cfg = parse_run_config("{}");
  CHECK(cfg.protocol.family == EncodingFamily::Dephasing);
  CHECK(cfg.protocol.n == 3);
  CHECK(cfg.protocol.l == 8);
  CHECK(cfg.protocol.delta == 1.0);
  CHECK(cfg.protocol.theta_policy.kind == ThetaPolicy::Kind::Random);
  CHECK_FALSE(cfg.seed_given);
  CHECK(std::holds_alternative<NoAttack>(cfg.protocol.attack));
  CHECK(cfg.trials == 100);
  CHECK(cfg.secrets.mode == "equal");
  CHECK(cfg.out_dir == "dfq-out");
  CHECK_FALSE(cfg.write_transcripts);
}

TEST_CASE("malformed configs are rejected") {
  for (const char* bad : {
           R"({"famly": "rotation"})",
           R"({"theta_policy": {"kind": "random", "value": 1.0}})",
           R"({"theta_policy": {"kind": "fixed"}})",
           R"({"theta_policy": {"kind": "sometimes"}})",
           R"({"attack": {"kind": "none", "strength": 2}})",
           R"({"attack": {"kind": "teleport"}})",
           R"({"attack": {"kind": "intercept_resend", "fake_value": "half", "fake_family": "rotation"}})",
           R"({"attack": {"kind": "measure_resend", "measure_basis": {"family": "rotation"}}})",
           R"({"attack": {"kind": "entangle", "params": "mystery"}})",
           R"({"attack": {"kind": "entangle", "params": "custom", "unitary": [[1, 0]]}})",
           R"({"family": "bitflip"})",
           R"({"n": 3.5})",
           R"({"n": 1})",
           R"({"l": "8"})",
           R"({"delta": -1})",
           R"({"seed": -4})",
           R"({"trials": 0})",
           R"({"secrets": "sometimes"})",
           R"({"secrets": 7})",
           R"({"write_transcripts": "yes"})",
           R"({"tolerable_error_rate": 1.5})",
           R"([1, 2])",
           R"({"n": )",
       }) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_run_config(bad), ConfigError);
  }
}

TEST_CASE("attack json round trip") {
  RandomSource rng(71);
  const AttackModel models[] = {
      NoAttack{},
      InterceptResend{LogicalValue::Plus, EncodingFamily::Rotation},
      MeasureResend{{EncodingFamily::Dephasing, BasisKind::X}},
      Entangle{EntangleParams::identity()},
      Entangle{EntangleParams::cnot_copy()},
      Entangle{random_entangle_params(0, EncodingFamily::Dephasing, rng)},
  };
  for (const auto& m : models) {
    const auto j = attack_to_json(m);
    const AttackModel back = attack_from_json(nlohmann::json::parse(j.dump()));
    CHECK(describe(back) == describe(m));
    CHECK(attack_to_json(back).dump() == j.dump());
  }
}

TEST_CASE("secret generation modes") {
  RandomSource rng(72);
  SecretsSpec spec;
  for (int i = 0; i < 50; ++i) {
    spec.mode = "equal";
    auto s = spec.draw(4, 6, rng);
    REQUIRE(s.size() == 4);
    for (const auto& x : s) CHECK(x.bits == s.front().bits);

    spec.mode = "one_bit_differs";
    s = spec.draw(4, 6, rng);
    int total = 0;
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t b = a + 1; b < s.size(); ++b) total += hamming(s[a].bits, s[b].bits);
    }
    CHECK(total == 3);  // the odd one out differs by one bit from each of the other three
  }
  spec.mode = "random";
  CHECK(spec.draw(3, 5, rng).front().bits.size() == 5);

  SecretsSpec list;
  list.mode = "explicit";
  list.explicit_bits = {"01", "10"};
  CHECK(list.draw(2, 2, rng)[1].bits == Bits{1, 0});
  CHECK_THROWS_AS(list.draw(3, 2, rng), ConfigError);
  CHECK_THROWS_AS(list.draw(2, 3, rng), ConfigError);
}

TEST_CASE("ideal efficiency is one fifteenth for every size") {
  for (int n : {2, 3, 5, 10}) {
    for (int l : {1, 4, 8, 33}) {
      const EfficiencyReport r = ideal_efficiency(n, l);
      const std::uint64_t nl = static_cast<std::uint64_t>(n) * l;
      CHECK(r.qubits_prepared_by_tp == 10 * nl);
      CHECK(r.qubits_prepared_by_participants == 5 * nl);
      CHECK(r.compared_bits == nl);
      CHECK(r.xi_numerator == 1);
      CHECK(r.xi_denominator == 15);
      CHECK(std::gcd(r.xi_numerator, r.xi_denominator) == 1);
    }
  }
  CHECK(to_json(ideal_efficiency(3, 8))["ideal"]["xi"] == "1/15");
  CHECK_THROWS_AS(ideal_efficiency(0, 8), std::invalid_argument);
}

TEST_CASE("measured participant qubits average 5nl") {
  RandomSource rng(73);
  const int n = 3, l = 8;
  const std::size_t runs = 2000;
  EfficiencyReport r = ideal_efficiency(n, l);
  measure_efficiency(r, runs, rng);
  // 2 qubits per SIFT; SIFT count is Bin(5nl, 1/2), so the variance is 5nl.
  const double sigma = std::sqrt(5.0 * n * l / runs);
  CHECK(std::abs(r.measured_participant_qubits_mean - 5.0 * n * l) <= 4 * sigma);
  CHECK(r.measured_participant_qubits_stderr == doctest::Approx(sigma).epsilon(0.1));
  CHECK(r.measured_tp_qubits_mean == 10.0 * n * l);
  CHECK(r.measured_xi == doctest::Approx(1.0 / 15.0).epsilon(0.01));
  CHECK(to_json(r)["measured"]["runs"] == runs);
}

TEST_CASE("seed precedence") {
  ::setenv("DFQ_SEED", "77", 1);
  CHECK(cli::resolve_seed(5, 9) == 5);
  CHECK(cli::resolve_seed(std::nullopt, 9) == 9);
  CHECK(cli::resolve_seed(std::nullopt) == 77);
  ::setenv("DFQ_SEED", "seven", 1);
  CHECK_THROWS_AS(cli::resolve_seed(std::nullopt), ConfigError);
  ::unsetenv("DFQ_SEED");
  CHECK(cli::resolve_seed(std::nullopt) == cli::kDefaultSeed);
}

TEST_CASE("command exit codes") {
  std::ostringstream out, err;
  const fs::path dir = scratch("codes");

  cli::RunOptions run;
  run.config_path = (dir / "missing.json").string();
  CHECK(cli::cmd_run(run, out, err) == cli::kExitIo);

  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << R"({"n": 3, "colour": "blue"})";
  run.config_path = (dir / "bad.json").string();
  CHECK(cli::cmd_run(run, out, err) == cli::kExitConfig);

  cli::RunOptions flags;
  flags.family = "bitflip";
  CHECK(cli::cmd_run(flags, out, err) == cli::kExitConfig);
  flags.family.reset();
  flags.n = 1;
  CHECK(cli::cmd_run(flags, out, err) == cli::kExitConfig);

  // an output directory below a regular file cannot be created
  std::ofstream(dir / "plain") << "x";
  cli::EfficiencyOptions eff;
  eff.runs = 1;
  eff.out_dir = (dir / "plain" / "sub").string();
  CHECK(cli::cmd_efficiency(eff, out, err) == cli::kExitIo);
  eff.n = 0;
  CHECK(cli::cmd_efficiency(eff, out, err) == cli::kExitConfig);

  cli::SweepOptions sweep;
  sweep.model = "telepathy";
  CHECK(cli::cmd_attack_sweep(sweep, out, err) == cli::kExitConfig);
  sweep.model = "intercept-resend";
  sweep.fake = "sideways";
  CHECK(cli::cmd_attack_sweep(sweep, out, err) == cli::kExitConfig);

  cli::ReproOptions repro;
  repro.shots = 0;
  CHECK(cli::cmd_repro_figures(repro, out, err) == cli::kExitConfig);
  CHECK(err.str().find("config error") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("run command writes its artifacts") {
  const fs::path dir = scratch("run");
  std::ostringstream out, err;
  cli::RunOptions run;
  run.config_path = (fs::path(DFQ_TEST_DATA_DIR) / "canonical_config.json").string();
  run.trials = 3;
  run.out_dir = dir.string();
  REQUIRE(cli::cmd_run(run, out, err) == cli::kExitOk);
  CHECK(fs::exists(dir / "run_config.json"));
  CHECK(fs::exists(dir / "transcripts.jsonl"));
  const auto report = nlohmann::json::parse(slurp(dir / "run_report.json"));
  CHECK(report["trials"] == 3);
  CHECK(report["efficiency"]["expected_counts"]["ideal"]["xi"] == "1/15");
  const auto written = parse_run_config(slurp(dir / "run_config.json"));
  CHECK(written.trials == 3);
  CHECK(written.protocol.seed == 20261018u);
  fs::remove_all(dir);
}

TEST_CASE("commands are deterministic for a fixed seed") {
  auto sweep_once = [](const fs::path& dir) {
    std::ostringstream out, err;
    cli::SweepOptions o;
    o.trials = 2000;
    o.m_values = {1, 4};
    o.seed = 5;
    o.out_dir = dir.string();
    REQUIRE(cli::cmd_attack_sweep(o, out, err) == cli::kExitOk);
    return slurp(dir / "attack_sweep.csv") + slurp(dir / "attack_sweep.json");
  };
  const fs::path a = scratch("det-a"), b = scratch("det-b");
  CHECK(sweep_once(a) == sweep_once(b));
  fs::remove_all(a);
  fs::remove_all(b);
}
