#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dfq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

inline constexpr std::uint64_t kDefaultSeed = 1;

// --seed, then the config file's seed, then $DFQ_SEED, then kDefaultSeed.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag,
                           std::optional<std::uint64_t> from_config = std::nullopt);

struct RunOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> family;
  std::optional<int> n;
  std::optional<int> l;
  std::optional<double> delta;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

// Writes run_config.json, run_report.json and (optionally) transcripts.jsonl.
int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);

struct SweepOptions {
  // none | intercept-resend | measure-resend | entangle-identity | entangle-cnot
  std::string model = "intercept-resend";
  std::string family = "dephasing";
  std::string fake = "zero";  // intercept-resend fake value
  std::string basis = "z";    // measure-resend basis
  std::vector<int> m_values{1, 5, 10};
  std::size_t trials = 100000;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "dfq-out";
};

// Writes attack_sweep.csv and attack_sweep.json.
int cmd_attack_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);

struct ReproOptions {
  std::size_t shots = 10000;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "dfq-out";
};

// Writes fig1.csv .. fig6.csv and repro_summary.txt.
int cmd_repro_figures(const ReproOptions& opts, std::ostream& out, std::ostream& err);

struct EfficiencyOptions {
  int n = 3;
  int l = 8;
  std::size_t runs = 1000;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "dfq-out";
};

// Writes efficiency.json.
int cmd_efficiency(const EfficiencyOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace dfq::cli
