#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gcmg/game.hpp"
#include "gcmg/rng.hpp"

namespace gcmg {

/// Stream tags for deriving independent rng substreams from a replica seed.
inline constexpr std::uint64_t kSourceStream = 0x736f7572;  // source series
inline constexpr std::uint64_t kGameStream = 0x67616d65;    // game instance
inline constexpr std::uint64_t kOracleStream = 0x6f72616b;  // oracle tie coin
inline constexpr std::uint64_t kWienerStream = 0x7769656e;  // wiener tie coin

inline std::uint64_t replica_seed(std::uint64_t base, int replica) {
  return base + static_cast<std::uint64_t>(replica);
}
inline std::uint64_t source_seed(std::uint64_t replica_seed) {
  return mix_seed(replica_seed, kSourceStream);
}
/// Grid points sharing a pair_group share game seeds, so e.g. the minority
/// and majority runs at one N hold identical strategy draws.
inline std::uint64_t game_seed(std::uint64_t replica_seed, int pair_group) {
  return mix_seed(replica_seed, kGameStream + static_cast<std::uint64_t>(pair_group));
}

/// What drives the predictor: a parametric AR process, a regime-switching
/// pair, a price CSV, or a fixed series (tests).
struct SourceSpec {
  enum class Kind { ar, regime_switch, csv_returns, fixed };
  Kind kind = Kind::ar;
  std::vector<double> coeffs{0.7, -0.5, -0.2};
  std::vector<double> coeffs2{-0.3, -0.2, 0.6};
  double noise_sd = 1.0;
  int switch_at = 1500;  // series index where the second regime takes over
  int burn_in = 0;
  std::string csv_path;
  std::string csv_column = "price";
  char csv_delimiter = ',';
  std::vector<double> fixed_series;

  /// Materialize `length` samples (csv/fixed kinds return their full data
  /// and ignore the seed — they are deterministic).
  std::vector<double> realize(std::size_t length, std::uint64_t seed) const;
  bool stochastic() const { return kind == Kind::ar || kind == Kind::regime_switch; }
  std::string describe() const;
};

struct GridPoint {
  std::string id;
  GameConfig game;
  int pair_group = 0;
};

struct ExperimentSpec {
  std::string name;
  SourceSpec source;
  std::vector<GridPoint> grid;
  int horizon = 3000;
  int replicas = 10;
  std::uint64_t base_seed = 1;
  int jobs = 0;  // worker threads; 0 = auto. Results are schedule-independent.
  int window = 100;
  bool windowed_trace = false;  // write per-point sliding-window psi traces
  bool utility_trace = false;   // write per-step utilities (replica 0)
  std::string out_dir;

  void validate() const;  // throws ConfigError before any run starts
};

struct PointResult {
  GridPoint point;
  std::vector<double> psi;  // per replica
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n-1)
  bool complete = true;
};

struct SweepResult {
  std::vector<PointResult> points;
  std::filesystem::path raw_csv;
  std::filesystem::path aggregate_csv;
  std::filesystem::path manifest;
};

/// Run every (grid point x replica) prediction, deterministically per seed
/// and independently of the worker count, and write raw.csv, aggregate.csv
/// and manifest.txt (plus requested traces) into spec.out_dir.
/// Partial failures are marked in the manifest and raise DataError after
/// all other tasks finish.
SweepResult run_experiment(const ExperimentSpec& spec);

/// Canonical specs for the named experiments (grids per the benchmark
/// figures; every field overridable before run_experiment).
ExperimentSpec ns_sweep_spec();
ExperimentSpec min_vs_maj_spec();
ExperimentSpec lambda_sweep_spec();
ExperimentSpec regime_switch_spec();
ExperimentSpec m_sweep_spec();
ExperimentSpec utility_trace_spec();

/// One-shot prediction over a user price CSV.
struct PredictOptions {
  std::string csv_path;
  std::string column = "price";
  char delimiter = ',';
  GameConfig game;  // defaults: N=1, reduced space, m=3, lambda=0.97, GC on
  int window = 100;
  int wiener_order = 3;
  std::uint64_t seed = 1;
  bool utility_trace = false;
  std::string out_dir = "gcmg_out/predict";

  PredictOptions();
};

struct PredictReport {
  double psi_final = 0.0;
  int scored = 0;
  int skipped = 0;
  double wiener_psi = 0.0;
  std::vector<double> wiener_weights;
  std::string wiener_note;  // nonempty when the baseline was skipped
  std::filesystem::path records_csv;
  std::filesystem::path windowed_csv;
  std::filesystem::path report_txt;
  std::filesystem::path utilities_csv;  // only when utility_trace
};

/// Load prices, run the game predictor over the full return series, run the
/// Wiener baseline (fit first half, evaluate second half), and write
/// records.csv, windowed.csv and report.txt into out_dir.
PredictReport run_predict(const PredictOptions& opt);

}  // namespace gcmg
