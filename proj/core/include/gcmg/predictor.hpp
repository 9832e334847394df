#pragma once

#include <cstdint>
#include <vector>

#include "gcmg/game.hpp"

namespace gcmg {

/// One scored prediction step.
struct PredictionRecord {
  int t = 0;          // index into the driving series
  int predicted = 0;  // forecast in {-1, +1}
  int realized = 0;   // realized sign in {-1, +1}
  double psi_running = 0.0;
};

/// Outcome of running a game as a one-step sign predictor over a series.
struct RunResult {
  std::vector<PredictionRecord> records;
  std::vector<std::uint8_t> hits;  // hit flags of the scored steps, in order
  double psi_final = 0.0;          // NaN when no step could be scored
  int scored = 0;
  int skipped = 0;  // zero-sign steps (excluded from psi)
  GameConfig config;
  /// Per-step utility snapshots (agent-major flat), only when requested.
  std::vector<std::vector<double>> utility_trace;
};

/// Drive a game over `series` as a sign predictor for `horizon` steps.
///
/// The history is primed from the signs of the m samples before `start`
/// (default start = m: the series' first m samples), then each step forecasts
/// sgn(series[t]), scores every strategy against the realized sign, and
/// shifts the realized sign into the history. Steps whose realized value is
/// exactly 0 are skipped in psi, scored with a zero signal (pure lambda
/// decay) and keep the previous sign in the history. The first `warmup`
/// scored steps are excluded from psi.
///
/// Throws DataError when the series is too short (needs start + horizon
/// samples, start >= m).
RunResult run_prediction(const GameConfig& cfg, const std::vector<double>& series,
                         int horizon, int warmup = 0, int start = -1,
                         bool trace_utilities = false);

/// Arithmetic mean of hit flags; the running correctness at the last step.
/// Throws std::invalid_argument when empty.
double psi_running(const std::vector<std::uint8_t>& hits);

/// Sliding-window correctness: element k is the mean over the trailing
/// `window` hits (the first window-1 elements average what is available).
std::vector<double> psi_windowed(const std::vector<std::uint8_t>& hits,
                                 int window);

/// Theoretical ceiling for an AR series with known coefficients: the sign of
/// the one-step conditional mean E[y(t)] = sum_i c_i y(t-i), compared to the
/// realized signs over steps [start, start+count). Zero realized values are
/// skipped; a zero conditional mean resolves by a fair coin from tie_seed.
/// Requires start >= order so every step sees a full lag window.
double psi_max_oracle(const std::vector<double>& coeffs,
                      const std::vector<double>& series, std::size_t start,
                      std::size_t count, std::uint64_t tie_seed);

}  // namespace gcmg
