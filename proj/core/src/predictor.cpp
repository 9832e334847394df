#include "gcmg/predictor.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "gcmg/errors.hpp"

namespace gcmg {

RunResult run_prediction(const GameConfig& cfg, const std::vector<double>& series,
                         int horizon, int warmup, int start,
                         bool trace_utilities) {
  cfg.validate();
  if (horizon < 1) throw ConfigError("run_prediction: horizon must be >= 1");
  if (warmup < 0 || warmup >= horizon)
    throw ConfigError("run_prediction: warmup must be in [0, horizon)");
  const int m = cfg.memory;
  if (start < 0) start = m;
  if (start < m)
    throw ConfigError("run_prediction: start must leave m samples for priming");
  if (series.size() < static_cast<std::size_t>(start) + horizon)
    throw DataError("run_prediction: series exhausted (" +
                    std::to_string(series.size()) + " samples, need " +
                    std::to_string(start + horizon) + "; 0 of " +
                    std::to_string(horizon) + " steps completed)");

  Game game(cfg);

  // prime the history with the true signs preceding the scored window;
  // a zero sample keeps the previous sign (+1 before anything is known)
  int prev_sign = 1;
  {
    std::vector<int> primed(m);
    for (int k = 0; k < m; ++k) {
      const double v = series[start - m + k];
      if (v > 0)
        prev_sign = 1;
      else if (v < 0)
        prev_sign = -1;
      primed[k] = prev_sign;
    }
    game.prime_history(primed);
  }

  RunResult out;
  out.config = game.config();
  out.hits.reserve(horizon);
  out.records.reserve(horizon);
  if (trace_utilities) out.utility_trace.reserve(horizon);

  int scored = 0;
  std::size_t hit_sum = 0;
  for (int t = start; t < start + horizon; ++t) {
    const double y = series[t];
    const int realized = y > 0 ? 1 : (y < 0 ? -1 : 0);
    if (realized == 0) {
      // skipped step: strategies decay, prediction unrecorded
      game.choose();
      game.score(0.0);
      game.push_history(prev_sign);
      ++out.skipped;
    } else {
      const StepOutcome step = game.step_exogenous(realized);
      ++scored;
      if (scored > warmup) {
        const std::uint8_t hit = step.forecast == realized ? 1 : 0;
        hit_sum += hit;
        out.hits.push_back(hit);
        out.records.push_back(
            {t, step.forecast, realized,
             static_cast<double>(hit_sum) / out.hits.size()});
      }
      prev_sign = realized;
    }
    if (trace_utilities) out.utility_trace.push_back(game.utilities_snapshot());
  }

  out.scored = static_cast<int>(out.hits.size());
  out.psi_final = out.hits.empty()
                      ? std::numeric_limits<double>::quiet_NaN()
                      : static_cast<double>(hit_sum) / out.hits.size();
  return out;
}

double psi_running(const std::vector<std::uint8_t>& hits) {
  if (hits.empty()) throw std::invalid_argument("psi_running: empty hits");
  std::size_t sum = 0;
  for (auto h : hits) sum += h;
  return static_cast<double>(sum) / hits.size();
}

std::vector<double> psi_windowed(const std::vector<std::uint8_t>& hits,
                                 int window) {
  if (window < 1) throw std::invalid_argument("psi_windowed: window must be >= 1");
  std::vector<double> out(hits.size());
  std::size_t sum = 0;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    sum += hits[k];
    if (k >= static_cast<std::size_t>(window)) sum -= hits[k - window];
    const std::size_t span = std::min<std::size_t>(k + 1, window);
    out[k] = static_cast<double>(sum) / span;
  }
  return out;
}

double psi_max_oracle(const std::vector<double>& coeffs,
                      const std::vector<double>& series, std::size_t start,
                      std::size_t count, std::uint64_t tie_seed) {
  const std::size_t p = coeffs.size();
  if (p == 0) throw ConfigError("psi_max_oracle: order must be >= 1");
  if (start < p)
    throw ConfigError("psi_max_oracle: start must be >= the AR order");
  if (series.size() < start + count)
    throw DataError("psi_max_oracle: series too short");

  Rng tie_rng(tie_seed);
  std::size_t hits = 0, scored = 0;
  for (std::size_t t = start; t < start + count; ++t) {
    const double y = series[t];
    const int realized = y > 0 ? 1 : (y < 0 ? -1 : 0);
    if (realized == 0) continue;  // same skip rule as the predictor
    double mean = 0.0;
    for (std::size_t i = 0; i < p; ++i) mean += coeffs[i] * series[t - 1 - i];
    const int predicted = mean > 0 ? 1 : (mean < 0 ? -1 : tie_rng.sign());
    hits += predicted == realized;
    ++scored;
  }
  if (scored == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(hits) / scored;
}

}  // namespace gcmg
