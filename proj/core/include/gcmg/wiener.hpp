#pragma once

#include <cstdint>
#include <vector>

#include "gcmg/rng.hpp"

namespace gcmg {

/// FIR linear one-step predictor: y_hat(t) = sum_k weights[k] * y(t-1-k).
struct WienerFilter {
  int order = 0;
  std::vector<double> weights;
  bool fitted = false;
};

/// Least-squares fit from empirical autocovariances of `series` (mean
/// subtracted, biased estimator: divide by length). Solves the order x order
/// Toeplitz normal equations by elimination with partial pivoting.
/// Throws DataError on a series shorter than 10*order or a singular system
/// (e.g. a constant series).
WienerFilter fit_wiener(const std::vector<double>& series, int order);

/// Sign of the filter output for the most-recent-first lag window `recent`
/// (length = order). An exact zero resolves by a fair coin from rng.
int predict_sign_wiener(const WienerFilter& f, const std::vector<double>& recent,
                        Rng& rng);

/// Correctness of the filter over steps [start, series.size()): predict
/// sgn(series[t]) from the previous `order` values. Zero realized values are
/// skipped, mirroring the game predictor's rule. NaN when nothing scored.
double wiener_psi(const WienerFilter& f, const std::vector<double>& series,
                  std::size_t start, std::uint64_t tie_seed);

}  // namespace gcmg
