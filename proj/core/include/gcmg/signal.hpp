#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcmg/rng.hpp"

namespace gcmg {

/// Autoregressive generator spec: y(t) = sum_i coeffs[i] * y(t-1-i) + noise.
struct ArProcess {
  std::vector<double> coeffs;
  double noise_sd = 1.0;
  /// Optional starting state, most recent value last; zeros when empty.
  std::vector<double> init_state;
};

/// Generate n samples of the AR recursion, drawing Gaussian noise from rng.
/// burn_in extra samples are generated and discarded up front.
std::vector<double> ar_generate(const ArProcess& p, std::size_t n, Rng& rng,
                                std::size_t burn_in = 0);

/// True iff every pole of the recursion lies strictly inside the unit circle
/// (max characteristic-root modulus < 1). All-zero coefficients are stable.
bool ar_is_stable(const std::vector<double>& coeffs);

/// Samples 0..switch_at-1 from `first`, the rest from `second` seeded with
/// the last values of the first segment, so the series is continuous.
/// The first segment is bit-identical to running `first` alone on the
/// same rng state.
std::vector<double> regime_switch_series(const ArProcess& first,
                                         const ArProcess& second,
                                         std::size_t n, std::size_t switch_at,
                                         Rng& rng);

/// Price file parsed into returns and their signs.
struct ReturnSeries {
  std::vector<double> returns;
  std::vector<int> signs;  // sgn(returns[k]) in {-1, 0, +1}
  std::string instrument;  // price column name
  std::string note;        // source path + row count
};

/// Read a CSV of prices (header row required, chronological ascending) and
/// convert to simple returns r(t) = p(t)/p(t-1) - 1. Missing, non-numeric or
/// non-positive prices raise DataError naming the file line.
ReturnSeries load_prices(const std::string& path, const std::string& column,
                         char delimiter = ',');

/// Simple returns of a positive price series (library-level counterpart of
/// load_prices for already-parsed data).
std::vector<double> simple_returns(const std::vector<double>& prices);

/// Convenience: sgn mapped over a series.
std::vector<int> sign_series(const std::vector<double>& values);

}  // namespace gcmg
