#include "gcmg/wiener.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gcmg/errors.hpp"
#include "gcmg/linalg.hpp"

namespace gcmg {

WienerFilter fit_wiener(const std::vector<double>& series, int order) {
  if (order < 1) throw ConfigError("fit_wiener: order must be >= 1");
  const std::size_t n = series.size();
  if (n < static_cast<std::size_t>(10) * order)
    throw DataError("fit_wiener: need at least 10*order samples, got " +
                    std::to_string(n));

  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  // biased autocovariance estimates c_0 .. c_order
  std::vector<double> c(order + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    double s = 0.0;
    for (std::size_t t = k; t < n; ++t)
      s += (series[t] - mean) * (series[t - k] - mean);
    c[k] = s / static_cast<double>(n);
  }

  // Toeplitz normal equations R w = r with R[i][j] = c_|i-j|, r[i] = c_{i+1}
  std::vector<double> R(static_cast<std::size_t>(order) * order);
  std::vector<double> r(order);
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j)
      R[static_cast<std::size_t>(i) * order + j] = c[std::abs(i - j)];
    r[i] = c[i + 1];
  }

  WienerFilter f;
  f.order = order;
  try {
    f.weights = solve_linear_system(std::move(R), std::move(r));
  } catch (const DataError&) {
    throw DataError("fit_wiener: degenerate input (singular autocovariance matrix)");
  }
  f.fitted = true;
  return f;
}

int predict_sign_wiener(const WienerFilter& f, const std::vector<double>& recent,
                        Rng& rng) {
  if (!f.fitted) throw ConfigError("predict_sign_wiener: unfitted filter");
  if (recent.size() != static_cast<std::size_t>(f.order))
    throw ConfigError("predict_sign_wiener: lag window length != order");
  double y = 0.0;
  for (int k = 0; k < f.order; ++k) y += f.weights[k] * recent[k];
  if (y > 0) return 1;
  if (y < 0) return -1;
  return rng.sign();
}

double wiener_psi(const WienerFilter& f, const std::vector<double>& series,
                  std::size_t start, std::uint64_t tie_seed) {
  if (!f.fitted) throw ConfigError("wiener_psi: unfitted filter");
  const std::size_t p = f.order;
  if (start < p) throw ConfigError("wiener_psi: start must be >= order");
  Rng rng(tie_seed);
  std::vector<double> recent(p);
  std::size_t hits = 0, scored = 0;
  for (std::size_t t = start; t < series.size(); ++t) {
    const double y = series[t];
    const int realized = y > 0 ? 1 : (y < 0 ? -1 : 0);
    if (realized == 0) continue;
    for (std::size_t k = 0; k < p; ++k) recent[k] = series[t - 1 - k];
    hits += predict_sign_wiener(f, recent, rng) == realized;
    ++scored;
  }
  if (scored == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(hits) / scored;
}

}  // namespace gcmg
