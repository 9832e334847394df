#include "gcmg/linalg.hpp"

#include <cmath>
#include <complex>
#include <cstddef>

#include "gcmg/errors.hpp"

namespace gcmg {

std::vector<double> solve_linear_system(std::vector<double> a,
                                        std::vector<double> b) {
  const std::size_t n = b.size();
  if (a.size() != n * n) throw DataError("solve_linear_system: shape mismatch");

  for (std::size_t col = 0; col < n; ++col) {
    // partial pivot: largest magnitude in this column
    std::size_t pivot = col;
    double best = std::fabs(a[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::fabs(a[r * n + col]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best < 1e-12) throw DataError("solve_linear_system: singular matrix");
    if (pivot != col) {
      for (std::size_t c = col; c < n; ++c)
        std::swap(a[pivot * n + c], a[col * n + c]);
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      a[r * n + col] = 0.0;
      for (std::size_t c = col + 1; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }

  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * x[c];
    x[i] = s / a[i * n + i];
  }
  return x;
}

double max_root_modulus(const std::vector<double>& coeffs) {
  // monic polynomial a0 z^p + ... + ap with a0 = 1, ak = -c_k
  std::vector<double> poly{1.0};
  for (double c : coeffs) poly.push_back(-c);

  // deflate exact zero roots (trailing zero coefficients)
  while (poly.size() > 1 && poly.back() == 0.0) poly.pop_back();
  const std::size_t deg = poly.size() - 1;
  if (deg == 0) return 0.0;

  using cd = std::complex<double>;
  auto eval = [&](cd z) {
    cd v = poly[0];
    for (std::size_t k = 1; k < poly.size(); ++k) v = v * z + poly[k];
    return v;
  };

  // Durand-Kerner from the standard deterministic starts (0.4+0.9i)^k
  std::vector<cd> x(deg);
  const cd base(0.4, 0.9);
  cd p = base;
  for (std::size_t k = 0; k < deg; ++k) {
    x[k] = p;
    p *= base;
  }
  for (int iter = 0; iter < 500; ++iter) {
    double moved = 0.0;
    for (std::size_t k = 0; k < deg; ++k) {
      cd denom(1.0, 0.0);
      for (std::size_t j = 0; j < deg; ++j)
        if (j != k) denom *= x[k] - x[j];
      const cd delta = eval(x[k]) / denom;
      x[k] -= delta;
      moved = std::max(moved, std::abs(delta));
    }
    if (moved < 1e-13) break;
  }

  double radius = 0.0;
  for (const cd& r : x) radius = std::max(radius, std::abs(r));
  return radius;
}

}  // namespace gcmg
