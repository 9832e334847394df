#pragma once

#include <vector>

namespace gcmg {

/// Solve the dense n-by-n system A x = b by Gaussian elimination with
/// partial pivoting. `a` is row-major, consumed by value (worked in place).
/// Throws DataError when the matrix is numerically singular.
std::vector<double> solve_linear_system(std::vector<double> a,
                                        std::vector<double> b);

/// Largest root modulus of z^p - c1 z^(p-1) - ... - cp, the characteristic
/// polynomial of the recursion y(t) = sum_i c_i y(t-i). Roots found by
/// Durand-Kerner iteration with deterministic starting points; exact zero
/// roots are deflated first. Empty/all-zero coefficients give 0.
double max_root_modulus(const std::vector<double>& coeffs);

}  // namespace gcmg
