#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mrw {

/// Solve the symmetric Toeplitz system T x = b, where T is defined by its
/// first column. Levinson recursion, O(n^2). Throws std::runtime_error if
/// the recursion hits a (numerically) singular leading minor.
std::vector<double> levinson_solve(std::span<const double> first_column,
                                   std::span<const double> rhs);

/// In-place lower Cholesky of a dense symmetric matrix stored row-major.
/// Returns false if the matrix is not positive definite.
bool cholesky_in_place(std::vector<double>& a, std::size_t n);

/// Dense SPD solve via Cholesky (copy of the matrix is taken).
std::vector<double> spd_solve(const std::vector<double>& a, std::size_t n,
                              std::span<const double> rhs);

}  // namespace mrw
