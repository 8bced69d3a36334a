#ifndef NCRW_LINALG_HPP
#define NCRW_LINALG_HPP

#include <cstddef>
#include <span>

namespace ncrw {

/// Determinant of a dense n x n row-major matrix by LU with partial pivoting.
/// The empty matrix has determinant 1.
double determinant(std::span<const double> row_major, std::size_t n);

}  // namespace ncrw

#endif  // NCRW_LINALG_HPP
