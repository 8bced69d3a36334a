#include "ncrw/linalg.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace ncrw {

double determinant(std::span<const double> row_major, std::size_t n) {
  if (row_major.size() != n * n) {
    throw std::invalid_argument("determinant: matrix storage does not match n x n");
  }
  if (n == 0) return 1.0;
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const Matrix> m(row_major.data(), static_cast<Eigen::Index>(n),
                                   static_cast<Eigen::Index>(n));
  return m.partialPivLu().determinant();
}

}  // namespace ncrw
