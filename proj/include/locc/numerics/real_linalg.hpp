#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace locc {

/// Dense row-major real matrix. Used for the affine-dependency systems of the
/// support-reduction step; nothing else in the toolkit needs real matrices.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

  double frobenius_norm() const;
  std::vector<double> apply(std::span<const double> x) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Unit vector z with ‖A z‖ ≤ tol·‖A‖_F, found by Householder QR with column
/// pivoting. Returns nullopt when A has full column rank at that tolerance.
std::optional<std::vector<double>> real_null_vector(const RealMatrix& a, double tol = 1e-10);

}  // namespace locc
