#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stenoflow {

/// Dense (axial x radial) array, radial index fastest.
class Field2D {
 public:
  Field2D() = default;
  Field2D(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const Field2D&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// The four unknowns on the (z, xi) grid at one time level.
struct FlowField {
  Field2D u;      // axial velocity
  Field2D v;      // radial velocity
  Field2D w;      // microrotation
  Field2D theta;  // temperature
  double t = 0.0;
  long step = 0;

  bool operator==(const FlowField&) const = default;
};

}  // namespace stenoflow
