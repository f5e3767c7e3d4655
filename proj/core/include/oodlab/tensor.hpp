#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace oodlab {

// Dense row-major tensor of 64-bit floats. Carries activations, parameters
// and gradients alike. Shape is a list of positive extents; the flat data
// length always equals the product of the extents.
class Tensor {
 public:
  Tensor() = default;

  // Zero-filled tensor of the given shape.
  explicit Tensor(std::vector<std::size_t> shape);

  // Takes ownership of `data`; its length must match the shape product.
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor zeros(std::vector<std::size_t> shape);

  // Rank-2 tensor from nested braces; rows must have equal length.
  static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows);

  // Rank-1 tensor.
  static Tensor row(std::initializer_list<double> values);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }

  // Extent along `axis`; throws std::invalid_argument if out of range.
  std::size_t dim(std::size_t axis) const;

  // Rank-2 tensors only: rows() == dim(0), cols() == dim(1).
  std::size_t rows() const { return dim(0); }
  std::size_t cols() const { return dim(1); }

  double operator()(std::size_t i) const { return data_[i]; }
  double& operator()(std::size_t i) { return data_[i]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * shape_[1] + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * shape_[1] + c]; }

  const std::vector<double>& values() const { return data_; }
  std::vector<double>& values() { return data_; }
  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;

  bool operator==(const Tensor& other) const = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

}  // namespace oodlab
