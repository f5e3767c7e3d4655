#include "oodlab/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace oodlab {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t extent : shape) {
    if (extent == 0) {
      throw std::invalid_argument("tensor shape extents must be positive");
    }
    n *= extent;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(shape_product(shape_), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_product(shape_) != data_.size()) {
    throw std::invalid_argument("tensor data length " + std::to_string(data_.size()) +
                                " does not match shape product");
  }
}

Tensor Tensor::zeros(std::vector<std::size_t> shape) { return Tensor(std::move(shape)); }

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows) {
  if (rows.size() == 0) {
    throw std::invalid_argument("matrix literal must have at least one row");
  }
  const std::size_t ncols = rows.begin()->size();
  std::vector<double> data;
  data.reserve(rows.size() * ncols);
  for (const auto& r : rows) {
    if (r.size() != ncols) {
      throw std::invalid_argument("matrix literal rows have unequal lengths");
    }
    data.insert(data.end(), r.begin(), r.end());
  }
  return Tensor({rows.size(), ncols}, std::move(data));
}

Tensor Tensor::row(std::initializer_list<double> values) {
  return Tensor({values.size()}, std::vector<double>(values));
}

std::size_t Tensor::dim(std::size_t axis) const {
  if (axis >= shape_.size()) {
    throw std::invalid_argument("tensor axis " + std::to_string(axis) + " out of range for rank " +
                                std::to_string(shape_.size()));
  }
  return shape_[axis];
}

bool Tensor::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace oodlab
