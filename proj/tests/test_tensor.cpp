#include <doctest.h>

#include <limits>
#include <stdexcept>

#include "oodlab/tensor.hpp"

using oodlab::Tensor;

TEST_CASE("shape constructor zero-fills and sizes the data") {
  Tensor t({2, 3});
  CHECK(t.rank() == 2);
  CHECK(t.rows() == 2);
  CHECK(t.cols() == 3);
  CHECK(t.size() == 6);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(t(i) == 0.0);
}

TEST_CASE("data constructor checks the length against the shape") {
  CHECK_NOTHROW(Tensor({2, 2}, {1, 2, 3, 4}));
  CHECK_THROWS_AS(Tensor({2, 2}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Tensor({0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Tensor({3, 0}), std::invalid_argument);
}

TEST_CASE("matrix and row builders lay values out row-major") {
  const Tensor m = Tensor::matrix({{1, 2, 3}, {4, 5, 6}});
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(0, 0) == 1);
  CHECK(m(0, 2) == 3);
  CHECK(m(1, 0) == 4);
  CHECK(m(1, 2) == 6);
  CHECK(m(5) == 6);  // flat index view of the same storage

  const Tensor r = Tensor::row({7, 8});
  CHECK(r.rank() == 1);
  CHECK(r.size() == 2);
  CHECK(r(1) == 8);

  CHECK_THROWS_AS(Tensor::matrix({{1, 2}, {3}}), std::invalid_argument);
}

TEST_CASE("dim validates the axis") {
  const Tensor t({4, 5});
  CHECK(t.dim(0) == 4);
  CHECK(t.dim(1) == 5);
  CHECK_THROWS_AS(t.dim(2), std::invalid_argument);
}

TEST_CASE("equality compares shape and contents") {
  const Tensor a = Tensor::matrix({{1, 2}, {3, 4}});
  Tensor b = Tensor::matrix({{1, 2}, {3, 4}});
  CHECK(a == b);
  b(1, 1) = 5;
  CHECK(a != b);
  CHECK(Tensor({1, 4}, {1, 2, 3, 4}) != Tensor({4, 1}, {1, 2, 3, 4}));
}

TEST_CASE("all_finite spots NaN and infinity") {
  Tensor t = Tensor::row({1, 2, 3});
  CHECK(t.all_finite());
  t(1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(t.all_finite());
  t(1) = std::numeric_limits<double>::infinity();
  CHECK_FALSE(t.all_finite());
}
