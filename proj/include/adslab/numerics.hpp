#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adslab/rng.hpp"

namespace adslab {

/// Raised for violated preconditions anywhere in the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Max-subtracted softmax. Throws on empty or non-finite input.
std::vector<double> softmax(std::span<const double> v);

/// Draws index i with probability p[i] using exactly one uniform.
std::size_t sample_categorical(std::span<const double> p, RngStream& rng);

double sigmoid(double x);

/// 1 - cos(u, v). Throws if either vector has zero norm.
double cosine_distance(std::span<const double> u, std::span<const double> v);

/// KL(p || q) with 0 log 0 = 0. Throws when q is zero where p is not.
double kl_divergence(std::span<const double> p, std::span<const double> q);

double l2_norm(std::span<const double> v);

std::vector<double> one_hot(std::size_t index, std::size_t width);

/// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace adslab
