#pragma once

#include <cstdint>
#include <vector>

namespace mmscale {

// Dense row-major matrix with integer entries. Simulated runs use small
// integer values so every schedule is bit-exact against the reference
// product; no floating-point tolerance is needed anywhere.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::int64_t rows, std::int64_t cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows * cols), 0) {}

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }

  std::int64_t& at(std::int64_t r, std::int64_t c) {
    return data_[static_cast<std::size_t>(r * cols_ + c)];
  }
  std::int64_t at(std::int64_t r, std::int64_t c) const {
    return data_[static_cast<std::size_t>(r * cols_ + c)];
  }

  bool operator==(const Matrix& other) const = default;

 private:
  std::int64_t rows_ = 0;
  std::int64_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

// Deterministic test inputs: entries drawn from a mt19937_64 stream reduced
// into [-3, 3]. The reduction uses plain modulo so the values depend only on
// the seed, not on library distribution internals.
Matrix random_matrix(std::int64_t n, std::uint64_t seed);

// Seeds for the conventional A/B operand pair of a run.
std::uint64_t seed_for_operand(std::uint64_t run_seed, int operand);

// Cubic-work reference product, the correctness oracle for every schedule.
Matrix multiply_reference(const Matrix& a, const Matrix& b);

Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);

}  // namespace mmscale
