#include "mmscale/matrix.hpp"

#include <random>
#include <stdexcept>

namespace mmscale {

std::uint64_t seed_for_operand(std::uint64_t run_seed, int operand) {
  // splitmix-style stream split so A and B stay decorrelated under any seed.
  std::uint64_t z = run_seed + 0x9e3779b97f4a7c15ULL *
                                   (static_cast<std::uint64_t>(operand) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix random_matrix(std::int64_t n, std::uint64_t seed) {
  Matrix m(n, n);
  std::mt19937_64 rng(seed);
  for (std::int64_t r = 0; r < n; ++r)
    for (std::int64_t c = 0; c < n; ++c)
      m.at(r, c) = static_cast<std::int64_t>(rng() % 7) - 3;
  return m;
}

Matrix multiply_reference(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("multiply_reference: shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::int64_t i = 0; i < a.rows(); ++i)
    for (std::int64_t k = 0; k < a.cols(); ++k) {
      const std::int64_t aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::int64_t j = 0; j < b.cols(); ++j)
        c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

Matrix add(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), a.cols());
  for (std::int64_t i = 0; i < a.rows(); ++i)
    for (std::int64_t j = 0; j < a.cols(); ++j)
      c.at(i, j) = a.at(i, j) + b.at(i, j);
  return c;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), a.cols());
  for (std::int64_t i = 0; i < a.rows(); ++i)
    for (std::int64_t j = 0; j < a.cols(); ++j)
      c.at(i, j) = a.at(i, j) - b.at(i, j);
  return c;
}

}  // namespace mmscale
