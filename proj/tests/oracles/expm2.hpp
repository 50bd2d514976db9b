#pragma once

// Independent 2x2 complex matrix exponential: scaling and squaring around a
// truncated Taylor series. Deliberately shares nothing with the library.

#include <cmath>
#include <complex>

#include <Eigen/Core>

namespace oracle {

inline Eigen::Matrix2cd expm2(const Eigen::Matrix2cd& a)
{
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const Eigen::Matrix2cd scaled = a / std::pow(2.0, squarings);
  Eigen::Matrix2cd term = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Identity();
  for (int k = 1; k <= 24; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) {
    sum = sum * sum;
  }
  return sum;
}

} // namespace oracle
