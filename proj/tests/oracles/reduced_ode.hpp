#pragma once

// Linear-response probe propagation dOmega/dz = -i beta P(theta(z)) Omega,
// P the projector onto (cos theta, -sin theta), integrated with RK4 in z.
// theta(z) is supplied as a plain function so the oracle never touches the
// library's profile code.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using Vec2 = Eigen::Vector2cd;

struct ZSample
{
  double z;
  Vec2 field;
};

inline Vec2 reduced_rhs(const Vec2& f, double theta, std::complex<double> beta)
{
  const double c = std::cos(theta), s = std::sin(theta);
  const std::complex<double> bright = c * f(0) - s * f(1);
  const std::complex<double> k = std::complex<double>(0.0, -1.0) * beta * bright;
  return Vec2(k * c, -k * s);
}

/// Samples at every multiple of `every` steps, plus the end point.
inline std::vector<ZSample> integrate_reduced(const std::function<double(double)>& theta,
                                              std::complex<double> beta, Vec2 f,
                                              double length, int steps, int every)
{
  const double h = length / steps;
  std::vector<ZSample> out{{0.0, f}};
  for (int n = 0; n < steps; ++n) {
    const double z = n * h;
    const Vec2 k1 = reduced_rhs(f, theta(z), beta);
    const Vec2 k2 = reduced_rhs(f + 0.5 * h * k1, theta(z + 0.5 * h), beta);
    const Vec2 k3 = reduced_rhs(f + 0.5 * h * k2, theta(z + 0.5 * h), beta);
    const Vec2 k4 = reduced_rhs(f + h * k3, theta(z + h), beta);
    f += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((n + 1) % every == 0 || n + 1 == steps) {
      out.push_back({(n + 1) * h, f});
    }
  }
  return out;
}

/// Mixing angles written out from the control shapes.
inline double sigmoid_theta(double z, double z0, double z_bar)
{
  // Omega_c1 falls, Omega_c2 rises; theta = atan2(c1, c2).
  const double c1 = std::sqrt(1.0 / (1.0 + std::exp((z - z0) / z_bar)));
  const double c2 = std::sqrt(1.0 / (1.0 + std::exp(-(z - z0) / z_bar)));
  return std::atan2(c1, c2);
}

inline double gaussian_theta(double z, double sigma, double length)
{
  const double c1 = std::exp(-z * z / (sigma * sigma));
  const double c2 = std::exp(-(z - length) * (z - length) / (sigma * sigma));
  return std::atan2(c1, c2);
}

inline double finite_difference(const std::function<double(double)>& f, double z, double h)
{
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

} // namespace oracle
