#pragma once

#include <cstddef>
#include <limits>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dlambda/quantum_core.hpp"

namespace dlambda {

enum class ProfileKind
{
  constant,
  sigmoid,
  gaussian,
  tabulated
};

std::string_view to_string(ProfileKind kind);

struct ControlAmplitudes
{
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Monotone (Fritsch-Carlson) cubic interpolant. Each interval stays within
/// the range of its end samples, so non-negative data interpolate to
/// non-negative values.
class MonotoneCubic
{
public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
};

/// Spatial envelope of the two control fields over the medium [0, length].
///
/// Immutable once built; use the named constructors.
class ControlProfile
{
public:
  struct Constant
  {
    double c1;
    double c2;
  };
  struct Sigmoid
  {
    double omega_c;
    double z0;
    double z_bar;
  };
  struct Gaussian
  {
    double omega_c;
    double sigma;
  };
  struct Tabulated
  {
    MonotoneCubic c1;
    MonotoneCubic c2;
    double omega_c;
  };

  static ControlProfile constant(double c1, double c2, double length);
  static ControlProfile sigmoid(double omega_c, double z0, double z_bar,
                                double length);
  /// Gaussian controls centred on z = 0 and z = length.
  static ControlProfile gaussian(double omega_c, double sigma, double length);
  /// Three-column table (z, c1, c2). The samples must cover [0, length].
  static ControlProfile tabulated(std::vector<double> z, std::vector<double> c1,
                                  std::vector<double> c2, double length);
  /// Two-column table (z, c1); c2 follows from c1^2 + c2^2 = omega_c^2.
  static ControlProfile tabulated(std::vector<double> z, std::vector<double> c1,
                                  double omega_c, double length);

  ProfileKind kind() const noexcept;
  double length() const noexcept { return length_; }
  /// Largest control amplitude on the medium; bounds the OBE step size.
  double peak_amplitude() const;

  template <class T>
  const T& as() const
  {
    return std::get<T>(shape_);
  }

private:
  using Shape = std::variant<Constant, Sigmoid, Gaussian, Tabulated>;
  ControlProfile(Shape shape, double length);

  Shape shape_;
  double length_;

  friend ControlAmplitudes evaluate(const ControlProfile&, double);
  friend double theta_prime(const ControlProfile&, double);
};

/// Control amplitudes at z. Throws DomainError outside [0, length].
ControlAmplitudes evaluate(const ControlProfile& profile, double z);

/// Local mixing angle. Throws DomainError (naming z) where both controls
/// vanish.
MixingAngle theta_of_z(const ControlProfile& profile, double z);

/// d theta / dz. Closed forms for the analytic shapes, central differences
/// of the interpolated angle for tables.
double theta_prime(const ControlProfile& profile, double z);

struct AdiabaticityReport
{
  double lhs_max = 0.0;   // max |theta'(z)|
  double rhs = 0.0;       // |beta|
  double margin = std::numeric_limits<double>::infinity();
  double worst_z = 0.0;

  bool bounded() const { return lhs_max > 0.0; }
};

/// Scans |theta'| on a uniform grid of `grid_points` over [0, L] and refines
/// the largest sample with a golden-section search on its neighbours.
AdiabaticityReport adiabaticity_report(const ControlProfile& profile,
                                       const MediumParams& params,
                                       std::size_t grid_points = 2048);

} // namespace dlambda
