#pragma once

#include <complex>
#include <optional>

#include <Eigen/Core>

namespace dlambda {

using cplx = std::complex<double>;

/// Basis ordering of the four-level double-Lambda atom.
enum class Level : int
{
  g1 = 0,
  g2 = 1,
  e1 = 2,
  e2 = 3
};

/// Optical depth, length, decay rate and detuning of the atomic cloud.
///
/// Lengths are carried in one caller-chosen unit (the presets use the
/// absorption length, so that `length() == alpha()`); `beta()` is then in
/// the inverse of that unit. Rates and detunings share the unit of
/// `gamma()`.
class MediumParams
{
public:
  MediumParams(double alpha, double length, double gamma = 1.0,
               double delta = 0.0);

  double alpha() const noexcept { return alpha_; }
  double length() const noexcept { return length_; }
  double gamma() const noexcept { return gamma_; }
  double delta() const noexcept { return delta_; }
  double l_abs() const noexcept { return length_ / alpha_; }

  MediumParams with_delta(double delta) const;

private:
  double alpha_;
  double length_;
  double gamma_;
  double delta_;
};

enum class AngleProvenance
{
  constant,
  from_profile
};

/// Mixing angle of the control pair, restricted to [0, pi/2].
class MixingAngle
{
public:
  explicit MixingAngle(double theta,
                       AngleProvenance provenance = AngleProvenance::constant,
                       std::optional<double> z = std::nullopt);

  double theta() const noexcept { return theta_; }
  double sin() const noexcept { return sin_; }
  double cos() const noexcept { return cos_; }
  AngleProvenance provenance() const noexcept { return provenance_; }
  std::optional<double> z() const noexcept { return z_; }

private:
  double theta_;
  double sin_;
  double cos_;
  AngleProvenance provenance_;
  std::optional<double> z_;
};

/// Probe Rabi frequencies at one (z, t) point, in units of Gamma.
struct RabiPair
{
  cplx p1{};
  cplx p2{};

  Eigen::Vector2cd vector() const { return {p1, p2}; }
  static RabiPair from(const Eigen::Vector2cd& v) { return {v(0), v(1)}; }

  double intensity() const { return std::norm(p1) + std::norm(p2); }
  bool finite() const;

  friend RabiPair operator+(RabiPair a, RabiPair b)
  {
    return {a.p1 + b.p1, a.p2 + b.p2};
  }
  friend RabiPair operator*(cplx s, RabiPair a) { return {s * a.p1, s * a.p2}; }
  friend bool operator==(const RabiPair&, const RabiPair&) = default;
};

/// 4x4 density matrix over {g1, g2, e1, e2}.
class DensityMatrix
{
public:
  DensityMatrix() : rho_(Eigen::Matrix4cd::Zero()) {}
  explicit DensityMatrix(const Eigen::Matrix4cd& rho) : rho_(rho) {}

  cplx operator()(Level a, Level b) const
  {
    return rho_(static_cast<int>(a), static_cast<int>(b));
  }
  cplx& operator()(Level a, Level b)
  {
    return rho_(static_cast<int>(a), static_cast<int>(b));
  }

  const Eigen::Matrix4cd& matrix() const noexcept { return rho_; }
  cplx trace() const { return rho_.trace(); }
  bool is_hermitian(double tol = 1e-12) const;

private:
  Eigen::Matrix4cd rho_;
};

/// theta = atan2(omega_c1, omega_c2). Throws DomainError when both vanish.
MixingAngle mixing_angle(double omega_c1, double omega_c2);

/// Ground-state superposition cos(theta)|g1> - sin(theta)|g2>.
Eigen::Vector2d dark_state(const MixingAngle& theta);

/// Projector onto the dark state, embedded in the four-level space.
DensityMatrix cpt_state_matrix(const MixingAngle& theta);

/// beta = alpha Gamma / (2 L (i Gamma - delta)).
cplx beta(const MediumParams& params);

} // namespace dlambda
