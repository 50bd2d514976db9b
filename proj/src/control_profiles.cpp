#include "dlambda/control_profiles.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dlambda/errors.hpp"

namespace dlambda {

namespace {

template <class... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double value, const char* what)
{
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(fmt::format("{} must be > 0, got {}", what, value));
  }
}

double clamp_to_medium(double z, double length)
{
  const double tol = 1e-9 * length;
  if (!(z >= -tol && z <= length + tol)) {
    throw DomainError(
      fmt::format("z = {} lies outside the medium [0, {}]", z, length));
  }
  return std::clamp(z, 0.0, length);
}

void check_table(const std::vector<double>& z, const std::vector<double>& v,
                 const char* column)
{
  if (z.size() != v.size()) {
    throw ValidationError(
      fmt::format("column {} has {} samples, z has {}", column, v.size(), z.size()));
  }
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw ValidationError(
        fmt::format("column {} contains a negative or non-finite amplitude", column));
    }
  }
}

} // namespace

std::string_view to_string(ProfileKind kind)
{
  switch (kind) {
  case ProfileKind::constant:
    return "constant";
  case ProfileKind::sigmoid:
    return "sigmoid";
  case ProfileKind::gaussian:
    return "gaussian";
  case ProfileKind::tabulated:
    return "tabulated";
  }
  return "unknown";
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
  : x_(std::move(x)), y_(std::move(y))
{
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw ValidationError("interpolation table needs at least two samples");
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (!(x_[k] > x_[k - 1])) {
      throw ValidationError("table abscissae must be strictly increasing");
    }
  }

  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x_[k + 1] - x_[k];
    d[k] = (y_[k + 1] - y_[k]) / h[k];
  }
  slope_.assign(n, 0.0);
  slope_.front() = d.front();
  slope_.back() = d.back();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (d[k - 1] * d[k] <= 0.0) {
      slope_[k] = 0.0;
    } else {
      // Fritsch-Butland weighted harmonic mean.
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      slope_[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
    }
  }
  // End slopes must not exceed three times the secant for monotonicity.
  for (std::size_t end : {std::size_t{0}, n - 1}) {
    const double secant = end == 0 ? d.front() : d.back();
    if (slope_[end] * secant <= 0.0) {
      slope_[end] = 0.0;
    } else if (std::abs(slope_[end]) > 3.0 * std::abs(secant)) {
      slope_[end] = 3.0 * secant;
    }
  }
}

double MonotoneCubic::operator()(double x) const
{
  x = std::clamp(x, x_.front(), x_.back());
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  k = std::min(k, x_.size() - 2);

  const double h = x_[k + 1] - x_[k];
  const double s = (x - x_[k]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * y_[k] + h10 * h * slope_[k] + h01 * y_[k + 1] +
         h11 * h * slope_[k + 1];
}

ControlProfile::ControlProfile(Shape shape, double length)
  : shape_(std::move(shape)), length_(length)
{
  require_positive(length, "medium length");
}

ControlProfile ControlProfile::constant(double c1, double c2, double length)
{
  if (!(c1 >= 0.0) || !(c2 >= 0.0)) {
    throw ValidationError("control amplitudes must be non-negative");
  }
  if (c1 == 0.0 && c2 == 0.0) {
    throw DomainError("constant profile with both controls zero has no dark state");
  }
  return ControlProfile(Constant{c1, c2}, length);
}

ControlProfile ControlProfile::sigmoid(double omega_c, double z0, double z_bar,
                                       double length)
{
  require_positive(omega_c, "control scale omega_c");
  require_positive(z_bar, "sigmoid width z_bar");
  if (!std::isfinite(z0)) {
    throw ValidationError("sigmoid centre z0 must be finite");
  }
  return ControlProfile(Sigmoid{omega_c, z0, z_bar}, length);
}

ControlProfile ControlProfile::gaussian(double omega_c, double sigma,
                                        double length)
{
  require_positive(omega_c, "control scale omega_c");
  require_positive(sigma, "gaussian width sigma");
  return ControlProfile(Gaussian{omega_c, sigma}, length);
}

ControlProfile ControlProfile::tabulated(std::vector<double> z,
                                         std::vector<double> c1,
                                         std::vector<double> c2, double length)
{
  check_table(z, c1, "c1");
  check_table(z, c2, "c2");
  require_positive(length, "medium length");
  const double tol = 1e-9 * length;
  if (z.empty() || z.front() > tol || z.back() < length - tol) {
    throw ValidationError(fmt::format(
      "tabulated profile must cover the medium [0, {}]", length));
  }
  double peak = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    peak = std::max({peak, c1[k], c2[k]});
  }
  MonotoneCubic i1(z, std::move(c1));
  MonotoneCubic i2(std::move(z), std::move(c2));
  return ControlProfile(Tabulated{std::move(i1), std::move(i2), peak}, length);
}

ControlProfile ControlProfile::tabulated(std::vector<double> z,
                                         std::vector<double> c1,
                                         double omega_c, double length)
{
  require_positive(omega_c, "control scale omega_c");
  check_table(z, c1, "c1");
  std::vector<double> c2(c1.size());
  for (std::size_t k = 0; k < c1.size(); ++k) {
    if (c1[k] > omega_c * (1.0 + 1e-12)) {
      throw ValidationError(fmt::format(
        "c1 sample {} exceeds omega_c = {}", c1[k], omega_c));
    }
    c2[k] = std::sqrt(std::max(0.0, omega_c * omega_c - c1[k] * c1[k]));
  }
  return tabulated(std::move(z), std::move(c1), std::move(c2), length);
}

ProfileKind ControlProfile::kind() const noexcept
{
  return std::visit(Overloaded{
                      [](const Constant&) { return ProfileKind::constant; },
                      [](const Sigmoid&) { return ProfileKind::sigmoid; },
                      [](const Gaussian&) { return ProfileKind::gaussian; },
                      [](const Tabulated&) { return ProfileKind::tabulated; },
                    },
                    shape_);
}

double ControlProfile::peak_amplitude() const
{
  return std::visit(Overloaded{
                      [](const Constant& s) { return std::max(s.c1, s.c2); },
                      [](const Sigmoid& s) { return s.omega_c; },
                      [](const Gaussian& s) { return s.omega_c; },
                      [](const Tabulated& s) { return s.omega_c; },
                    },
                    shape_);
}

ControlAmplitudes evaluate(const ControlProfile& profile, double z)
{
  z = clamp_to_medium(z, profile.length_);
  const double length = profile.length_;
  return std::visit(
    Overloaded{
      [](const ControlProfile::Constant& s) {
        return ControlAmplitudes{s.c1, s.c2};
      },
      [z](const ControlProfile::Sigmoid& s) {
        const double u = (z - s.z0) / s.z_bar;
        return ControlAmplitudes{s.omega_c * std::sqrt(1.0 / (1.0 + std::exp(u))),
                                 s.omega_c * std::sqrt(1.0 / (1.0 + std::exp(-u)))};
      },
      [z, length](const ControlProfile::Gaussian& s) {
        const double s2 = s.sigma * s.sigma;
        return ControlAmplitudes{
          s.omega_c * std::exp(-z * z / s2),
          s.omega_c * std::exp(-(z - length) * (z - length) / s2)};
      },
      [z](const ControlProfile::Tabulated& s) {
        return ControlAmplitudes{std::max(0.0, s.c1(z)), std::max(0.0, s.c2(z))};
      },
    },
    profile.shape_);
}

MixingAngle theta_of_z(const ControlProfile& profile, double z)
{
  const ControlAmplitudes c = evaluate(profile, z);
  if (c.c1 == 0.0 && c.c2 == 0.0) {
    throw DomainError(
      fmt::format("both control amplitudes vanish at z = {}", z));
  }
  const MixingAngle angle = mixing_angle(c.c1, c.c2);
  return MixingAngle(angle.theta(), AngleProvenance::from_profile, z);
}

double theta_prime(const ControlProfile& profile, double z)
{
  z = clamp_to_medium(z, profile.length_);
  const double length = profile.length_;
  return std::visit(
    Overloaded{
      [](const ControlProfile::Constant&) { return 0.0; },
      [z](const ControlProfile::Sigmoid& s) {
        // tan(theta) = exp(-u/2), u = (z - z0)/z_bar
        const double u = (z - s.z0) / s.z_bar;
        return -1.0 / (4.0 * s.z_bar * std::cosh(0.5 * u));
      },
      [z, length](const ControlProfile::Gaussian& s) {
        // tan(theta) = exp(a), a = L (L - 2 z) / sigma^2
        const double s2 = s.sigma * s.sigma;
        const double a = length * (length - 2.0 * z) / s2;
        return -(length / s2) / std::cosh(a);
      },
      [&profile, z, length](const ControlProfile::Tabulated&) {
        const double h = 1e-5 * length;
        auto th = [&profile](double x) { return theta_of_z(profile, x).theta(); };
        if (z - h < 0.0) {
          return (-3.0 * th(z) + 4.0 * th(z + h) - th(z + 2.0 * h)) / (2.0 * h);
        }
        if (z + h > length) {
          return (3.0 * th(z) - 4.0 * th(z - h) + th(z - 2.0 * h)) / (2.0 * h);
        }
        return (th(z + h) - th(z - h)) / (2.0 * h);
      },
    },
    profile.shape_);
}

AdiabaticityReport adiabaticity_report(const ControlProfile& profile,
                                       const MediumParams& params,
                                       std::size_t grid_points)
{
  if (grid_points < 3) {
    throw ValidationError("adiabaticity scan needs at least 3 grid points");
  }
  const double length = profile.length();
  const double step = length / static_cast<double>(grid_points - 1);
  auto lhs = [&profile](double z) { return std::abs(theta_prime(profile, z)); };

  AdiabaticityReport report;
  report.rhs = std::abs(beta(params));
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double z = std::min(length, static_cast<double>(i) * step);
    const double v = lhs(z);
    if (v > report.lhs_max) {
      report.lhs_max = v;
      report.worst_z = z;
      best = i;
    }
  }
  if (report.lhs_max == 0.0) {
    return report;
  }

  double lo = best == 0 ? 0.0 : static_cast<double>(best - 1) * step;
  double hi = std::min(length, static_cast<double>(best + 1) * step);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - phi * (hi - lo);
  double b = lo + phi * (hi - lo);
  double fa = lhs(a);
  double fb = lhs(b);
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * length; ++iter) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = lhs(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = lhs(a);
    }
  }
  const double z_star = 0.5 * (lo + hi);
  const double v_star = lhs(z_star);
  if (v_star > report.lhs_max) {
    report.lhs_max = v_star;
    report.worst_z = z_star;
  }
  report.margin = report.rhs / report.lhs_max;
  return report;
}

} // namespace dlambda
