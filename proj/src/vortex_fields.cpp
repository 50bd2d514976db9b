#include "dlambda/vortex_fields.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "dlambda/errors.hpp"

namespace dlambda {

namespace {

using namespace std::complex_literals;
constexpr double two_pi = 2.0 * std::numbers::pi;

} // namespace

cplx vortex_amplitude(int l, double waist, double amplitude, double r, double phi)
{
  const double x = r / waist;
  const double radial = std::pow(x, std::abs(l)) * std::exp(-x * x);
  return amplitude * radial * std::exp(1i * (static_cast<double>(l) * phi));
}

double peak_radius(int l, double waist)
{
  return waist * std::sqrt(std::abs(l) / 2.0);
}

TransverseField::TransverseField(int l, double waist, double amplitude,
                                 const MapGrid& grid, cplx scale)
  : l_(l), waist_(waist), amplitude_(amplitude), grid_(grid), scale_(scale)
{
  spacing_ = 2.0 * grid_.extent * waist_ / static_cast<double>(grid_.n - 1);
  values_.resize(grid_.n * grid_.n);
  for (std::size_t iy = 0; iy < grid_.n; ++iy) {
    const double y = coord(iy);
    for (std::size_t ix = 0; ix < grid_.n; ++ix) {
      const double x = coord(ix);
      values_[iy * grid_.n + ix] = at(std::hypot(x, y), std::atan2(y, x));
    }
  }
}

double TransverseField::coord(std::size_t i) const
{
  return -grid_.extent * waist_ + static_cast<double>(i) * spacing_;
}

cplx TransverseField::at(double r, double phi) const
{
  return scale_ * vortex_amplitude(l_, waist_, amplitude_, r, phi);
}

cplx TransverseField::sample(double x, double y) const
{
  const double fx = (x - coord(0)) / spacing_;
  const double fy = (y - coord(0)) / spacing_;
  const double max_index = static_cast<double>(grid_.n - 1);
  if (!(fx >= 0.0 && fy >= 0.0 && fx <= max_index && fy <= max_index)) {
    throw DomainError(fmt::format("point ({}, {}) outside the map", x, y));
  }
  const auto ix = std::min(static_cast<std::size_t>(fx), grid_.n - 2);
  const auto iy = std::min(static_cast<std::size_t>(fy), grid_.n - 2);
  const double tx = fx - static_cast<double>(ix);
  const double ty = fy - static_cast<double>(iy);
  return (1 - tx) * (1 - ty) * value(ix, iy) + tx * (1 - ty) * value(ix + 1, iy) +
         (1 - tx) * ty * value(ix, iy + 1) + tx * ty * value(ix + 1, iy + 1);
}

double TransverseField::energy() const
{
  double sum = 0.0;
  for (const cplx& v : values_) {
    sum += std::norm(v);
  }
  return sum * spacing_ * spacing_;
}

TransverseField TransverseField::scaled(cplx factor) const
{
  TransverseField out = *this;
  out.scale_ *= factor;
  for (cplx& v : out.values_) {
    v *= factor;
  }
  return out;
}

TransverseField make_vortex(int l, double waist, double amplitude,
                            const MapGrid& grid)
{
  if (!(waist > 0.0) || !std::isfinite(waist)) {
    throw ValidationError(fmt::format("beam waist must be > 0, got {}", waist));
  }
  if (!(grid.extent > 0.0) || grid.n < 2) {
    throw ValidationError("map grid needs n >= 2 and a positive extent");
  }
  const double per_waist = static_cast<double>(grid.n - 1) / (2.0 * grid.extent);
  if (per_waist < 8.0) {
    throw ValidationError(fmt::format(
      "map grid resolves {:.3g} samples per waist; at least 8 are required", per_waist));
  }
  return TransverseField(l, waist, amplitude, grid);
}

WindingResult winding_number(const TransverseField& field, double radius,
                             std::size_t samples)
{
  if (samples < 8) {
    throw ValidationError("winding extraction needs at least 8 ring samples");
  }
  WindingResult out;
  double peak = 0.0;
  for (const cplx& v : field.values()) {
    peak = std::max(peak, std::abs(v));
  }
  cplx prev = field.sample(radius, 0.0);
  double ring_min = std::abs(prev);
  for (std::size_t k = 1; k <= samples; ++k) {
    const double phi = two_pi * static_cast<double>(k) / static_cast<double>(samples);
    const cplx cur = field.sample(radius * std::cos(phi), radius * std::sin(phi));
    ring_min = std::min(ring_min, std::abs(cur));
    out.total_phase += std::arg(cur * std::conj(prev));
    prev = cur;
  }
  if (peak == 0.0 || ring_min <= 1e-12 * peak) {
    out.defined = false;
    out.total_phase = 0.0;
    return out;
  }
  out.winding = static_cast<int>(std::lround(out.total_phase / two_pi));
  return out;
}

std::vector<TransversePair> propagate_transverse(const TransverseField& field,
                                                 std::span<const double> z,
                                                 std::span<const RabiPair> factors)
{
  if (z.size() != factors.size()) {
    throw ValidationError("one transfer factor pair is needed per z");
  }
  std::vector<TransversePair> out;
  out.reserve(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    out.push_back({z[i], field.scaled(factors[i].p1), field.scaled(factors[i].p2)});
  }
  return out;
}

std::string_view to_string(DiffractionStatus status)
{
  switch (status) {
  case DiffractionStatus::pass:
    return "pass";
  case DiffractionStatus::warn:
    return "warn";
  case DiffractionStatus::fail:
    return "fail";
  }
  return "unknown";
}

DiffractionCheck diffraction_check(double length, double waist, double wavelength)
{
  if (!(length > 0.0) || !(waist > 0.0) || !(wavelength > 0.0)) {
    throw ValidationError("diffraction check needs positive lengths");
  }
  DiffractionCheck c{length, waist, wavelength, length * wavelength / (waist * waist),
                     DiffractionStatus::pass};
  if (c.figure_of_merit >= std::numbers::pi) {
    c.status = DiffractionStatus::fail;
  } else if (c.figure_of_merit > 0.5) {
    c.status = DiffractionStatus::warn;
  }
  return c;
}

} // namespace dlambda
