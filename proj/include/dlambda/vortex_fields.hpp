#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dlambda/quantum_core.hpp"

namespace dlambda {

/// Square Cartesian sampling of [-extent w, extent w]^2.
struct MapGrid
{
  std::size_t n = 256;
  double extent = 3.0; // half-width in waists
};

/// Omega_p10 (r/w)^|l| exp(-r^2/w^2) exp(i l phi).
cplx vortex_amplitude(int l, double waist, double amplitude, double r, double phi);

/// Radius of maximal intensity, w sqrt(|l|/2).
double peak_radius(int l, double waist);

/// A vortex profile times a complex scalar, sampled on a MapGrid.
class TransverseField
{
public:
  TransverseField(int l, double waist, double amplitude, const MapGrid& grid,
                  cplx scale = 1.0);

  int winding() const noexcept { return l_; }
  double waist() const noexcept { return waist_; }
  double amplitude() const noexcept { return amplitude_; }
  cplx scale() const noexcept { return scale_; }
  const MapGrid& grid() const noexcept { return grid_; }

  std::size_t size() const noexcept { return grid_.n; }
  double spacing() const noexcept { return spacing_; }
  /// Physical coordinate of column/row index i.
  double coord(std::size_t i) const;
  /// Sample at (column ix, row iy); row-major storage, x fastest.
  cplx value(std::size_t ix, std::size_t iy) const { return values_[iy * grid_.n + ix]; }
  std::span<const cplx> values() const noexcept { return values_; }

  /// Exact evaluation of the generating profile.
  cplx at(double r, double phi) const;
  /// Bilinear interpolation of the grid samples.
  cplx sample(double x, double y) const;
  /// Sum of |field|^2 times the pixel area.
  double energy() const;

  TransverseField scaled(cplx factor) const;

private:
  int l_;
  double waist_;
  double amplitude_;
  MapGrid grid_;
  cplx scale_;
  double spacing_;
  std::vector<cplx> values_;
};

/// Throws ValidationError unless w > 0 and the grid has at least 8 samples
/// per waist.
TransverseField make_vortex(int l, double waist, double amplitude,
                            const MapGrid& grid = {});

struct WindingResult
{
  int winding = 0;
  double total_phase = 0.0; // unwrapped phase gained around the loop
  bool defined = true;      // false where the ring amplitude vanishes
};

/// Phase accumulated around an origin-centred circle, from the grid samples.
WindingResult winding_number(const TransverseField& field, double radius,
                             std::size_t samples = 720);

struct TransversePair
{
  double z = 0.0;
  TransverseField p1;
  TransverseField p2;
};

/// Both output maps are the input map times the per-z scalar factors.
std::vector<TransversePair> propagate_transverse(const TransverseField& field,
                                                 std::span<const double> z,
                                                 std::span<const RabiPair> factors);

enum class DiffractionStatus
{
  pass,
  warn,
  fail
};

std::string_view to_string(DiffractionStatus status);

/// L lambda / w^2 against the bound pi; warning above 0.5.
struct DiffractionCheck
{
  double length = 0.0;
  double waist = 0.0;
  double wavelength = 0.0;
  double figure_of_merit = 0.0;
  DiffractionStatus status = DiffractionStatus::pass;

  bool passed() const { return status != DiffractionStatus::fail; }
};

DiffractionCheck diffraction_check(double length, double waist, double wavelength);

} // namespace dlambda
