#pragma once

#include <memory>
#include <vector>

#include "mea/sphere/sphere_field.hpp"

namespace mea::sphere {

/// Gauss-Legendre latitudes times uniform longitudes.
struct SphereGrid {
  int nlat = 0;
  int nlon = 0;
  std::vector<double> z;        // Gauss-Legendre nodes in (-1, 1)
  std::vector<double> weights;  // sum to 2

  static SphereGrid gauss(int nlat, int nlon);
  double longitude(int i) const;
  std::size_t points() const { return static_cast<std::size_t>(nlat) * nlon; }
};

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Recurrence coefficient eps_lm = sqrt((l^2 - m^2) / (4 l^2 - 1)), so that
/// z Pbar_lm = eps_{l+1,m} Pbar_{l+1,m} + eps_lm Pbar_{l-1,m}.
double legendre_eps(int l, int m);

/// Spherical-harmonic analysis/synthesis for one truncation on one grid.
/// Grid values are stored latitude-major: value(j, i) = data[j * nlon + i].
class SphereTransform {
 public:
  SphereTransform(int lmax, int nlat, int nlon);

  /// Smallest grid exact for analysis of band-limited fields.
  static std::shared_ptr<const SphereTransform> minimal(int lmax);
  /// 3/2-padded grid exact for the analysis of quadratic products.
  static std::shared_ptr<const SphereTransform> padded(int lmax);
  /// Shared instance for (lmax, nlat, nlon).
  static std::shared_ptr<const SphereTransform> cached(int lmax, int nlat, int nlon);

  int lmax() const { return lmax_; }
  const SphereGrid& grid() const { return grid_; }

  std::vector<double> synthesis(const SphereField& f) const;
  /// d/dz f at the grid nodes, from (1 - z^2) dPbar/dz recurrences.
  std::vector<double> synthesis_dz(const SphereField& f) const;
  SphereField analysis(const std::vector<double>& values) const;

 private:
  enum class Table { value, dz };
  std::vector<double> synthesize(const SphereField& f, Table table) const;
  const double* row(Table t, int l, int m) const;

  int lmax_;
  SphereGrid grid_;
  std::vector<std::size_t> m_offset_;
  std::vector<double> pbar_;   // Pbar_lm(z_j), l = m..lmax
  std::vector<double> dpbar_;  // (1 - z_j^2) dPbar_lm/dz
};

/// d/dlambda in coefficient space.
SphereField dlambda(const SphereField& f);

}  // namespace mea::sphere
