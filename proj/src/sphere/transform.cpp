#include "mea/sphere/transform.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "fft/fftw_plans.hpp"
#include "mea/errors.hpp"

namespace mea::sphere {

namespace {
constexpr double kPi = std::numbers::pi;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw ContractViolation("Gauss-Legendre rule needs at least one node");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  // Roots are symmetric; solve for the positive half and mirror.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Refresh the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Ascending order in z.
    nodes[n - 1 - i] = x;
    nodes[i] = -x;
    weights[n - 1 - i] = w;
    weights[i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

double legendre_eps(int l, int m) {
  if (l <= std::abs(m)) return 0.0;
  const double ll = static_cast<double>(l) * l;
  return std::sqrt((ll - static_cast<double>(m) * m) / (4.0 * ll - 1.0));
}

SphereGrid SphereGrid::gauss(int nlat, int nlon) {
  SphereGrid g;
  g.nlat = nlat;
  g.nlon = nlon;
  gauss_legendre(nlat, g.z, g.weights);
  return g;
}

double SphereGrid::longitude(int i) const { return 2.0 * kPi * i / nlon; }

SphereTransform::SphereTransform(int lmax, int nlat, int nlon) : lmax_(lmax) {
  if (lmax < 0) throw ContractViolation("lmax must be non-negative");
  if (nlat < lmax + 1) throw ContractViolation("sphere grid needs nlat >= lmax + 1");
  if (nlon < 2 * lmax + 2 || nlon % 2 != 0)
    throw ContractViolation("sphere grid needs an even nlon >= 2 lmax + 2");
  grid_ = SphereGrid::gauss(nlat, nlon);

  m_offset_.resize(static_cast<std::size_t>(lmax + 2));
  std::size_t off = 0;
  for (int m = 0; m <= lmax; ++m) {
    m_offset_[m] = off;
    off += static_cast<std::size_t>(lmax + 1 - m) * nlat;
  }
  m_offset_[lmax + 1] = off;
  pbar_.assign(off, 0.0);
  dpbar_.assign(off, 0.0);

  // Normalized associated Legendre functions by the standard three-term
  // recurrence in l at fixed m, carried one degree past lmax for the
  // derivative identity.
  std::vector<double> p(static_cast<std::size_t>(lmax + 3));
  for (int j = 0; j < nlat; ++j) {
    const double z = grid_.z[j];
    const double s = std::sqrt((1.0 - z) * (1.0 + z));
    double pmm = 1.0 / std::sqrt(2.0);
    for (int m = 0; m <= lmax; ++m) {
      if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
      p[m] = pmm;
      double prev = 0.0;
      for (int l = m; l <= lmax; ++l) {
        const double next = (z * p[l] - legendre_eps(l, m) * prev) / legendre_eps(l + 1, m);
        prev = p[l];
        p[l + 1] = next;
      }
      for (int l = m; l <= lmax; ++l) {
        const std::size_t at = m_offset_[m] + static_cast<std::size_t>(l - m) * nlat + j;
        pbar_[at] = p[l];
        const double below = l > m ? p[l - 1] : 0.0;
        dpbar_[at] = (l + 1.0) * legendre_eps(l, m) * below - l * legendre_eps(l + 1, m) * p[l + 1];
      }
    }
  }
}

std::shared_ptr<const SphereTransform> SphereTransform::cached(int lmax, int nlat, int nlon) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const SphereTransform>> cache;
  const auto key = std::make_tuple(lmax, nlat, nlon);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto t = std::make_shared<const SphereTransform>(lmax, nlat, nlon);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(t)).first->second;
}

std::shared_ptr<const SphereTransform> SphereTransform::minimal(int lmax) {
  return cached(lmax, lmax + 1, fft::good_size(2 * lmax + 2));
}

std::shared_ptr<const SphereTransform> SphereTransform::padded(int lmax) {
  return cached(lmax, (3 * lmax + 1) / 2 + 1, fft::good_size(std::max(3 * lmax + 1, 2 * lmax + 2)));
}

const double* SphereTransform::row(Table t, int l, int m) const {
  const std::size_t at = m_offset_[m] + static_cast<std::size_t>(l - m) * grid_.nlat;
  return (t == Table::value ? pbar_.data() : dpbar_.data()) + at;
}

std::vector<double> SphereTransform::synthesize(const SphereField& f, Table table) const {
  if (f.lmax != lmax_) throw ContractViolation("field truncation does not match the transform");
  const int nlat = grid_.nlat, nlon = grid_.nlon, nspec = nlon / 2 + 1;
  const double c0 = 1.0 / std::sqrt(2.0 * kPi);
  const double cm = 0.5 / std::sqrt(kPi);

  // Legendre sums per order: spec[j][m] holds the longitude spectrum of row j.
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(nlat) * nspec);
  std::vector<double> ac(static_cast<std::size_t>(nlat)), as(static_cast<std::size_t>(nlat));
  for (int m = 0; m <= lmax_; ++m) {
    std::fill(ac.begin(), ac.end(), 0.0);
    std::fill(as.begin(), as.end(), 0.0);
    for (int l = m; l <= lmax_; ++l) {
      const double a = f.get(l, m);
      const double b = m > 0 ? f.get(l, -m) : 0.0;
      if (a == 0.0 && b == 0.0) continue;
      const double* P = row(table, l, m);
      for (int j = 0; j < nlat; ++j) {
        ac[j] += a * P[j];
        as[j] += b * P[j];
      }
    }
    for (int j = 0; j < nlat; ++j)
      spec[static_cast<std::size_t>(j) * nspec + m] =
          m == 0 ? std::complex<double>(c0 * ac[j], 0.0) : cm * std::complex<double>(ac[j], -as[j]);
  }

  std::vector<double> out(grid_.points());
  for (int j = 0; j < nlat; ++j)
    fft::c2r_1d(nlon, std::span<const std::complex<double>>(spec.data() + static_cast<std::size_t>(j) * nspec, nspec),
                std::span<double>(out.data() + static_cast<std::size_t>(j) * nlon, nlon));
  if (table == Table::dz)
    for (int j = 0; j < nlat; ++j) {
      const double inv = 1.0 / ((1.0 - grid_.z[j]) * (1.0 + grid_.z[j]));
      for (int i = 0; i < nlon; ++i) out[static_cast<std::size_t>(j) * nlon + i] *= inv;
    }
  return out;
}

std::vector<double> SphereTransform::synthesis(const SphereField& f) const {
  return synthesize(f, Table::value);
}

std::vector<double> SphereTransform::synthesis_dz(const SphereField& f) const {
  return synthesize(f, Table::dz);
}

SphereField SphereTransform::analysis(const std::vector<double>& values) const {
  const int nlat = grid_.nlat, nlon = grid_.nlon, nspec = nlon / 2 + 1;
  if (values.size() != grid_.points()) throw ContractViolation("grid size does not match the transform");
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(nlat) * nspec);
  for (int j = 0; j < nlat; ++j)
    fft::r2c_1d(nlon, std::span<const double>(values.data() + static_cast<std::size_t>(j) * nlon, nlon),
                std::span<std::complex<double>>(spec.data() + static_cast<std::size_t>(j) * nspec, nspec));

  SphereField out = SphereField::zeros(lmax_);
  const double dlam = 2.0 * kPi / nlon;
  const double c0 = dlam / std::sqrt(2.0 * kPi);
  const double cm = dlam / std::sqrt(kPi);
  std::vector<double> wc(static_cast<std::size_t>(nlat)), ws(static_cast<std::size_t>(nlat));
  for (int m = 0; m <= lmax_; ++m) {
    for (int j = 0; j < nlat; ++j) {
      const std::complex<double> F = spec[static_cast<std::size_t>(j) * nspec + m];
      const double w = grid_.weights[j];
      wc[j] = w * (m == 0 ? c0 : cm) * F.real();
      ws[j] = -w * cm * F.imag();
    }
    for (int l = m; l <= lmax_; ++l) {
      const double* P = row(Table::value, l, m);
      double a = 0.0, b = 0.0;
      for (int j = 0; j < nlat; ++j) {
        a += P[j] * wc[j];
        b += P[j] * ws[j];
      }
      out.set(l, m, a);
      if (m > 0) out.set(l, -m, b);
    }
  }
  return out;
}

SphereField dlambda(const SphereField& f) {
  SphereField out = SphereField::zeros(f.lmax);
  for (int m = 1; m <= f.lmax; ++m)
    for (int l = m; l <= f.lmax; ++l) {
      // d/dlambda (a cos m lambda + b sin m lambda) = m b cos - m a sin
      out.set(l, m, m * f.get(l, -m));
      out.set(l, -m, -m * f.get(l, m));
    }
  return out;
}

}  // namespace mea::sphere
