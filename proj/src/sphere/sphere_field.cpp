#include "mea/sphere/sphere_field.hpp"

#include <cmath>
#include <numbers>

#include "mea/errors.hpp"

namespace mea::sphere {

SphereField SphereField::zeros(int lmax) {
  if (lmax < 0) throw ContractViolation("lmax must be non-negative");
  return SphereField{lmax, std::vector<double>(size(lmax), 0.0)};
}

std::size_t SphereField::index(int lmax, int l, int m) {
  const int am = std::abs(m);
  if (l < 0 || l > lmax || am > l)
    throw ContractViolation("spherical-harmonic index (" + std::to_string(l) + ", " +
                            std::to_string(m) + ") outside truncation " + std::to_string(lmax));
  if (m == 0) return static_cast<std::size_t>(l);
  const long L1 = lmax + 1;
  const long base = L1 + 2 * ((am - 1) * L1 - static_cast<long>(am) * (am - 1) / 2);
  const long col = L1 - am;
  return static_cast<std::size_t>(base + (m < 0 ? col : 0) + (l - am));
}

SphereField SphereField::retruncated(int new_lmax) const {
  SphereField out = zeros(new_lmax);
  const int lo = std::min(lmax, new_lmax);
  for (int m = -lo; m <= lo; ++m)
    for (int l = std::abs(m); l <= lo; ++l) out.set(l, m, get(l, m));
  return out;
}

double SphereField::l2_norm() const { return std::sqrt(l2_inner(*this, *this)); }

double SphereField::mean_integral() const {
  return std::sqrt(4.0 * std::numbers::pi) * coeffs[0];
}

namespace {
void require_same(const SphereField& a, const SphereField& b) {
  if (a.lmax != b.lmax || a.coeffs.size() != b.coeffs.size())
    throw ContractViolation("sphere fields have different truncations");
}
}  // namespace

SphereField& SphereField::operator+=(const SphereField& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
  return *this;
}

SphereField& SphereField::operator-=(const SphereField& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
  return *this;
}

SphereField& SphereField::operator*=(double s) {
  for (double& c : coeffs) c *= s;
  return *this;
}

SphereField operator+(SphereField a, const SphereField& b) { return a += b; }
SphereField operator-(SphereField a, const SphereField& b) { return a -= b; }
SphereField operator*(double s, SphereField a) { return a *= s; }

double l2_inner(const SphereField& f, const SphereField& g) {
  require_same(f, g);
  double s = 0.0;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) s += f.coeffs[i] * g.coeffs[i];
  return s;
}

}  // namespace mea::sphere
