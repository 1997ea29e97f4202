#include "mea/circle/fourier1d.hpp"

#include <cmath>

#include "../fft/fftw_plans.hpp"
#include "mea/errors.hpp"

namespace mea::circle {

using cplx = std::complex<double>;

Fourier1DField Fourier1DField::zeros(int K, double period) {
  if (K < 0) throw ContractViolation("truncation K must be non-negative");
  if (!(period > 0.0)) throw ContractViolation("period must be positive");
  Fourier1DField f;
  f.coeffs.assign(static_cast<std::size_t>(K) + 1, cplx{});
  f.period = period;
  return f;
}

cplx Fourier1DField::coeff(int k) const {
  const int ak = std::abs(k);
  if (ak > K()) return {};
  return k >= 0 ? coeffs[ak] : std::conj(coeffs[ak]);
}

void Fourier1DField::set(int k, cplx c) {
  if (std::abs(k) > K()) throw ContractViolation("mode outside truncation");
  if (k == 0)
    coeffs[0] = {c.real(), 0.0};
  else if (k > 0)
    coeffs[k] = c;
  else
    coeffs[-k] = std::conj(c);
}

int Fourier1DField::bandwidth(double tol) const {
  for (int k = K(); k > 0; --k)
    if (std::abs(coeffs[k]) > tol) return k;
  return 0;
}

Vec Fourier1DField::to_real() const {
  Vec v(real_dim(K()));
  v[0] = coeffs[0].real();
  for (int k = 1; k <= K(); ++k) {
    v[2 * k - 1] = coeffs[k].real();
    v[2 * k] = coeffs[k].imag();
  }
  return v;
}

Fourier1DField Fourier1DField::from_real(ConstView v, double period) {
  if (v.size() % 2 != 1) throw ContractViolation("circle coordinates must have odd length");
  const int K = static_cast<int>(v.size() / 2);
  Fourier1DField f = zeros(K, period);
  f.coeffs[0] = {v[0], 0.0};
  for (int k = 1; k <= K; ++k) f.coeffs[k] = {v[2 * k - 1], v[2 * k]};
  return f;
}

std::vector<double> Fourier1DField::to_grid(int M) const {
  if (M < 2 * K() + 1) throw ContractViolation("grid too coarse for truncation");
  std::vector<cplx> spec(static_cast<std::size_t>(M / 2) + 1, cplx{});
  spec[0] = {coeffs[0].real(), 0.0};
  for (int k = 1; k <= K(); ++k) spec[k] = coeffs[k];
  std::vector<double> out(static_cast<std::size_t>(M));
  fft::c2r_1d(M, spec, out);
  return out;
}

Fourier1DField Fourier1DField::from_grid(const std::vector<double>& values, int K,
                                         double period) {
  const int M = static_cast<int>(values.size());
  if (M < 2 * K + 1) throw ContractViolation("grid too coarse for truncation");
  std::vector<cplx> spec(static_cast<std::size_t>(M / 2) + 1);
  fft::r2c_1d(M, values, spec);
  Fourier1DField f = zeros(K, period);
  const double inv = 1.0 / M;
  f.coeffs[0] = {spec[0].real() * inv, 0.0};
  for (int k = 1; k <= K; ++k) f.coeffs[k] = spec[k] * inv;
  return f;
}

double Fourier1DField::evaluate(double x) const {
  double s = coeffs[0].real();
  for (int k = 1; k <= K(); ++k) {
    const double th = wavenumber(k) * x;
    s += 2.0 * (coeffs[k].real() * std::cos(th) - coeffs[k].imag() * std::sin(th));
  }
  return s;
}

int product_grid_size(int K, bool dealias) {
  return fft::good_size(dealias ? 3 * K + 1 : 2 * K + 1);
}

Fourier1DField derivative(const Fourier1DField& f, int order) {
  if (order < 1) throw ContractViolation("derivative order must be positive");
  Fourier1DField out = f;
  out.coeffs[0] = {};
  static const cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int k = 1; k <= f.K(); ++k) {
    double kn = 1.0;
    for (int p = 0; p < order; ++p) kn *= f.wavenumber(k);
    out.coeffs[k] *= kn * i_pow[order % 4];
  }
  return out;
}

namespace {

void require_compatible(const Fourier1DField& f, const Fourier1DField& g) {
  if (f.K() != g.K() || f.period != g.period)
    throw ContractViolation("fields have different truncation or period");
}

}  // namespace

Fourier1DField multiply(const Fourier1DField& f, const Fourier1DField& g, bool dealias) {
  require_compatible(f, g);
  const int M = product_grid_size(f.K(), dealias);
  std::vector<double> a = f.to_grid(M);
  const std::vector<double> b = g.to_grid(M);
  for (int j = 0; j < M; ++j) a[j] *= b[j];
  return Fourier1DField::from_grid(a, f.K(), f.period);
}

Fourier1DField operator+(const Fourier1DField& a, const Fourier1DField& b) {
  require_compatible(a, b);
  Fourier1DField out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
  return out;
}

Fourier1DField operator-(const Fourier1DField& a, const Fourier1DField& b) {
  require_compatible(a, b);
  Fourier1DField out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
  return out;
}

Fourier1DField operator*(double s, const Fourier1DField& a) {
  Fourier1DField out = a;
  for (auto& c : out.coeffs) c *= s;
  return out;
}

double l2_pairing(const Fourier1DField& f, const Fourier1DField& g) {
  require_compatible(f, g);
  double s = f.coeffs[0].real() * g.coeffs[0].real();
  for (int k = 1; k <= f.K(); ++k) s += 2.0 * std::real(f.coeffs[k] * std::conj(g.coeffs[k]));
  return f.period * s;
}

}  // namespace mea::circle
