#include "mea/torus/fourier3d.hpp"

#include <cmath>
#include <numbers>

#include "fft/fftw_plans.hpp"
#include "mea/errors.hpp"

namespace mea::torus {

namespace {

constexpr double kVolume = 8.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi;

void require_same(const Fourier3DVectorField& a, const Fourier3DVectorField& b) {
  if (a.K != b.K) throw ContractViolation("torus fields have different truncations");
}

template <typename F>
void for_each_mode(int K, F&& f) {
  std::size_t i = 0;
  for (int kx = -K; kx <= K; ++kx)
    for (int ky = -K; ky <= K; ++ky)
      for (int kz = 0; kz <= K; ++kz) f(i++, kx, ky, kz);
}

// Weight of a stored entry in sums over the full spectrum.
inline double plane_weight(int kz) { return kz == 0 ? 1.0 : 2.0; }

}  // namespace

Fourier3DScalarField Fourier3DScalarField::zeros(int K) {
  if (K < 1) throw ContractViolation("torus truncation K must be positive");
  return Fourier3DScalarField{K, std::vector<cplx>(size(K))};
}

cplx Fourier3DScalarField::coeff(int kx, int ky, int kz) const {
  if (std::abs(kx) > K || std::abs(ky) > K || std::abs(kz) > K) return {};
  if (kz < 0) return std::conj(c[index(K, -kx, -ky, -kz)]);
  return c[index(K, kx, ky, kz)];
}

double Fourier3DScalarField::max_abs() const {
  double m = 0.0;
  for (const cplx& x : c) m = std::max(m, std::abs(x));
  return m;
}

Fourier3DVectorField Fourier3DVectorField::zeros(int K) {
  if (K < 1) throw ContractViolation("torus truncation K must be positive");
  Fourier3DVectorField u;
  u.K = K;
  for (auto& comp : u.c) comp.assign(Fourier3DScalarField::size(K), cplx{});
  return u;
}

cplx Fourier3DVectorField::coeff(int comp, int kx, int ky, int kz) const {
  if (std::abs(kx) > K || std::abs(ky) > K || std::abs(kz) > K) return {};
  if (kz < 0) return std::conj(c[comp][Fourier3DScalarField::index(K, -kx, -ky, -kz)]);
  return c[comp][Fourier3DScalarField::index(K, kx, ky, kz)];
}

Vec Fourier3DVectorField::to_real() const {
  Vec out;
  out.reserve(real_dim(K));
  for (const auto& comp : c)
    for (const cplx& x : comp) {
      out.push_back(x.real());
      out.push_back(x.imag());
    }
  return out;
}

Fourier3DVectorField Fourier3DVectorField::from_real(ConstView v, int K) {
  if (v.size() != real_dim(K))
    throw ContractViolation("torus state has " + std::to_string(v.size()) + " coordinates, expected " +
                            std::to_string(real_dim(K)));
  Fourier3DVectorField u = zeros(K);
  std::size_t p = 0;
  for (auto& comp : u.c)
    for (cplx& x : comp) {
      x = {v[p], v[p + 1]};
      p += 2;
    }
  return u;
}

double Fourier3DVectorField::coeff_norm() const {
  double s = 0.0;
  for (const auto& comp : c)
    for_each_mode(K, [&](std::size_t i, int, int, int kz) { s += plane_weight(kz) * std::norm(comp[i]); });
  return std::sqrt(s);
}

void Fourier3DVectorField::symmetrize() {
  for (auto& comp : c) {
    for (int kx = -K; kx <= K; ++kx)
      for (int ky = -K; ky <= K; ++ky) {
        // Keep the half with (kx, ky) lexicographically positive.
        if (kx < 0 || (kx == 0 && ky < 0)) {
          comp[Fourier3DScalarField::index(K, kx, ky, 0)] =
              std::conj(comp[Fourier3DScalarField::index(K, -kx, -ky, 0)]);
        }
      }
    cplx& mean = comp[Fourier3DScalarField::index(K, 0, 0, 0)];
    mean = {mean.real(), 0.0};
  }
}

Fourier3DVectorField& Fourier3DVectorField::operator+=(const Fourier3DVectorField& o) {
  require_same(*this, o);
  for (int d = 0; d < 3; ++d)
    for (std::size_t i = 0; i < c[d].size(); ++i) c[d][i] += o.c[d][i];
  return *this;
}

Fourier3DVectorField& Fourier3DVectorField::operator-=(const Fourier3DVectorField& o) {
  require_same(*this, o);
  for (int d = 0; d < 3; ++d)
    for (std::size_t i = 0; i < c[d].size(); ++i) c[d][i] -= o.c[d][i];
  return *this;
}

Fourier3DVectorField& Fourier3DVectorField::operator*=(double s) {
  for (auto& comp : c)
    for (cplx& x : comp) x *= s;
  return *this;
}

Fourier3DVectorField operator+(Fourier3DVectorField a, const Fourier3DVectorField& b) { return a += b; }
Fourier3DVectorField operator-(Fourier3DVectorField a, const Fourier3DVectorField& b) { return a -= b; }
Fourier3DVectorField operator*(double s, Fourier3DVectorField a) { return a *= s; }

int product_grid_size(int K, bool dealias) {
  return fft::good_size(dealias ? 3 * K + 1 : 2 * K + 2);
}

std::vector<double> synthesize(const Fourier3DScalarField& f, int n) {
  const int K = f.K;
  if (n < 2 * K + 2) throw ContractViolation("grid too coarse for the truncation");
  const int nz = n / 2 + 1;
  std::vector<cplx> spec(static_cast<std::size_t>(n) * n * nz);
  for_each_mode(K, [&](std::size_t i, int kx, int ky, int kz) {
    const std::size_t ix = static_cast<std::size_t>((kx + n) % n);
    const std::size_t iy = static_cast<std::size_t>((ky + n) % n);
    spec[(ix * n + iy) * nz + kz] = f.c[i];
  });
  std::vector<double> out(static_cast<std::size_t>(n) * n * n);
  fft::c2r_3d(n, spec, out);
  return out;
}

Fourier3DScalarField analyze(const std::vector<double>& values, int n, int K) {
  if (values.size() != static_cast<std::size_t>(n) * n * n) throw ContractViolation("grid size mismatch");
  if (n < 2 * K + 2) throw ContractViolation("grid too coarse for the truncation");
  const int nz = n / 2 + 1;
  std::vector<cplx> spec(static_cast<std::size_t>(n) * n * nz);
  fft::r2c_3d(n, values, spec);
  const double scale = 1.0 / (static_cast<double>(n) * n * n);
  Fourier3DScalarField f = Fourier3DScalarField::zeros(K);
  for_each_mode(K, [&](std::size_t i, int kx, int ky, int kz) {
    const std::size_t ix = static_cast<std::size_t>((kx + n) % n);
    const std::size_t iy = static_cast<std::size_t>((ky + n) % n);
    f.c[i] = scale * spec[(ix * n + iy) * nz + kz];
  });
  return f;
}

GridVectorField synthesize(const Fourier3DVectorField& u, int n) {
  GridVectorField g;
  g.n = n;
  for (int d = 0; d < 3; ++d) g.v[d] = synthesize(Fourier3DScalarField{u.K, u.c[d]}, n);
  return g;
}

Fourier3DVectorField analyze(const GridVectorField& g, int K) {
  Fourier3DVectorField u;
  u.K = K;
  for (int d = 0; d < 3; ++d) u.c[d] = analyze(g.v[d], g.n, K).c;
  return u;
}

double l2_inner3d(const Fourier3DVectorField& u, const Fourier3DVectorField& v) {
  require_same(u, v);
  double s = 0.0;
  for (int d = 0; d < 3; ++d)
    for_each_mode(u.K, [&](std::size_t i, int, int, int kz) {
      s += plane_weight(kz) * std::real(u.c[d][i] * std::conj(v.c[d][i]));
    });
  return kVolume * s;
}

double energy3d(const Fourier3DVectorField& u) { return 0.5 * l2_inner3d(u, u); }

Fourier3DVectorField leray_project(const Fourier3DVectorField& v) {
  Fourier3DVectorField out = v;
  for_each_mode(v.K, [&](std::size_t i, int kx, int ky, int kz) {
    const double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky + static_cast<double>(kz) * kz;
    if (k2 == 0.0) return;
    const cplx kv = static_cast<double>(kx) * v.c[0][i] + static_cast<double>(ky) * v.c[1][i] +
                    static_cast<double>(kz) * v.c[2][i];
    const cplx s = kv / k2;
    out.c[0][i] -= static_cast<double>(kx) * s;
    out.c[1][i] -= static_cast<double>(ky) * s;
    out.c[2][i] -= static_cast<double>(kz) * s;
  });
  return out;
}

Fourier3DVectorField curl(const Fourier3DVectorField& u) {
  Fourier3DVectorField w = Fourier3DVectorField::zeros(u.K);
  const cplx I(0.0, 1.0);
  for_each_mode(u.K, [&](std::size_t i, int kx, int ky, int kz) {
    w.c[0][i] = I * (static_cast<double>(ky) * u.c[2][i] - static_cast<double>(kz) * u.c[1][i]);
    w.c[1][i] = I * (static_cast<double>(kz) * u.c[0][i] - static_cast<double>(kx) * u.c[2][i]);
    w.c[2][i] = I * (static_cast<double>(kx) * u.c[1][i] - static_cast<double>(ky) * u.c[0][i]);
  });
  return w;
}

Fourier3DScalarField divergence(const Fourier3DVectorField& u) {
  Fourier3DScalarField f = Fourier3DScalarField::zeros(u.K);
  const cplx I(0.0, 1.0);
  for_each_mode(u.K, [&](std::size_t i, int kx, int ky, int kz) {
    f.c[i] = I * (static_cast<double>(kx) * u.c[0][i] + static_cast<double>(ky) * u.c[1][i] +
                  static_cast<double>(kz) * u.c[2][i]);
  });
  return f;
}

double divergence_max(const Fourier3DVectorField& u) { return divergence(u).max_abs(); }

Fourier3DVectorField gradient(const Fourier3DScalarField& f) {
  Fourier3DVectorField g = Fourier3DVectorField::zeros(f.K);
  const cplx I(0.0, 1.0);
  for_each_mode(f.K, [&](std::size_t i, int kx, int ky, int kz) {
    g.c[0][i] = I * static_cast<double>(kx) * f.c[i];
    g.c[1][i] = I * static_cast<double>(ky) * f.c[i];
    g.c[2][i] = I * static_cast<double>(kz) * f.c[i];
  });
  return g;
}

GridVectorField cross(const GridVectorField& a, const GridVectorField& b) {
  if (a.n != b.n) throw ContractViolation("cross: grids differ");
  GridVectorField out;
  out.n = a.n;
  const std::size_t N = a.v[0].size();
  for (auto& comp : out.v) comp.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    out.v[0][i] = a.v[1][i] * b.v[2][i] - a.v[2][i] * b.v[1][i];
    out.v[1][i] = a.v[2][i] * b.v[0][i] - a.v[0][i] * b.v[2][i];
    out.v[2][i] = a.v[0][i] * b.v[1][i] - a.v[1][i] * b.v[0][i];
  }
  return out;
}

}  // namespace mea::torus
