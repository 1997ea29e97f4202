#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mea/app/random_fields.hpp"
#include "mea/core/identities.hpp"
#include "mea/core/integrators.hpp"
#include "mea/errors.hpp"
#include "mea/torus/ic.hpp"
#include "support/test_helpers.hpp"

using namespace mea;
using namespace mea::torus;
constexpr double pi = std::numbers::pi;

namespace {

// Adds c e^{ik.x} + conj(c) e^{-ik.x} to component `comp`.
void add_mode(Fourier3DVectorField& u, int comp, int kx, int ky, int kz, cplx c) {
  if (kz < 0 || (kz == 0 && (kx < 0 || (kx == 0 && ky < 0)))) {
    kx = -kx, ky = -ky, kz = -kz;
    c = std::conj(c);
  }
  u.at(comp, kx, ky, kz) += c;
  if (kz == 0) u.at(comp, -kx, -ky, 0) += std::conj(c);
}

// sin(k.x) = (e^{ik.x} - e^{-ik.x}) / 2i, cos(k.x) likewise.
void add_sin(Fourier3DVectorField& u, int comp, int kx, int ky, int kz, double amp = 1.0) {
  add_mode(u, comp, kx, ky, kz, cplx(0.0, -0.5 * amp));
}
void add_cos(Fourier3DVectorField& u, int comp, int kx, int ky, int kz, double amp = 1.0) {
  add_mode(u, comp, kx, ky, kz, cplx(0.5 * amp, 0.0));
}

double max_diff(const Fourier3DVectorField& a, const Fourier3DVectorField& b) {
  double m = 0.0;
  for (int d = 0; d < 3; ++d)
    for (std::size_t i = 0; i < a.c[d].size(); ++i) m = std::max(m, std::abs(a.c[d][i] - b.c[d][i]));
  return m;
}

}  // namespace

TEST_CASE("torus field layout and grid round trip") {
  std::mt19937_64 rng(31);
  const Fourier3DVectorField u = app::random_torus(4, 4, rng);
  const Vec r = u.to_real();
  CHECK(r.size() == Fourier3DVectorField::real_dim(4));
  CHECK(max_diff(Fourier3DVectorField::from_real(r, 4), u) == 0.0);
  CHECK(max_diff(analyze(synthesize(u, 10), 4), u) < 1e-14);
  CHECK(u.coeff(1, 2, -1, -3) == std::conj(u.coeff(1, -2, 1, 3)));
  CHECK_THROWS_AS(synthesize(u, 9), ContractViolation);
}

TEST_CASE("energy3d and Parseval") {
  const int K = 4;
  Fourier3DVectorField u = Fourier3DVectorField::zeros(K);
  CHECK(energy3d(u) == 0.0);
  add_sin(u, 0, 0, 0, 1);
  CHECK(energy3d(u) == doctest::Approx(2.0 * pi * pi * pi).epsilon(1e-14));

  std::mt19937_64 rng(32);
  const Fourier3DVectorField v = app::random_torus(K, K, rng);
  const int n = 12;
  const GridVectorField g = synthesize(v, n);
  double s = 0.0;
  for (int d = 0; d < 3; ++d)
    for (double x : g.v[d]) s += x * x;
  const double grid_energy = 0.5 * s * std::pow(2.0 * pi / n, 3);
  CHECK(grid_energy == doctest::Approx(energy3d(v)).epsilon(1e-12));
}

TEST_CASE("Leray projection") {
  const int K = 4;
  Fourier3DVectorField grad = Fourier3DVectorField::zeros(K);
  add_cos(grad, 0, 1, 0, 0);  // grad sin x
  CHECK(leray_project(grad).coeff_norm() == 0.0);

  Fourier3DVectorField shear = Fourier3DVectorField::zeros(K);
  add_sin(shear, 0, 0, 1, 0);
  CHECK(max_diff(leray_project(shear), shear) == 0.0);

  std::mt19937_64 rng(33);
  Fourier3DVectorField v = Fourier3DVectorField::zeros(K);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int d = 0; d < 3; ++d)
    for (auto& c : v.c[d]) c = {n(rng), n(rng)};
  v.symmetrize();
  const Fourier3DVectorField p = leray_project(v);
  CHECK(std::abs(l2_inner3d(p, v - p)) < 1e-12 * l2_inner3d(v, v));
  CHECK(max_diff(leray_project(p), p) < 1e-15);
  CHECK(divergence_max(p) < 1e-13);
  const Fourier3DVectorField w = app::random_torus(K, K, rng) + v;
  CHECK(l2_inner3d(leray_project(v), w) == doctest::Approx(l2_inner3d(v, leray_project(w))).epsilon(1e-12));
}

TEST_CASE("cross product on the grid") {
  const int n = 8;
  const std::size_t N = n * n * n;
  GridVectorField ex{n, {std::vector<double>(N, 1.0), std::vector<double>(N, 0.0), std::vector<double>(N, 0.0)}};
  GridVectorField ey{n, {std::vector<double>(N, 0.0), std::vector<double>(N, 1.0), std::vector<double>(N, 0.0)}};
  const GridVectorField ez = cross(ex, ey);
  for (std::size_t i = 0; i < N; i += 37) {
    CHECK(ez.v[0][i] == 0.0);
    CHECK(ez.v[1][i] == 0.0);
    CHECK(ez.v[2][i] == 1.0);
  }
  std::mt19937_64 rng(34);
  const GridVectorField r = synthesize(app::random_torus(3, 3, rng), n);
  const GridVectorField rr = cross(r, r);
  for (int d = 0; d < 3; ++d)
    for (double x : rr.v[d]) CHECK(x == 0.0);

  // (0, 0, b) x (f(z), 0, 0) = (0, b f(z), 0)
  Fourier3DVectorField fz = Fourier3DVectorField::zeros(3), bz = Fourier3DVectorField::zeros(3);
  add_sin(fz, 0, 0, 0, 2, 0.7);
  bz.at(2, 0, 0, 0) = 1.5;
  const GridVectorField c = cross(synthesize(bz, n), synthesize(fz, n));
  const GridVectorField f = synthesize(fz, n);
  for (std::size_t i = 0; i < N; ++i) {
    CHECK(c.v[0][i] == doctest::Approx(0.0));
    CHECK(c.v[1][i] == doctest::Approx(1.5 * f.v[0][i]).epsilon(1e-14));
    CHECK(c.v[2][i] == doctest::Approx(0.0));
  }
}

TEST_CASE("curl and divergence") {
  const int K = 4;
  std::mt19937_64 rng(35);
  Fourier3DScalarField phi = Fourier3DScalarField::zeros(K);
  {
    const Fourier3DVectorField r = app::random_torus(K, K, rng);
    phi.c = r.c[0];
  }
  CHECK(curl(gradient(phi)).coeff_norm() < 1e-13);
  CHECK(divergence(curl(app::random_torus(K, K, rng))).max_abs() < 1e-13);

  Fourier3DVectorField u = Fourier3DVectorField::zeros(K), expect = Fourier3DVectorField::zeros(K);
  add_sin(u, 0, 0, 0, 1);
  add_cos(expect, 1, 0, 0, 1);
  CHECK(max_diff(curl(u), expect) < 1e-16);
}

TEST_CASE("rotational nonlinearity") {
  const int K = 6;
  Fourier3DVectorField shear = Fourier3DVectorField::zeros(K);
  add_sin(shear, 0, 0, 0, 1);
  add_cos(shear, 0, 0, 0, 3, 0.4);
  CHECK(nonlinear_rotational(shear).coeff_norm() < 1e-12);

  // Taylor-Green type field
  Fourier3DVectorField tg = Fourier3DVectorField::zeros(K);
  // sin x cos y = (sin(x+y) + sin(x-y)) / 2
  add_sin(tg, 0, 1, 1, 0, 0.5);
  add_sin(tg, 0, 1, -1, 0, 0.5);
  // -cos x sin y = -(sin(x+y) - sin(x-y)) / 2
  add_sin(tg, 1, 1, 1, 0, -0.5);
  add_sin(tg, 1, 1, -1, 0, 0.5);
  CHECK(divergence_max(tg) < 1e-15);
  CHECK(max_diff(nonlinear_rotational(tg), nonlinear_convective(tg)) < 1e-11);

  std::mt19937_64 rng(36);
  const Fourier3DVectorField u = app::random_torus(K, 3, rng);
  CHECK(max_diff(nonlinear_rotational(u), nonlinear_convective(u)) < 1e-11 * u.coeff_norm() * u.coeff_norm());
  CHECK(std::abs(l2_inner3d(nonlinear_rotational(u), u)) < 1e-11 * l2_inner3d(u, u));
  CHECK(divergence_max(nonlinear_rotational(u)) < 1e-12);

  Fourier3DVectorField bad = Fourier3DVectorField::zeros(K);
  add_cos(bad, 0, 1, 0, 0);
  CHECK_THROWS_AS(nonlinear_rotational(bad), ContractViolation);
}

TEST_CASE("infinite-conductivity right-hand side") {
  const int K = 4;
  ICConfig cfg;
  cfg.K = K;
  cfg.B = {0.0, 0.0, 1.0};
  cfg.a = 1.0;
  Fourier3DVectorField u = Fourier3DVectorField::zeros(K), expect = Fourier3DVectorField::zeros(K);
  add_sin(u, 0, 0, 0, 1);
  add_sin(expect, 1, 0, 0, 1, -1.0);
  CHECK(max_diff(ic_rhs(u, cfg), expect) < 1e-15);

  ICConfig euler = cfg;
  euler.a = 0.0;
  CHECK(ic_rhs(u, euler).coeff_norm() < 1e-13);

  std::mt19937_64 rng(37);
  cfg.B = {0.3, -1.2, 0.8};
  cfg.a = 1.7;
  const Fourier3DVectorField v = app::random_torus(K, 3, rng);
  CHECK(std::abs(l2_inner3d(ic_rhs(v, cfg), v)) < 1e-11 * l2_inner3d(v, v));
  CHECK(std::abs(l2_inner3d(lorentz_ic(v, cfg), v)) < 1e-12 * l2_inner3d(v, v));
  const Fourier3DVectorField diff = ic_rhs(v, cfg) - euler_rhs(v);
  CHECK(max_diff(diff, -cfg.a * lorentz_ic(v, cfg)) < 1e-13 * diff.coeff_norm());
  CHECK(divergence_max(ic_rhs(v, cfg)) < 1e-12);

  // Mean flow is left alone for constant B and mean-free u.
  for (int d = 0; d < 3; ++d) CHECK(std::abs(ic_rhs(v, cfg).c[d][Fourier3DScalarField::index(K, 0, 0, 0)]) < 1e-15);

  ICConfig badB = cfg;
  Fourier3DVectorField bf = Fourier3DVectorField::zeros(K);
  add_cos(bf, 0, 1, 0, 0);
  badB.B_field = bf;
  CHECK_THROWS_AS(badB.validate(), ContractViolation);
}

TEST_CASE("ic flow system identities") {
  std::mt19937_64 rng(38);
  for (bool field_B : {false, true}) {
    ICConfig cfg;
    cfg.K = 5;
    cfg.a = 0.9;
    cfg.B = {0.2, 1.0, -0.5};
    if (field_B) {
      Fourier3DVectorField b = app::random_torus(5, 2, rng);
      b.at(2, 0, 0, 0) = 0.7;
      cfg.B_field = b;
    }
    const ICSystem sys(cfg);
    for (int trial = 0; trial < 2; ++trial) {
      const Vec u = app::random_torus(5, 2, rng).to_real();
      const Vec v = app::random_torus(5, 2, rng).to_real();
      const Vec w = app::random_torus(5, 2, rng).to_real();
      CHECK(adjoint_identity_residual(sys, u, w) < 1e-10);
      const PairingResidual pr = pairing_identity_residual(sys, u, w);
      CHECK(pr.residual < 1e-10);
      CHECK(pr.sign == -1);
      CHECK(cocycle_antisymmetry_residual(sys, u, v) < 1e-12);
      CHECK(cocycle_cyclic_residual(sys, u, v, w) < 1e-11);
      CHECK(lorentz_skewness_residual(sys, u) < 1e-12);
      CHECK(lorentz_skew_adjoint_residual(sys, u, v) < 1e-12);
    }
  }
}

TEST_CASE("shear rotation under a constant field") {
  ICConfig cfg;
  cfg.K = 4;
  cfg.a = 1.3;
  cfg.B = {0.0, 0.0, 2.0};
  const ICSystem sys(cfg);
  Fourier3DVectorField u = Fourier3DVectorField::zeros(4);
  add_sin(u, 0, 0, 0, 1);
  IntegratorConfig ic;
  ic.dt = 5e-3;
  ic.t_end = 1.0;
  ic.monitor_stride = 1000;
  const Fourier3DVectorField end = sys.field(evolve(sys, u.to_real(), ic).states.back());
  // sin z has coefficient -i/2 at k = (0, 0, 1).
  const double p = -2.0 * end.coeff(0, 0, 0, 1).imag();
  const double q = -2.0 * end.coeff(1, 0, 0, 1).imag();
  const double w = cfg.a * cfg.B[2];
  CHECK(p == doctest::Approx(std::cos(w)).epsilon(1e-8));
  CHECK(q == doctest::Approx(-std::sin(w)).epsilon(1e-8));
}
