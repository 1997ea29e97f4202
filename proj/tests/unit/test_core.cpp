#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "mea/circle/circle_system.hpp"
#include "mea/core/extension.hpp"
#include "mea/core/identities.hpp"
#include "mea/core/integrators.hpp"
#include "mea/errors.hpp"
#include "support/test_helpers.hpp"

using namespace mea;
using namespace mea::circle;
constexpr double pi = std::numbers::pi;

namespace {

std::shared_ptr<const CircleSystem> make_circle(const char* preset, double a, int K) {
  return std::make_shared<CircleSystem>(CircleSystemConfig::preset(preset, a, K));
}

Vec cos_mode(int K, int k, double amp) {
  Fourier1DField f = Fourier1DField::zeros(K);
  f.set(k, {0.5 * amp, 0.0});
  return f.to_real();
}

Vec sin_mode(int K, int k, double amp) {
  Fourier1DField f = Fourier1DField::zeros(K);
  f.set(k, {0.0, -0.5 * amp});
  return f.to_real();
}

Vec add(const Vec& a, const Vec& b) {
  Vec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

}  // namespace

TEST_CASE("rhs_eulerian examples") {
  const auto kdv = make_circle("kdv", 1.7, 16);
  const Vec zero(kdv->dim(), 0.0);
  CHECK(mea::test::max_abs_diff(rhs_eulerian(*kdv, zero), zero) == 0.0);
  Vec c(kdv->dim(), 0.0);
  c[0] = 4.0;
  CHECK(mea::test::max_abs_diff(rhs_eulerian(*kdv, c), zero) == 0.0);

  std::mt19937_64 rng(11);
  const Vec u = mea::test::random_circle_field(16, 5, rng).to_real();
  const auto burgers = make_circle("burgers", 0.0, 16);
  Vec expect = burgers->adT_self(u);
  for (double& x : expect) x = -x;
  CHECK(mea::test::max_abs_diff(rhs_eulerian(*burgers, u), expect) == 0.0);

  CHECK_THROWS_AS(rhs_eulerian(*kdv, Vec(3, 0.0)), ContractViolation);
}

TEST_CASE("rhs_momentum examples") {
  const auto kdv = make_circle("kdv", 0.9, 16);
  const Vec zero(kdv->dim(), 0.0);
  CHECK(mea::test::max_abs_diff(rhs_momentum(*kdv, zero), zero) == 0.0);

  const double eps = 0.2, a = 0.9;
  const int k = 3;
  const Vec m = kdv->apply_inertia(cos_mode(16, k, eps));
  const Vec expect = add(sin_mode(16, k, a * eps * k * k * k), sin_mode(16, 2 * k, 1.5 * eps * eps * k));
  CHECK(mea::test::max_abs_diff(rhs_momentum(*kdv, m), expect) < 1e-13);

  const auto gch = make_circle("gch", 0.9, 16);
  Vec c(gch->dim(), 0.0);
  c[0] = 1.0;
  CHECK(mea::test::max_abs_diff(rhs_momentum(*gch, gch->apply_inertia(c)), zero) == 0.0);
}

TEST_CASE("energy examples") {
  CircleSystemConfig cfg;
  cfg.K = 4;
  const CircleSystem l2(cfg);
  CHECK(energy(l2, Vec(l2.dim(), 0.0)) == 0.0);
  CHECK(energy(l2, sin_mode(4, 1, 1.0)) == doctest::Approx(pi / 2).epsilon(1e-15));
  cfg.beta = 1.0;
  const CircleSystem h1(cfg);
  CHECK(energy(h1, sin_mode(4, 1, 1.0)) == doctest::Approx(pi).epsilon(1e-15));
}

TEST_CASE("rk4 on the scalar linear test problem") {
  const double lambda = -0.8, dt = 0.3;
  const mea::test::ScalarLinearSystem sys(lambda);
  const double z = lambda * dt;
  const Vec out = rk4_step(sys, Vec{2.0}, dt);
  CHECK(out[0] == doctest::Approx(2.0 * (1 + z + z * z / 2 + z * z * z / 6 + z * z * z * z / 24)).epsilon(1e-15));

  const auto kdv = make_circle("kdv", 1.0, 8);
  Vec c(kdv->dim(), 0.0);
  c[0] = 0.3;
  CHECK(mea::test::max_abs_diff(rk4_step(*kdv, c, 1e-2), c) == 0.0);
  CHECK_THROWS_AS(rk4_step(sys, Vec{1.0}, 0.0), ContractViolation);
}

TEST_CASE("rk4 fourth-order convergence on linear dispersion") {
  // Linear-part-only KdV, single mode; compare with the exact phase factor.
  CircleSystemConfig cfg = CircleSystemConfig::preset("kdv", 1.0, 8);
  cfg.linear_only = true;
  const CircleSystem sys(cfg);
  const int k = 2;
  const Vec u0 = cos_mode(8, k, 1.0);
  auto error_at = [&](double dt) {
    IntegratorConfig ic;
    ic.dt = dt;
    ic.t_end = 1.0;
    ic.monitor_stride = 1000000;
    const Vec u = evolve(sys, u0, ic).states.back();
    // exact: Re(0.5 e^{-i k^3 t}) on the Re/Im pair of mode k
    const double ph = -1.0 * k * k * k;
    return std::hypot(u[2 * k - 1] - 0.5 * std::cos(ph), u[2 * k] - 0.5 * std::sin(ph));
  };
  const double e1 = error_at(0.02), e2 = error_at(0.01);
  const double order = std::log2(e1 / e2);
  CHECK(order > 3.8);
  CHECK(order < 4.2);
}

TEST_CASE("if_rk4 step") {
  CircleSystemConfig cfg = CircleSystemConfig::preset("kdv", 1.3, 8);
  cfg.linear_only = true;
  const CircleSystem lin(cfg);
  Fourier1DField f = Fourier1DField::zeros(8);
  f.set(3, {0.4, -0.1});
  const double dt = 0.01;
  const Vec out = if_rk4_step(lin, f.to_real(), dt);
  const std::complex<double> expect = f.coeffs[3] * std::exp(std::complex<double>(0.0, -1.3 * 27 * dt));
  CHECK(std::abs(Fourier1DField::from_real(out, f.period).coeffs[3] - expect) < 1e-16);

  const auto kdv = make_circle("kdv", 1.0, 8);
  Vec c(kdv->dim(), 0.0);
  c[0] = -0.6;
  CHECK(mea::test::max_abs_diff(if_rk4_step(*kdv, c, 1e-3), c) == 0.0);

  const mea::test::ScalarLinearSystem noSymbol(1.0);
  CHECK_THROWS_AS(if_rk4_step(noSymbol, Vec{1.0}, 0.1), UnsupportedScheme);
}

TEST_CASE("if_rk4 order on full KdV") {
  const auto kdv = make_circle("kdv", 1.0, 128);
  Fourier1DField f = Fourier1DField::zeros(128);
  f.set(1, {0.25, 0.0});
  f.set(2, {0.0, 0.1});
  const Vec u0 = f.to_real();
  auto run = [&](double dt) {
    IntegratorConfig ic;
    ic.dt = dt;
    ic.t_end = 1.0;
    ic.scheme = Scheme::if_rk4;
    ic.monitor_stride = 1000000;
    return evolve(*kdv, u0, ic).states.back();
  };
  const Vec a = run(2e-3), b = run(1e-3), c = run(5e-4);
  const double order = std::log2(mea::test::max_abs_diff(a, b) / mea::test::max_abs_diff(b, c));
  CHECK(order >= 3.5);
  CHECK(order <= 4.5);
}

TEST_CASE("evolve bookkeeping") {
  const auto kdv = make_circle("kdv", 1.0, 4);
  std::mt19937_64 rng(12);
  const Vec u0 = mea::test::random_circle_field(4, 3, rng).to_real();

  IntegratorConfig ic;
  ic.t_end = 0.0;
  const Trajectory t0 = evolve(*kdv, u0, ic);
  CHECK(t0.states.size() == 1);
  CHECK(t0.records.size() == 1);

  ic.t_end = 0.105;
  ic.dt = 0.01;
  ic.monitor_stride = 4;
  const Trajectory tr = evolve(*kdv, u0, ic);
  CHECK(tr.times.back() == 0.105);
  CHECK(tr.times == std::vector<double>{0.0, 0.04, 0.08, 0.105});
  for (std::size_t i = 1; i < tr.records.size(); ++i) CHECK(tr.records[i].t >= tr.records[i - 1].t);

  Vec c(kdv->dim(), 0.0);
  c[0] = 1.0;
  const Trajectory steady = evolve(*kdv, c, ic);
  for (const auto& r : steady.records) CHECK(r.energy == steady.records[0].energy);

  IntegratorConfig bad;
  bad.dt = 2.0;
  bad.t_end = 1.0;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  bad.dt = 0.1;
  bad.monitor_stride = 0;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  CHECK_THROWS_AS(scheme_from_string("euler"), UnsupportedScheme);
}

TEST_CASE("Burgers steepening is reported as divergence") {
  const auto burgers = make_circle("burgers", 0.0, 64);
  const Vec u0 = sin_mode(64, 1, 1.0);
  IntegratorConfig ic;
  ic.dt = 0.05;
  ic.t_end = 5.0;
  try {
    evolve(*burgers, u0, ic);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.last_time() > 0.0);
    CHECK(e.last_time() < 5.0);
    CHECK(e.last_state().size() == burgers->dim());
  }
}

TEST_CASE("central extension") {
  const auto gch = make_circle("gch", 0.8, 16);
  const auto ch = make_circle("ch", 0.0, 16);
  const SystemPtr ext = extend_central(make_circle("gch", 0.8, 16));
  CHECK(ext->dim() == gch->dim() + 1);
  std::mt19937_64 rng(13);
  const Vec u = mea::test::random_circle_field(16, 4, rng).to_real();

  ExtendedState s0{u, 0.0};
  const Vec r0 = rhs_eulerian(*ext, s0.pack());
  CHECK(mea::test::max_abs_diff(ExtendedState::unpack(r0).u, rhs_eulerian(*ch, u)) == 0.0);
  CHECK(ExtendedState::unpack(r0).a == 0.0);

  ExtendedState charge{Vec(gch->dim(), 0.0), 0.8};
  CHECK(sup_norm(rhs_eulerian(*ext, charge.pack())) == 0.0);

  ExtendedState s{u, 0.8};
  const Vec r = rhs_eulerian(*ext, s.pack());
  CHECK(mea::test::max_abs_diff(ExtendedState::unpack(r).u, rhs_eulerian(*gch, u)) < 1e-13);
  CHECK(ExtendedState::unpack(r).a == 0.0);
  CHECK(ext->inner_product(s.pack(), s.pack()) ==
        doctest::Approx(gch->inner_product(u, u) + 0.64).epsilon(1e-15));

  IntegratorConfig ic;
  ic.dt = 1e-3;
  ic.t_end = 0.2;
  ic.monitor_stride = 50;
  const Trajectory te = evolve(*ext, s.pack(), ic);
  const Trajectory tm = evolve(*gch, u, ic);
  for (std::size_t i = 0; i < te.states.size(); ++i) {
    const ExtendedState e = ExtendedState::unpack(te.states[i]);
    CHECK(mea::test::max_abs_diff(e.u, tm.states[i]) <= 1e-12);
    CHECK(e.a == 0.8);
  }
}

TEST_CASE("strength scaling") {
  std::mt19937_64 rng(14);
  const Vec u = mea::test::random_circle_field(16, 5, rng).to_real();
  for (double a : {-2.0, 0.5, 3.0}) {
    const auto sys = make_circle("gch", a, 16);
    const ScaledFieldSystem scaled(make_circle("ch", 0.0, 16), a);
    CHECK(mea::test::max_abs_diff(rhs_eulerian(*sys, u), rhs_eulerian(scaled, u)) < 1e-12);
  }
}

TEST_CASE("pairing identity residual") {
  const auto kdv = make_circle("kdv", 1.1, 16);
  const Vec zero(kdv->dim(), 0.0);
  std::mt19937_64 rng(15);
  const Vec w = mea::test::random_circle_field(16, 5, rng).to_real();
  const PairingResidual z = pairing_identity_residual(*kdv, zero, w);
  CHECK(z.residual == 0.0);

  const auto ch = make_circle("ch", 0.0, 16);
  const Vec u = mea::test::random_circle_field(16, 5, rng).to_real();
  CHECK(pairing_identity_residual(*ch, u, u).residual < 1e-13);

  for (const char* name : {"burgers", "kdv", "ch", "gch"}) {
    const auto sys = make_circle(name, 1.1, 16);
    for (int trial = 0; trial < 5; ++trial) {
      const Vec uu = mea::test::random_circle_field(16, 5, rng).to_real();
      const Vec ww = mea::test::random_circle_field(16, 5, rng).to_real();
      const PairingResidual r = pairing_identity_residual(*sys, uu, ww);
      CHECK(r.residual < 1e-10);
      CHECK(r.sign == -1);
    }
  }
}

TEST_CASE("identity residuals on circle systems") {
  const auto gch = make_circle("gch", 1.0, 16);
  std::mt19937_64 rng(16);
  const Vec u = mea::test::random_circle_field(16, 5, rng).to_real();
  const Vec v = mea::test::random_circle_field(16, 5, rng).to_real();
  const Vec w = mea::test::random_circle_field(16, 5, rng).to_real();
  CHECK(cocycle_antisymmetry_residual(*gch, u, v) < 1e-12);
  CHECK(cocycle_cyclic_residual(*gch, u, v, w) < 1e-11);
  CHECK(lorentz_skewness_residual(*gch, u) < 1e-12);
  CHECK(lorentz_skew_adjoint_residual(*gch, u, v) < 1e-12);
  CHECK(mea::test::max_abs_diff(gch->solve_inertia(gch->apply_inertia(u)), u) < 1e-12);
  CHECK(gch->inner_product(u, v) == doctest::Approx(gch->pairing(gch->apply_inertia(u), v)).epsilon(1e-13));
}

TEST_CASE("momentum and velocity forms agree") {
  const auto gch = make_circle("gch", 0.6, 32);
  std::mt19937_64 rng(17);
  Vec u = mea::test::random_circle_field(32, 6, rng).to_real();
  Vec m = gch->apply_inertia(u);
  for (int s = 0; s < 50; ++s) {
    u = rk4_step(*gch, u, 1e-3);
    m = rk4_step_momentum(*gch, m, 1e-3);
  }
  const Vec mu = gch->apply_inertia(u);
  CHECK(mea::test::max_abs_diff(mu, m) <= 1e-12 * sup_norm(mu));
}
