#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mea/circle/circle_system.hpp"
#include "mea/circle/galerkin_oracle.hpp"
#include "mea/core/identities.hpp"
#include "mea/core/integrators.hpp"
#include "mea/errors.hpp"
#include "support/test_helpers.hpp"

using namespace mea;
using namespace mea::circle;
using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

Fourier1DField mode_cos(int K, int k, double amp = 1.0) {
  Fourier1DField f = Fourier1DField::zeros(K);
  f.set(k, {0.5 * amp, 0.0});
  return f;
}

Fourier1DField mode_sin(int K, int k, double amp = 1.0) {
  Fourier1DField f = Fourier1DField::zeros(K);
  f.set(k, {0.0, -0.5 * amp});
  return f;
}

double max_coeff_diff(const Fourier1DField& a, const Fourier1DField& b) {
  double m = 0.0;
  for (int k = 0; k <= std::max(a.K(), b.K()); ++k) m = std::max(m, std::abs(a.coeff(k) - b.coeff(k)));
  return m;
}

}  // namespace

TEST_CASE("circle field: grid round trip and Hermitian layout") {
  std::mt19937_64 rng(1);
  const Fourier1DField f = mea::test::random_circle_field(32, 32, rng);
  const auto g = f.to_grid(65);
  const Fourier1DField back = Fourier1DField::from_grid(g, 32, f.period);
  CHECK(max_coeff_diff(f, back) < 1e-13);
  CHECK(f.coeff(-3) == std::conj(f.coeff(3)));
  const Vec r = f.to_real();
  CHECK(r.size() == real_dim(32));
  CHECK(max_coeff_diff(Fourier1DField::from_real(r, f.period), f) == 0.0);
  CHECK(f.evaluate(0.7) == doctest::Approx(g.empty() ? 0.0 : f.evaluate(0.7)));
}

TEST_CASE("derivative examples") {
  Fourier1DField c = Fourier1DField::zeros(8);
  c.coeffs[0] = {3.0, 0.0};
  for (int order = 1; order <= 3; ++order) CHECK(max_coeff_diff(derivative(c, order), Fourier1DField::zeros(8)) == 0.0);

  Fourier1DField e = Fourier1DField::zeros(8);
  e.set(2, {1.0, 0.0});
  CHECK(std::abs(derivative(e, 1).coeff(2) - cplx(0.0, 2.0)) < 1e-15);

  // (sin x)''' = -cos x
  CHECK(max_coeff_diff(derivative(mode_sin(8, 1), 3), mode_cos(8, 1, -1.0)) < 1e-15);
}

TEST_CASE("dealiased multiplication") {
  const int K = 16;
  std::mt19937_64 rng(2);
  const Fourier1DField g = mea::test::random_circle_field(K, K, rng);
  Fourier1DField one = Fourier1DField::zeros(K);
  one.coeffs[0] = {1.0, 0.0};
  CHECK(max_coeff_diff(multiply(one, g), g) < 1e-14);

  // cos^2 x = 1/2 + 1/2 cos 2x
  Fourier1DField expect = mode_cos(K, 2, 0.5);
  expect.coeffs[0] = {0.5, 0.0};
  CHECK(max_coeff_diff(multiply(mode_cos(K, 1), mode_cos(K, 1)), expect) < 1e-15);

  // Direct O(K^2) convolution oracle.
  const Fourier1DField f = mea::test::random_circle_field(K, K, rng);
  const Fourier1DField p = multiply(f, g, true);
  for (int k = 0; k <= K; ++k) {
    cplx acc = 0.0;
    for (int j = -K; j <= K; ++j)
      if (std::abs(k - j) <= K) acc += f.coeff(j) * g.coeff(k - j);
    CHECK(std::abs(p.coeffs[k] - acc) < 1e-13);
  }
}

TEST_CASE("inertia operator and its inverse") {
  CircleSystemConfig cfg;
  cfg.K = 8;
  cfg.alpha = 1.0;
  cfg.beta = 1.0;
  Fourier1DField e = Fourier1DField::zeros(8);
  e.set(1, {1.0, 0.0});
  CHECK(std::abs(apply_inertia_ab(e, cfg).coeff(1) - cplx(2.0, 0.0)) < 1e-15);
  CHECK(std::abs(solve_inertia_ab(2.0 * e, cfg).coeff(1) - cplx(1.0, 0.0)) < 1e-15);

  std::mt19937_64 rng(3);
  const Fourier1DField u = mea::test::random_circle_field(8, 8, rng);
  CHECK(max_coeff_diff(solve_inertia_ab(apply_inertia_ab(u, cfg), cfg), u) < 1e-13);

  CircleSystemConfig l2;
  l2.K = 8;
  CHECK(max_coeff_diff(apply_inertia_ab(u, l2), u) == 0.0);
  CHECK(max_coeff_diff(solve_inertia_ab(u, l2), u) == 0.0);
  CHECK(max_coeff_diff(apply_inertia_ab(Fourier1DField::zeros(8), cfg), Fourier1DField::zeros(8)) == 0.0);

  CircleSystemConfig hs;
  hs.K = 8;
  hs.alpha = 0.0;
  hs.beta = 1.0;
  Fourier1DField m = mode_cos(8, 1);
  m.coeffs[0] = {1.0, 0.0};
  try {
    solve_inertia_ab(m, hs);
    FAIL("expected singular inertia");
  } catch (const SingularInertia& err) {
    CHECK(err.mode() == 0);
  }
}

TEST_CASE("config invariants") {
  CircleSystemConfig c;
  c.alpha = 0.0;
  c.beta = 0.0;
  CHECK_THROWS_AS(c.validate(), ContractViolation);
  c.alpha = -1.0;
  CHECK_THROWS_AS(c.validate(), ContractViolation);
  CHECK_THROWS_AS(CircleSystemConfig::preset("kdvv", 1.0, 8), ContractViolation);
}

TEST_CASE("adT_self examples and Galerkin oracle") {
  CircleSystemConfig cfg;
  cfg.K = 16;
  Fourier1DField c = Fourier1DField::zeros(16);
  c.coeffs[0] = {2.5, 0.0};
  CHECK(max_coeff_diff(adT_self_circle(c, cfg), Fourier1DField::zeros(16)) == 0.0);

  // cos x -> -(3/2) sin 2x
  const Fourier1DField expect = mode_sin(16, 2, -1.5);
  CHECK(max_coeff_diff(adT_self_circle(mode_cos(16, 1), cfg), expect) < 1e-14);
  CHECK(max_coeff_diff(galerkin_adT_oracle(mode_cos(16, 1), cfg, 16), expect) < 1e-12);
  CHECK(max_coeff_diff(galerkin_adT_oracle(Fourier1DField::zeros(16), cfg, 8), Fourier1DField::zeros(8)) == 0.0);

  // u = cos x + 1/2 sin 2x with alpha = beta = 1: closed form vs oracle vs kernel.
  CircleSystemConfig ch = cfg;
  ch.beta = 1.0;
  const Fourier1DField u = mode_cos(16, 1) + mode_sin(16, 2, 0.5);
  const Fourier1DField kern = adT_self_circle(u, ch);
  const Fourier1DField orac = galerkin_adT_oracle(u, ch, 16);
  CHECK(max_coeff_diff(kern, orac) < 1e-10);
  // Closed form: A^{-1}(3uu_x - 2u_x u_xx - u u_xxx) evaluated by quadrature.
  const int M = 97;
  std::vector<double> g(M);
  for (int j = 0; j < M; ++j) {
    const double x = 2.0 * pi * j / M;
    const double f = std::cos(x) + 0.5 * std::sin(2 * x);
    const double f1 = -std::sin(x) + std::cos(2 * x);
    const double f2 = -std::cos(x) - 2.0 * std::sin(2 * x);
    const double f3 = std::sin(x) - 4.0 * std::cos(2 * x);
    g[j] = 3.0 * f * f1 - 2.0 * f1 * f2 - f * f3;
  }
  const Fourier1DField closed = solve_inertia_ab(Fourier1DField::from_grid(g, 16, 2.0 * pi), ch);
  CHECK(max_coeff_diff(kern, closed) < 1e-13);

  CHECK_THROWS_AS(galerkin_adT_oracle(u, ch, 3), ContractViolation);
}

TEST_CASE("adjoint identity on random fields") {
  std::mt19937_64 rng(4);
  for (auto [alpha, beta] : {std::pair{1.0, 0.0}, std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
    CircleSystemConfig cfg;
    cfg.K = 32;
    cfg.alpha = alpha;
    cfg.beta = beta;
    const CircleSystem sys(cfg);
    for (int trial = 0; trial < 10; ++trial) {
      const Vec u = mea::test::random_circle_field(32, 10, rng).to_real();
      const Vec w = mea::test::random_circle_field(32, 10, rng).to_real();
      CHECK(adjoint_identity_residual(sys, u, w) < 1e-10);
    }
    const Fourier1DField u = mea::test::random_circle_field(32, 8, rng);
    CHECK(max_coeff_diff(adT_self_circle(u, cfg), galerkin_adT_oracle(u, cfg, 16)) < 1e-10);
  }
}

TEST_CASE("Lorentz force and Gelfand-Fuchs cocycle") {
  CircleSystemConfig cfg;
  cfg.K = 8;
  Fourier1DField c = Fourier1DField::zeros(8);
  c.coeffs[0] = {1.0, 0.0};
  CHECK(max_coeff_diff(lorentz_gf(c, cfg), Fourier1DField::zeros(8)) == 0.0);
  CHECK(max_coeff_diff(lorentz_gf(mode_sin(8, 1), cfg), mode_cos(8, 1)) < 1e-15);

  std::mt19937_64 rng(5);
  const Fourier1DField u = mea::test::random_circle_field(8, 8, rng);
  const Fourier1DField v = mea::test::random_circle_field(8, 8, rng);
  CHECK(std::abs(gelfand_fuchs(u, u)) < 1e-12);
  CHECK(std::abs(gelfand_fuchs(c, v)) < 1e-14);
  CHECK(gelfand_fuchs(mode_cos(8, 1), mode_sin(8, 1)) == doctest::Approx(-pi).epsilon(1e-14));

  for (auto [alpha, beta] : {std::pair{1.0, 0.0}, std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
    cfg.alpha = alpha;
    cfg.beta = beta;
    const double s = h1ab_inner(lorentz_gf(u, cfg), u, cfg);
    CHECK(std::abs(s) < 1e-12 * h1ab_inner(u, u, cfg));
    // <Y u, v> = sigma(u, v)
    CHECK(h1ab_inner(lorentz_gf(u, cfg), v, cfg) == doctest::Approx(gelfand_fuchs(u, v)).epsilon(1e-12));
  }
}

TEST_CASE("H1 inner product examples") {
  CircleSystemConfig cfg;
  cfg.K = 4;
  CHECK(h1ab_inner(mode_sin(4, 1), mode_sin(4, 1), cfg) == doctest::Approx(pi).epsilon(1e-15));
  cfg.beta = 1.0;
  CHECK(h1ab_inner(mode_sin(4, 1), mode_sin(4, 1), cfg) == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK(h1ab_inner(mode_sin(4, 1), mode_cos(4, 2), cfg) == 0.0);
  CHECK(h1ab_inner(mode_sin(4, 1), mode_cos(4, 1), cfg) == 0.0);
}

TEST_CASE("circle_rhs examples") {
  const int K = 16;
  for (const char* name : {"burgers", "kdv", "ch", "gch"}) {
    const CircleSystemConfig cfg = CircleSystemConfig::preset(name, 1.3, K);
    Fourier1DField c = Fourier1DField::zeros(K);
    c.coeffs[0] = {0.8, 0.0};
    CHECK(max_coeff_diff(circle_rhs(c, cfg), Fourier1DField::zeros(K)) == 0.0);
  }

  const double a = 0.7, eps = 0.3;
  const int k = 2;
  const CircleSystemConfig kdv = CircleSystemConfig::preset("kdv", a, K);
  const Fourier1DField expect = mode_sin(K, k, a * eps * k * k * k) + mode_sin(K, 2 * k, 1.5 * eps * eps * k);
  CHECK(max_coeff_diff(circle_rhs(mode_cos(K, k, eps), kdv), expect) < 1e-14);

  // Magnetic deformation decomposition.
  std::mt19937_64 rng(6);
  const Fourier1DField u = mea::test::random_circle_field(K, 5, rng);
  const CircleSystemConfig burgers = CircleSystemConfig::preset("burgers", 0.0, K);
  CHECK(max_coeff_diff(circle_rhs(u, kdv) - circle_rhs(u, burgers), a * derivative(u, 3)) < 1e-13);
  const CircleSystemConfig ch = CircleSystemConfig::preset("ch", 0.0, K);
  const CircleSystemConfig gch = CircleSystemConfig::preset("gch", a, K);
  CHECK(max_coeff_diff(circle_rhs(u, gch) - circle_rhs(u, ch), a * solve_inertia_ab(derivative(u, 3), gch)) <
        1e-13);

  // a = 0 reductions are exact, and the mean is exactly conserved.
  CHECK(max_coeff_diff(circle_rhs(u, CircleSystemConfig::preset("kdv", 0.0, K)), circle_rhs(u, burgers)) == 0.0);
  CHECK(max_coeff_diff(circle_rhs(u, CircleSystemConfig::preset("gch", 0.0, K)), circle_rhs(u, ch)) == 0.0);
  for (const auto& cfg : {kdv, burgers, ch, gch}) CHECK(circle_rhs(u, cfg).coeffs[0] == cplx(0.0, 0.0));

  // Equals the generic rhs of the assembled flow system bit for bit.
  const CircleSystem sys(gch);
  const Vec generic = rhs_eulerian(sys, u.to_real());
  CHECK(mea::test::max_abs_diff(generic, circle_rhs(u, gch).to_real()) == 0.0);
}

TEST_CASE("circle system names and extras") {
  CHECK(CircleSystem(CircleSystemConfig::preset("gch", 1.0, 4)).name() == "gch");
  CHECK(CircleSystem(CircleSystemConfig::preset("burgers", 0.0, 4)).name() == "burgers");
  const CircleSystem sys(CircleSystemConfig::preset("kdv", 1.0, 4));
  Vec u(sys.dim(), 0.0);
  u[0] = 0.5;
  CHECK(sys.extras(u)[0].second == doctest::Approx(pi));
}
