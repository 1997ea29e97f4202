#include "mea/sphere/qg.hpp"

#include <cmath>
#include <numbers>

#include "mea/errors.hpp"

namespace mea::sphere {

namespace {

constexpr double kPi = std::numbers::pi;

void require_lmax(const SphereField& f, const QGConfig& cfg, const char* what) {
  if (f.lmax != cfg.lmax || f.coeffs.size() != SphereField::size(cfg.lmax))
    throw ContractViolation(std::string(what) + ": field truncation does not match lmax = " +
                            std::to_string(cfg.lmax));
}

// Symmetric tridiagonal solve (Thomas algorithm); the matrix is SPD here so
// no pivoting is needed.
void solve_tridiagonal(const std::vector<double>& diag, const std::vector<double>& off,
                       std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n, 0.0);
  double d = diag[0];
  if (!(d > 0.0)) throw SolverError("contact Laplacian block is not positive definite");
  c[0] = n > 1 ? off[0] / d : 0.0;
  rhs[0] /= d;
  for (std::size_t i = 1; i < n; ++i) {
    d = diag[i] - off[i - 1] * c[i - 1];
    if (!(d > 0.0)) throw SolverError("contact Laplacian block is not positive definite");
    if (i + 1 < n) c[i] = off[i] / d;
    rhs[i] = (rhs[i] - off[i - 1] * rhs[i - 1]) / d;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

}  // namespace

void QGConfig::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ContractViolation("gamma must be >= 0");
  if (!(Ro > 0.0) || !std::isfinite(Ro)) throw ContractViolation("Ro must be positive");
  if (!std::isfinite(a)) throw ContractViolation("strength a must be finite");
  if (lmax < 1) throw ContractViolation("lmax must be >= 1");
  if (!(radius_convention > 0.0) || !std::isfinite(radius_convention))
    throw ContractViolation("radius_convention must be positive");
  if (!h.coeffs.empty() && h.coeffs.size() != SphereField::size(h.lmax))
    throw ContractViolation("topography coefficients have the wrong length");
}

SphereField QGConfig::topography() const {
  if (h.coeffs.empty()) return SphereField::zeros(lmax);
  return h.retruncated(lmax);
}

SphereField laplacian(const SphereField& f, double radius_convention) {
  SphereField out = f;
  for (int m = -f.lmax; m <= f.lmax; ++m)
    for (int l = std::abs(m); l <= f.lmax; ++l)
      out.set(l, m, -radius_convention * l * (l + 1.0) * f.get(l, m));
  return out;
}

SphereField multiply_z(const SphereField& f, int out_lmax) {
  SphereField out = SphereField::zeros(out_lmax);
  for (int m = -out_lmax; m <= out_lmax; ++m) {
    const int am = std::abs(m);
    if (am > f.lmax) continue;
    for (int l = am; l <= out_lmax; ++l) {
      double v = 0.0;
      if (l - 1 >= am && l - 1 <= f.lmax) v += legendre_eps(l, am) * f.get(l - 1, m);
      if (l + 1 <= f.lmax) v += legendre_eps(l + 1, am) * f.get(l + 1, m);
      out.set(l, m, v);
    }
  }
  return out;
}

SphereField multiply_z2(const SphereField& f, Headroom headroom) {
  const SphereField zf = multiply_z(f, f.lmax + 1);
  return multiply_z(zf, headroom == Headroom::keep ? f.lmax + 2 : f.lmax);
}

SphereField poisson_bracket(const SphereField& f, const SphereField& g, bool dealias) {
  if (f.lmax != g.lmax) throw ContractViolation("poisson_bracket: truncations differ");
  const auto tr = dealias ? SphereTransform::padded(f.lmax) : SphereTransform::minimal(f.lmax);
  const std::vector<double> fl = tr->synthesis(dlambda(f));
  const std::vector<double> fz = tr->synthesis_dz(f);
  const std::vector<double> gl = tr->synthesis(dlambda(g));
  const std::vector<double> gz = tr->synthesis_dz(g);
  std::vector<double> prod(fl.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = fl[i] * gz[i] - fz[i] * gl[i];
  return tr->analysis(prod);
}

SphereField apply_contact_laplacian(const SphereField& f, const QGConfig& cfg) {
  SphereField out = -1.0 * laplacian(f, cfg.radius_convention);
  if (cfg.gamma != 0.0) out += cfg.gamma * multiply_z2(f, Headroom::truncate);
  return out;
}

SphereField invert_stream(const SphereField& r, const QGConfig& cfg) {
  require_lmax(r, cfg, "invert_stream");
  const int L = cfg.lmax;
  const double g = cfg.gamma, rc = cfg.radius_convention;
  SphereField psi = SphereField::zeros(L);

  if (g == 0.0) {
    if (std::abs(r.coeffs[0]) > 1e-12 * r.l2_norm())
      throw NonInvertibleMode(
          "gamma = 0: the right-hand side must be mean-free (the constant mode of the "
          "Laplacian is not invertible)");
    for (int m = -L; m <= L; ++m)
      for (int l = std::max(1, std::abs(m)); l <= L; ++l)
        psi.set(l, m, r.get(l, m) / (rc * l * (l + 1.0)));
    return psi;
  }

  std::vector<double> diag, off, rhs;
  for (int m = -L; m <= L; ++m) {
    const int am = std::abs(m);
    for (int parity = 0; parity < 2; ++parity) {
      diag.clear();
      off.clear();
      rhs.clear();
      for (int l = am + parity; l <= L; l += 2) {
        const double e0 = legendre_eps(l, am), e1 = legendre_eps(l + 1, am);
        diag.push_back(g * (e0 * e0 + e1 * e1) + rc * l * (l + 1.0));
        if (l + 2 <= L) off.push_back(g * e1 * legendre_eps(l + 2, am));
        rhs.push_back(r.get(l, m));
      }
      if (diag.empty()) continue;
      solve_tridiagonal(diag, off, rhs);
      std::size_t i = 0;
      for (int l = am + parity; l <= L; l += 2) psi.set(l, m, rhs[i++]);
    }
  }
  return psi;
}

SphereField invert_stream_cg(const SphereField& r, const QGConfig& cfg, double tol, int max_iter) {
  require_lmax(r, cfg, "invert_stream_cg");
  const auto tr = SphereTransform::padded(cfg.lmax);
  const auto& zs = tr->grid().z;
  const int nlon = tr->grid().nlon;
  auto apply = [&](const SphereField& f) {
    std::vector<double> v = tr->synthesis(f);
    for (int j = 0; j < tr->grid().nlat; ++j)
      for (int i = 0; i < nlon; ++i) v[static_cast<std::size_t>(j) * nlon + i] *= cfg.gamma * zs[j] * zs[j];
    SphereField out = tr->analysis(v);
    out -= laplacian(f, cfg.radius_convention);
    return out;
  };

  SphereField b = r;
  if (cfg.gamma == 0.0) {
    if (std::abs(r.coeffs[0]) > 1e-12 * r.l2_norm())
      throw NonInvertibleMode("gamma = 0: the right-hand side must be mean-free");
    b.coeffs[0] = 0.0;
  }
  SphereField x = SphereField::zeros(cfg.lmax);
  SphereField res = b;
  SphereField p = res;
  double rr = l2_inner(res, res);
  const double stop = tol * tol * std::max(rr, 1e-300);
  for (int it = 0; it < max_iter && rr > stop; ++it) {
    SphereField Ap = apply(p);
    if (cfg.gamma == 0.0) Ap.coeffs[0] = 0.0;
    const double alpha = rr / l2_inner(p, Ap);
    x += alpha * p;
    res -= alpha * Ap;
    const double rr_new = l2_inner(res, res);
    p = res + (rr_new / rr) * p;
    rr = rr_new;
  }
  if (rr > stop) throw SolverError("conjugate-gradient reference did not converge");
  return x;
}

SphereField phi_field(const QGConfig& cfg) {
  cfg.validate();
  SphereField phi = SphereField::zeros(cfg.lmax);
  phi.set(1, 0, 2.0 / cfg.Ro * std::sqrt(4.0 * kPi / 3.0));
  const SphereField h = cfg.topography();
  bool flat = true;
  for (double c : h.coeffs) flat = flat && c == 0.0;
  if (flat) return phi;

  const auto tr = SphereTransform::padded(cfg.lmax);
  std::vector<double> v = tr->synthesis(h);
  const int nlon = tr->grid().nlon;
  const double scale = cfg.phi_topography_over_Ro ? 2.0 / cfg.Ro : 2.0;
  for (int j = 0; j < tr->grid().nlat; ++j)
    for (int i = 0; i < nlon; ++i) v[static_cast<std::size_t>(j) * nlon + i] *= scale * tr->grid().z[j];
  phi += tr->analysis(v);
  return phi;
}

SphereField f_from_q(const SphereField& q, const QGConfig& cfg) {
  require_lmax(q, cfg, "f_from_q");
  return invert_stream(q - cfg.a * phi_field(cfg), cfg);
}

SphereField q_from_f(const SphereField& f, const QGConfig& cfg) {
  require_lmax(f, cfg, "q_from_f");
  return apply_contact_laplacian(f, cfg) + cfg.a * phi_field(cfg);
}

SphereField qg_rhs(const SphereField& q, const QGConfig& cfg) {
  const SphereField psi = f_from_q(q, cfg);
  return -1.0 * poisson_bracket(psi, q, cfg.dealias);
}

DiagnosticsRecord qg_diagnostics(const SphereField& q, const QGConfig& cfg, double t) {
  require_lmax(q, cfg, "qg_diagnostics");
  const SphereField r = q - cfg.a * phi_field(cfg);
  const SphereField psi = invert_stream(r, cfg);
  DiagnosticsRecord rec;
  rec.t = t;
  rec.energy = 0.5 * l2_inner(psi, r);
  rec.extra = {{"enstrophy", l2_inner(q, q)}, {"mean", q.mean_integral()}};
  return rec;
}

QGSystem::QGSystem(QGConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  phi_ = phi_field(cfg_);
}

SphereField QGSystem::field(ConstView u) const {
  require_dim(u, "qg state");
  return SphereField{cfg_.lmax, Vec(u.begin(), u.end())};
}

double QGSystem::inner_product(ConstView u, ConstView v) const {
  return l2_inner(apply_contact_laplacian(field(u), cfg_), field(v));
}

double QGSystem::pairing(ConstView m, ConstView v) const { return l2_inner(field(m), field(v)); }

Vec QGSystem::apply_inertia(ConstView u) const {
  return apply_contact_laplacian(field(u), cfg_).coeffs;
}

Vec QGSystem::solve_inertia(ConstView m) const { return invert_stream(field(m), cfg_).coeffs; }

namespace {

// A Poisson bracket integrates to zero, so its Y_00 coefficient is round-off.
// Dropping it keeps the gamma = 0 inversion well posed even when the bracket
// itself is round-off (e.g. psi an eigenfunction of the Laplacian).
SphereField mean_free(SphereField f) {
  f.coeffs[0] = 0.0;
  return f;
}

}  // namespace

Vec QGSystem::adT_self(ConstView u) const {
  const SphereField f = field(u);
  return invert_stream(mean_free(poisson_bracket(f, apply_contact_laplacian(f, cfg_), cfg_.dealias)),
                       cfg_)
      .coeffs;
}

Vec QGSystem::lorentz(ConstView u) const {
  return (-1.0 * invert_stream(mean_free(poisson_bracket(phi_, field(u), cfg_.dealias)), cfg_)).coeffs;
}

double QGSystem::cocycle(ConstView u, ConstView v) const {
  return -l2_inner(phi_, poisson_bracket(field(u), field(v), cfg_.dealias));
}

Vec QGSystem::bracket(ConstView u, ConstView v) const {
  return (-1.0 * poisson_bracket(field(u), field(v), cfg_.dealias)).coeffs;
}

std::vector<std::pair<std::string, double>> QGSystem::extras(ConstView u) const {
  const SphereField q = apply_contact_laplacian(field(u), cfg_) + cfg_.a * phi_;
  return {{"enstrophy", l2_inner(q, q)}, {"mean", q.mean_integral()}};
}

}  // namespace mea::sphere
