#include "mea/core/extension.hpp"

#include "mea/errors.hpp"

namespace mea {

Vec ExtendedState::pack() const {
  Vec v(u);
  v.push_back(a);
  return v;
}

ExtendedState ExtendedState::unpack(ConstView v) {
  if (v.empty()) throw ContractViolation("extended state needs at least the charge coordinate");
  ExtendedState s;
  s.u.assign(v.begin(), v.end() - 1);
  s.a = v.back();
  return s;
}

namespace {

ConstView head(ConstView v) { return v.first(v.size() - 1); }

}  // namespace

CentralExtension::CentralExtension(SystemPtr base) : base_(std::move(base)) {
  if (!base_) throw ContractViolation("central extension of a null system");
}

std::string CentralExtension::name() const { return "extended:" + base_->name(); }

std::size_t CentralExtension::dim() const { return base_->dim() + 1; }

double CentralExtension::inner_product(ConstView u, ConstView v) const {
  require_dim(u, "inner_product");
  require_dim(v, "inner_product");
  return base_->inner_product(head(u), head(v)) + u.back() * v.back();
}

double CentralExtension::pairing(ConstView m, ConstView v) const {
  require_dim(m, "pairing");
  require_dim(v, "pairing");
  return base_->pairing(head(m), head(v)) + m.back() * v.back();
}

Vec CentralExtension::apply_inertia(ConstView u) const {
  require_dim(u, "apply_inertia");
  Vec out = base_->apply_inertia(head(u));
  out.push_back(u.back());
  return out;
}

Vec CentralExtension::solve_inertia(ConstView m) const {
  require_dim(m, "solve_inertia");
  Vec out = base_->solve_inertia(head(m));
  out.push_back(m.back());
  return out;
}

// <adT_(u,a)(u,a), (w,c)> = <u,[u,w]> + a sigma(u,w), hence
// adT_(u,a)(u,a) = (adT_u u + a Y u, 0).
Vec CentralExtension::adT_self(ConstView u) const {
  require_dim(u, "adT_self");
  const ConstView x = head(u);
  const double a = u.back();
  Vec out = base_->adT_self(x);
  if (a != 0.0) {
    const Vec y = base_->lorentz(x);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * y[i];
  }
  out.push_back(0.0);
  return out;
}

Vec CentralExtension::lorentz(ConstView u) const {
  require_dim(u, "lorentz");
  return Vec(dim(), 0.0);
}

double CentralExtension::cocycle(ConstView u, ConstView v) const {
  require_dim(u, "cocycle");
  require_dim(v, "cocycle");
  return 0.0;
}

Vec CentralExtension::bracket(ConstView u, ConstView v) const {
  require_dim(u, "bracket");
  require_dim(v, "bracket");
  Vec out = base_->bracket(head(u), head(v));
  out.push_back(base_->cocycle(head(u), head(v)));
  return out;
}

std::vector<std::pair<std::string, double>> CentralExtension::extras(ConstView u) const {
  auto out = base_->extras(head(u));
  out.emplace_back("charge", u.back());
  return out;
}

std::vector<std::string> CentralExtension::extra_names() const {
  auto names = base_->extra_names();
  names.emplace_back("charge");
  return names;
}

SystemPtr extend_central(SystemPtr base) {
  return std::make_shared<CentralExtension>(std::move(base));
}

ScaledFieldSystem::ScaledFieldSystem(SystemPtr base, double factor)
    : base_(std::move(base)), factor_(factor) {
  if (!base_) throw ContractViolation("scaled field of a null system");
}

std::string ScaledFieldSystem::name() const {
  return base_->name() + "[sigma*" + std::to_string(factor_) + "]";
}

Vec ScaledFieldSystem::lorentz(ConstView u) const {
  Vec y = base_->lorentz(u);
  for (double& x : y) x *= factor_;
  return y;
}

double ScaledFieldSystem::cocycle(ConstView u, ConstView v) const {
  return factor_ * base_->cocycle(u, v);
}

}  // namespace mea
