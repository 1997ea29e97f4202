#pragma once

#include "mea/core/flow_system.hpp"

namespace mea {

/// (u, a) in the central extension g x_sigma R. The charge `a` is never
/// written after construction by the extended dynamics.
struct ExtendedState {
  Vec u;
  double a = 0.0;

  Vec pack() const;
  static ExtendedState unpack(ConstView v);
};

/// Geodesic (unmagnetized) system on the central extension of `base` by its
/// cocycle. Coordinates are (u..., a); bracket ((u,a),(v,b)) = ([u,v],
/// sigma(u,v)); metric <u,v> + ab.
class CentralExtension final : public FlowSystem {
 public:
  explicit CentralExtension(SystemPtr base);

  std::string name() const override;
  std::size_t dim() const override;
  double strength() const override { return 0.0; }

  double inner_product(ConstView u, ConstView v) const override;
  double pairing(ConstView m, ConstView v) const override;
  Vec apply_inertia(ConstView u) const override;
  Vec solve_inertia(ConstView m) const override;
  Vec adT_self(ConstView u) const override;
  Vec lorentz(ConstView u) const override;
  double cocycle(ConstView u, ConstView v) const override;
  Vec bracket(ConstView u, ConstView v) const override;

  std::vector<std::pair<std::string, double>> extras(ConstView u) const override;
  std::vector<std::string> extra_names() const override;

  const FlowSystem& base() const { return *base_; }

 private:
  SystemPtr base_;
};

SystemPtr extend_central(SystemPtr base);

/// The system with magnetic field factor * sigma and unit strength. Used to
/// check that strength a on sigma and strength 1 on a*sigma agree.
class ScaledFieldSystem final : public FlowSystem {
 public:
  ScaledFieldSystem(SystemPtr base, double factor);

  std::string name() const override;
  std::size_t dim() const override { return base_->dim(); }
  double strength() const override { return 1.0; }

  double inner_product(ConstView u, ConstView v) const override {
    return base_->inner_product(u, v);
  }
  double pairing(ConstView m, ConstView v) const override { return base_->pairing(m, v); }
  Vec apply_inertia(ConstView u) const override { return base_->apply_inertia(u); }
  Vec solve_inertia(ConstView m) const override { return base_->solve_inertia(m); }
  Vec adT_self(ConstView u) const override { return base_->adT_self(u); }
  Vec lorentz(ConstView u) const override;
  double cocycle(ConstView u, ConstView v) const override;
  Vec bracket(ConstView u, ConstView v) const override { return base_->bracket(u, v); }

 private:
  SystemPtr base_;
  double factor_;
};

}  // namespace mea
