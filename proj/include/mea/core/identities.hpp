#pragma once

#include "mea/core/flow_system.hpp"

namespace mea {

struct PairingResidual {
  double residual = 0.0;  // normalized by |u|^2 |w|
  int sign = -1;          // minimizing global sign s
};

/// min over s of |(A rhs(u), w) - s (<u,[u,w]> + a sigma(u,w))| / (|u|^2 |w|).
/// Zero inputs give residual 0 and the conventional sign -1.
PairingResidual pairing_identity_residual(const FlowSystem& sys, ConstView u, ConstView w);

/// |<adT_self(u), w> - <u, [u,w]>| / (|u|^2 |w|).
double adjoint_identity_residual(const FlowSystem& sys, ConstView u, ConstView w);

/// |sigma([u,v],w) + sigma([v,w],u) + sigma([w,u],v)| / (|u||v||w|).
double cocycle_cyclic_residual(const FlowSystem& sys, ConstView u, ConstView v, ConstView w);

/// |sigma(u,v) + sigma(v,u)| / (|u||v|).
double cocycle_antisymmetry_residual(const FlowSystem& sys, ConstView u, ConstView v);

/// |<Y u, u>| / |u|^2.
double lorentz_skewness_residual(const FlowSystem& sys, ConstView u);

/// |<Y u, v> + <u, Y v>| / (|u||v|).
double lorentz_skew_adjoint_residual(const FlowSystem& sys, ConstView u, ConstView v);

/// Sup-norm of a - b divided by max(1, sup-norm of a).
double relative_sup_difference(ConstView a, ConstView b);
double sup_norm(ConstView a);

}  // namespace mea
