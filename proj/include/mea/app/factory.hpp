#pragma once

#include <string>

#include "mea/app/config.hpp"
#include "mea/app/snapshot.hpp"
#include "mea/core/flow_system.hpp"
#include "mea/sphere/sphere_field.hpp"

namespace mea::app {

/// The system a validated config describes. Data-file problems (wrong
/// layout or truncation, non-solenoidal B) surface as ConfigError(schema).
SystemPtr build_system(const RunConfig& cfg);

/// Initial state in the system's coordinates. For qg the presets describe
/// r = q - a phi = (gamma z^2 - Delta) psi and the state is psi. Preset
/// amplitudes are root-mean-square values over the domain.
Vec initial_state(const RunConfig& cfg, const FlowSystem& sys);

/// Bottom topography at the config's lmax (zeros when flat).
sphere::SphereField build_topography(const RunConfig& cfg);

/// Snapshot of `u` with the header fields for this config's system.
Snapshot make_snapshot(const RunConfig& cfg, const FlowSystem& sys, ConstView u, double t);

/// Coordinate layout descriptor written into snapshot headers.
std::string layout_descriptor(const std::string& system);

}  // namespace mea::app
