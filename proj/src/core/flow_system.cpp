#include "mea/core/flow_system.hpp"

#include <cmath>

#include "mea/errors.hpp"

namespace mea {

Vec LinearSymbol::propagate(ConstView u, double h) const {
  if (u.size() != dim())
    throw ContractViolation("linear symbol dimension " + std::to_string(dim()) +
                            " does not match state dimension " + std::to_string(u.size()));
  Vec out(u.size());
  const std::size_t head = real_rates.size();
  for (std::size_t i = 0; i < head; ++i) out[i] = std::exp(h * real_rates[i]) * u[i];
  for (std::size_t j = 0; j < pair_rates.size(); ++j) {
    const std::complex<double> z{u[head + 2 * j], u[head + 2 * j + 1]};
    const std::complex<double> r = std::exp(h * pair_rates[j]) * z;
    out[head + 2 * j] = r.real();
    out[head + 2 * j + 1] = r.imag();
  }
  return out;
}

double FlowSystem::norm(ConstView u) const {
  return std::sqrt(std::max(0.0, inner_product(u, u)));
}

void FlowSystem::require_dim(ConstView u, const char* what) const {
  if (u.size() != dim())
    throw ContractViolation(std::string(what) + ": expected " + std::to_string(dim()) +
                            " coordinates for " + name() + ", got " +
                            std::to_string(u.size()));
}

}  // namespace mea
