#pragma once

// Building blocks shared by the model and the time integrator. Not part of the
// stable interface.

#include "qns/model.hpp"

namespace qns::internal {

struct Derivatives {
  RealField psi_x, psi_xx, psi_xxx, u_x, u_xx;
};

Derivatives derivatives(const State& state, const TorusGrid& grid);
Norms norms_from(const State& state, const Derivatives& d);

/// Explicitly treated part of the right-hand side: everything except -u_x in the
/// psi equation and (kappa/2) psi_xxx + nu_bar u_xx in the u equation.
struct ExplicitRhs {
  RealField psi;
  RealField u;
  double cutoff_u = 1.0;
  double cutoff_psi = 1.0;
};

ExplicitRhs explicit_rhs(const State& state, const ModelParams& params, const TorusGrid& grid,
                         const Derivatives& d, const Norms& norms, double nu_bar);

}  // namespace qns::internal
