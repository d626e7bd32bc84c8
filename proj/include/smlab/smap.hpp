#pragma once

#include <functional>

#include "smlab/spectral.hpp"

namespace smlab {

struct FlowState {
    SphereField field;
    double t = 0;
    long step_count = 0;
};

// phi x Delta phi with spectral Laplacian; pointwise orthogonal to phi.
VectorField3 smap_rhs(const SphereField& field);

// Linearization along phi: phi_lin x Delta phi + phi x Delta phi_lin.
// Requires phi_lin tangent to within 1e-8 pointwise.
VectorField3 linearized_rhs(const SphereField& field, const VectorField3& phi_lin);

double energy_E0(const SphereField& field);
double energy_E1(const SphereField& field);

// Traveling-wave solution phi = (sin th cos u, sin th sin u, cos th),
// u = kappa x_1 - omega t, omega = kappa^2 cos th. kappa must be an integer
// multiple of 2 pi / box_length.
SphereField helical_wave(const GridSpec& g, double kappa, double theta, double t);

struct EvolveOptions {
    // diagnostics callback invoked every `cadence` accepted steps (and at the end)
    long cadence = 0;
    std::function<void(const FlowState&)> callback;
    double sphere_drift_tol = 1e-6;
    double stability_constant = 2.8;  // RK4 imaginary-axis stability bound
};

// RK4 with per-step projection to the sphere. dt may be negative (reverse
// evolution); |dt| must not exceed dt_hint and must satisfy
// |dt| * max|xi|^2 <= stability_constant.
FlowState evolve(const FlowState& start, double t_end, double dt,
                 const EvolveOptions& opts = {});

// Co-evolution of (phi, phi_lin) under the coupled RK4 scheme; phi_lin is
// re-tangentialized after each step.
struct LinearizedState {
    FlowState base;
    VectorField3 lin;
};
LinearizedState evolve_linearized(const LinearizedState& start, double t_end,
                                  double dt, const EvolveOptions& opts = {});

}  // namespace smlab
