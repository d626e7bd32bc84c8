#pragma once

#include "smlab/frame.hpp"

namespace smlab {

/// Differentiated fields psi_m and connection coefficients A_m at one s-node.
/// Index convention: m = 0 is the parabolic direction d/ds, m = 1..d the
/// spatial directions, m = d+1 the Schroedinger time direction.
struct GaugeData {
    int d = 2;
    int node = 0;
    double s = 0;
    std::vector<ComplexField> psi;  // size d+2
    std::vector<ScalarField> a;     // size d+2
    bool has_time = false;          // psi[d+1], a[d+1] populated

    int ti() const { return d + 1; }
};

/// Optional time-direction inputs for extract_gauge. At s = 0 along a
/// Schroedinger map trajectory dphi_dt comes from smap_rhs; dv_dt, when
/// present, comes from a finite-difference stencil of frames in t.
struct TimeDerivatives {
    VectorField3 dphi_dt;
    VectorField3 dv_dt;
    bool has_dv = false;
};

// psi_m = v . d_m phi + i w . d_m phi, A_m = w . d_m v for all indices.
// A_0 is the parallel-transport monitor, computed from the nonuniform
// finite-difference d/ds of the frame nodes.
GaugeData extract_gauge(const HeatTrajectory& traj, const FrameField& frame,
                        int node, const TimeDerivatives* td = nullptr);

// D_l psi = d_l psi + i A_l psi (spectral d_l), l in {1..d}.
ComplexField covariant_derivative(const GaugeData& g, const ComplexField& psi, int l);

struct ResidualReport {
    double l2 = 0, linf = 0;
};
ResidualReport field_residual(const ComplexField& r);

// Curl relation D_l psi_m = D_m psi_l, worst spatial pair.
ResidualReport residual_id1(const GaugeData& g);
// Curvature relation d_l A_m - d_m A_l = Im(psi_l conj(psi_m)), worst pair.
ResidualReport residual_id3(const GaugeData& g);
// psi_{d+1} = i sum_l D_l psi_l (Schroedinger compatibility at s = 0).
ResidualReport residual_schcov(const GaugeData& g);
// psi_0 = sum_l D_l psi_l (heat compatibility).
ResidualReport residual_heatcov(const GaugeData& g);

// Modified Schroedinger equation for psi_m, outer d/dt by second-order
// centered differences over a stack of extractions at consecutive times.
ResidualReport residual_schcov2(const std::vector<GaugeData>& tstack, double dt,
                                int m);
// Covariant heat equation for psi_m, outer d/ds by the nonuniform
// second-order stencil over three consecutive s-nodes.
ResidualReport residual_heatcov2(const GaugeData& lo, const GaugeData& mid,
                                 const GaugeData& hi, double s_lo, double s_mid,
                                 double s_hi, int m);
// Linearized equation for psi_lin along the flow; psilin_stack holds the
// frame coordinates of phi_lin at the same stencil times as tstack's center.
ResidualReport residual_schlin(const GaugeData& center,
                               const std::vector<ComplexField>& psilin_stack,
                               double dt);

enum class GaugeIdentity { Id1, Id3, SchCov, HeatCov, SchCov2, HeatCov2, SchLin };

struct AIntegral {
    ScalarField field;
    double tail_bound = 0;  // |Im(psi_0 conj(psi_m))(S_max)|_Linf * S_max, reported
};

// A_m(s_i) = -int_{s_i}^{S_max} Im(psi_0 conj(psi_m)) dr by trapezoid over the
// graded grid; the truncated tail is estimated and reported, not added.
AIntegral a_from_integral(const std::vector<GaugeData>& stack,
                          const ParabolicGrid& pgrid, int from_node, int m);

// sum_{m=1..d} |psi_m|_{L2}^2 (equals E1 of the snapshot up to frame defects).
double derivative_field_mass(const GaugeData& g);

// Frame coordinates of a tangent field: v . f + i w . f.
ComplexField frame_coordinates(const FrameField& frame, int node,
                               const VectorField3& f);

/// Everything the caloric-gauge pipeline produces for one map: the heat
/// trajectory, the transported frame, and gauge data at every node (time
/// direction populated at s = 0 when the map solves the Schroedinger
/// equation).
struct GaugeStack {
    HeatTrajectory traj;
    FrameField frame;
    std::vector<GaugeData> nodes;
};

struct GaugePipelineConfig {
    Vec3 Q_prime{1, 0, 0};
    ParabolicGrid pgrid;
    HeatOptions heat;
    TransportOptions transport;
    bool time_at_zero = true;  // populate psi_{d+1} at s = 0 from smap_rhs
};

GaugeStack build_gauge_stack(const SphereField& data, const GaugePipelineConfig& cfg);

// Deterministic unit vector orthogonal to Q.
Vec3 default_Q_prime(const Vec3& Q);

}  // namespace smlab
