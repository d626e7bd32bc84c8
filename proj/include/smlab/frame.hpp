#pragma once

#include <array>

#include "smlab/heat.hpp"

namespace smlab {

/// Antisymmetric generator of the frame transport,
///   R = Delta phi . phi^T - phi . (Delta phi)^T,
/// stored through its axial vector m = Delta phi x phi so that R x = x cross m.
struct RotationField {
    GridSpec grid;
    VectorField3 axial;

    Vec3 apply(std::size_t i, const Vec3& x) const { return x.cross(axial.at(i)); }
    std::array<double, 9> matrix(std::size_t i) const {
        Vec3 m = axial.at(i);
        // x cross m written as a matrix acting on x
        return {0, m.z, -m.y, -m.z, 0, m.x, m.y, -m.x, 0};
    }
};

RotationField r_matrix(const HeatTrajectory& traj, int node);
RotationField r_matrix_of(const SphereField& field);

/// Orthonormal tangent frame (v, w) per s-node, transported backward from the
/// projected frame at S_max; w = phi x v.
struct FrameField {
    Vec3 Q_prime;
    std::vector<VectorField3> v, w;  // one per s-node

    int count() const { return static_cast<int>(v.size()); }
    // worst violation among |v|-1, v.w, v.phi, w.phi, |w - phi x v|
    double max_invariant_defect(const HeatTrajectory& traj) const;
};

struct TransportOptions {
    int substeps = 8;  // RK4 substeps per s-interval
};

// Solves d v / d s = R(s) v backward from s = S_max with
// v(S_max) = normalize(Q' - (phi.Q') phi), re-orthonormalizing against phi
// at every node; requires Q' orthogonal to Q and the trajectory to end near Q.
FrameField transport_frame(const HeatTrajectory& traj, const Vec3& Q_prime,
                           const TransportOptions& opts = {});

}  // namespace smlab
