#include "smlab/frame.hpp"

namespace smlab {

RotationField r_matrix_of(const SphereField& field) {
    RotationField r{field.grid(), VectorField3(field.grid())};
    VectorField3 lap = spectral_laplacian(field.phi);
    for (std::size_t i = 0; i < field.size(); ++i)
        r.axial.set(i, lap.at(i).cross(field.phi.at(i)));
    return r;
}

RotationField r_matrix(const HeatTrajectory& traj, int node) {
    if (node < 0 || node >= traj.count())
        throw ConfigError("r_matrix: node out of range");
    return r_matrix_of(traj.at(node));
}

double FrameField::max_invariant_defect(const HeatTrajectory& traj) const {
    double worst = 0;
    for (int i = 0; i < count(); ++i) {
        const VectorField3& phi = traj.at(i).phi;
        for (std::size_t p = 0; p < phi.size(); ++p) {
            Vec3 vv = v[i].at(p), ww = w[i].at(p), ph = phi.at(p);
            worst = std::max(worst, std::abs(vv.norm() - 1.0));
            worst = std::max(worst, std::abs(ww.norm() - 1.0));
            worst = std::max(worst, std::abs(vv.dot(ww)));
            worst = std::max(worst, std::abs(vv.dot(ph)));
            worst = std::max(worst, std::abs(ww.dot(ph)));
            worst = std::max(worst, (ww - ph.cross(vv)).norm());
        }
    }
    return worst;
}

FrameField transport_frame(const HeatTrajectory& traj, const Vec3& Q_prime,
                           const TransportOptions& opts) {
    const SphereField& final_snap = traj.snapshots.back();
    const Vec3 Q = final_snap.Q;
    if (std::abs(Q.dot(Q_prime)) > 1e-10 || std::abs(Q_prime.norm() - 1.0) > 1e-10)
        throw ConstraintError("transport_frame: Q' must be a unit vector orthogonal to Q");

    double far = 0;
    for (std::size_t p = 0; p < final_snap.size(); ++p)
        far = std::max(far, (final_snap.phi.at(p) - Q).norm());
    if (far > 0.5)
        throw StabilityError(
            "transport_frame: trajectory far from equilibrium at S_max "
            "(|phi(S_max) - Q| = " + std::to_string(far) + ")");

    const int nn = traj.count();
    FrameField fr;
    fr.Q_prime = Q_prime;
    fr.v.assign(nn, VectorField3(final_snap.grid()));
    fr.w.assign(nn, VectorField3(final_snap.grid()));

    auto orthonormalize = [](VectorField3& v, VectorField3& w,
                             const VectorField3& phi) {
        for (std::size_t p = 0; p < phi.size(); ++p) {
            Vec3 ph = phi.at(p);
            Vec3 vv = v.at(p);
            vv = vv - ph * ph.dot(vv);
            vv = vv.normalized();
            v.set(p, vv);
            w.set(p, ph.cross(vv));
        }
    };

    // frame at infinity, projected to the tangent plane at phi(S_max)
    {
        VectorField3& v = fr.v[nn - 1];
        for (std::size_t p = 0; p < v.size(); ++p) v.set(p, Q_prime);
        orthonormalize(v, fr.w[nn - 1], final_snap.phi);
    }

    VectorField3 ax_hi = r_matrix_of(traj.at(nn - 1)).axial;
    for (int i = nn - 1; i >= 1; --i) {
        VectorField3 ax_lo = r_matrix_of(traj.at(i - 1)).axial;
        const double s_hi = traj.pgrid.s_nodes[i], s_lo = traj.pgrid.s_nodes[i - 1];

        VectorField3 v = fr.v[i];
        const std::size_t np = v.size();
        double h_total = s_lo - s_hi;  // negative: backward in s
        double h = h_total / opts.substeps;
        for (int sub = 0; sub < opts.substeps; ++sub) {
            double s0 = s_hi + sub * h;
            // linear interpolation of the axial field in s
            auto ax_at = [&](double s, std::size_t p) {
                double u = (s - s_hi) / (s_lo - s_hi);
                return ax_hi.at(p) * (1.0 - u) + ax_lo.at(p) * u;
            };
            for (std::size_t p = 0; p < np; ++p) {
                Vec3 y = v.at(p);
                Vec3 m0 = ax_at(s0, p), m1 = ax_at(s0 + h / 2, p),
                     m2 = ax_at(s0 + h, p);
                Vec3 k1 = y.cross(m0);
                Vec3 k2 = (y + k1 * (h / 2)).cross(m1);
                Vec3 k3 = (y + k2 * (h / 2)).cross(m1);
                Vec3 k4 = (y + k3 * h).cross(m2);
                v.set(p, y + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6));
            }
        }
        fr.v[i - 1] = v;
        orthonormalize(fr.v[i - 1], fr.w[i - 1], traj.at(i - 1).phi);
        ax_hi = std::move(ax_lo);
    }
    return fr;
}

}  // namespace smlab
