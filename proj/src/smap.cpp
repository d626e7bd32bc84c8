#include "smlab/smap.hpp"

namespace smlab {

namespace {

VectorField3 cross_fields(const VectorField3& a, const VectorField3& b) {
    VectorField3 out(a.grid());
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) out.set(i, a.at(i).cross(b.at(i)));
    return out;
}

void axpy(VectorField3& y, double a, const VectorField3& x) {
    const std::size_t n = y.size();
    for (int c = 0; c < 3; ++c) {
        double* yp = y.comp(c).data();
        const double* xp = x.comp(c).data();
        for (std::size_t i = 0; i < n; ++i) yp[i] += a * xp[i];
    }
}

VectorField3 rhs_of(const VectorField3& phi) {
    return cross_fields(phi, spectral_laplacian(phi));
}

void check_finite(const VectorField3& f, long step) {
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < f.size(); ++i)
            if (!std::isfinite(f.comp(c)[i]))
                throw DivergenceError("NaN detected at step " + std::to_string(step));
}

}  // namespace

VectorField3 smap_rhs(const SphereField& field) {
    return rhs_of(field.phi);
}

VectorField3 linearized_rhs(const SphereField& field, const VectorField3& phi_lin) {
    for (std::size_t i = 0; i < field.size(); ++i)
        if (std::abs(field.phi.at(i).dot(phi_lin.at(i))) > 1e-8)
            throw ConstraintError("linearized_rhs: phi_lin not tangent to phi");
    VectorField3 out = cross_fields(phi_lin, spectral_laplacian(field.phi));
    axpy(out, 1.0, cross_fields(field.phi, spectral_laplacian(phi_lin)));
    return out;
}

double energy_E0(const SphereField& field) {
    double s = 0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        Vec3 dv = field.phi.at(i) - field.Q;
        s += dv.dot(dv);
    }
    return s * field.grid().cell_volume();
}

double energy_E1(const SphereField& field) {
    const GridSpec& g = field.grid();
    double s = 0;
    for (int c = 0; c < 3; ++c)
        for (int m = 0; m < g.d; ++m) {
            ScalarField df = spectral_derivative(field.phi.comp(c), m);
            for (std::size_t i = 0; i < df.size(); ++i) s += sq(df[i]);
        }
    return s * g.cell_volume();
}

SphereField helical_wave(const GridSpec& g, double kappa, double theta, double t) {
    double unit = 2.0 * M_PI / g.box_length;
    double ratio = kappa / unit;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw ConfigError("helical_wave: kappa must be an integer multiple of 2 pi / L");
    if (std::abs(kappa) >= g.xi_max())
        throw ConfigError("helical_wave: kappa not resolvable on the grid");
    double omega = sq(kappa) * std::cos(theta);
    SphereField f(g, Vec3{0, 0, 1});
    double h = g.h();
    double st = std::sin(theta), ct = std::cos(theta);
    for (std::size_t i = 0; i < f.size(); ++i) {
        // x1 is the slowest axis in row-major order
        int i0 = static_cast<int>(i / (f.size() / g.n));
        double u = kappa * (i0 * h) - omega * t;
        f.phi.set(i, Vec3{st * std::cos(u), st * std::sin(u), ct});
    }
    return f;
}

static FlowState evolve_impl(const FlowState& start, double t_end, double dt,
                             const EvolveOptions& opts, VectorField3* lin) {
    if (dt == 0) throw ConfigError("evolve: dt must be nonzero");
    const GridSpec& g = start.field.grid();
    double adt = std::abs(dt);
    if (adt > g.dt_hint * (1 + 1e-12))
        throw ConfigError("evolve: dt exceeds dt_hint");
    if (adt * sq(g.xi_max()) > opts.stability_constant * (1 + 1e-12))
        throw ConfigError("evolve: dt outside the RK4 stability region");

    FlowState st = start;
    double span = t_end - st.t;
    if (span * dt < 0) throw ConfigError("evolve: dt sign opposite to t_end - t");
    long nsteps = static_cast<long>(std::ceil(std::abs(span) / adt - 1e-12));

    for (long s = 0; s < nsteps; ++s) {
        double step = dt;
        if (s == nsteps - 1) step = t_end - st.t;  // land exactly on t_end

        VectorField3& phi = st.field.phi;
        VectorField3 k1 = rhs_of(phi);
        VectorField3 p2 = phi;
        axpy(p2, step / 2, k1);
        VectorField3 k2 = rhs_of(p2);
        VectorField3 p3 = phi;
        axpy(p3, step / 2, k2);
        VectorField3 k3 = rhs_of(p3);
        VectorField3 p4 = phi;
        axpy(p4, step, k3);
        VectorField3 k4 = rhs_of(p4);

        VectorField3 lk1, lk2, lk3, lk4;
        if (lin) {
            auto lin_rhs = [&](const VectorField3& base, const VectorField3& l) {
                VectorField3 r = cross_fields(l, spectral_laplacian(base));
                axpy(r, 1.0, cross_fields(base, spectral_laplacian(l)));
                return r;
            };
            lk1 = lin_rhs(phi, *lin);
            VectorField3 l2 = *lin;
            axpy(l2, step / 2, lk1);
            lk2 = lin_rhs(p2, l2);
            VectorField3 l3 = *lin;
            axpy(l3, step / 2, lk2);
            lk3 = lin_rhs(p3, l3);
            VectorField3 l4 = *lin;
            axpy(l4, step, lk3);
            lk4 = lin_rhs(p4, l4);
        }

        axpy(phi, step / 6, k1);
        axpy(phi, step / 3, k2);
        axpy(phi, step / 3, k3);
        axpy(phi, step / 6, k4);
        check_finite(phi, st.step_count + 1);
        double drift = st.field.max_sphere_defect();
        if (drift > opts.sphere_drift_tol)
            throw StabilityError("sphere drift " + std::to_string(drift) +
                                 " at step " + std::to_string(st.step_count + 1));
        st.field.renormalize();

        if (lin) {
            axpy(*lin, step / 6, lk1);
            axpy(*lin, step / 3, lk2);
            axpy(*lin, step / 3, lk3);
            axpy(*lin, step / 6, lk4);
            // keep phi_lin in the tangent plane
            for (std::size_t i = 0; i < phi.size(); ++i) {
                Vec3 p = phi.at(i);
                Vec3 l = lin->at(i);
                lin->set(i, l - p * p.dot(l));
            }
        }

        st.t += step;
        st.step_count += 1;
        if (opts.callback && opts.cadence > 0 &&
            (st.step_count % opts.cadence == 0 || s == nsteps - 1))
            opts.callback(st);
    }
    return st;
}

FlowState evolve(const FlowState& start, double t_end, double dt,
                 const EvolveOptions& opts) {
    return evolve_impl(start, t_end, dt, opts, nullptr);
}

LinearizedState evolve_linearized(const LinearizedState& start, double t_end,
                                  double dt, const EvolveOptions& opts) {
    LinearizedState out = start;
    out.base = evolve_impl(start.base, t_end, dt, opts, &out.lin);
    return out;
}

}  // namespace smlab
