#include "smlab/heat.hpp"

namespace smlab {

ParabolicGrid ParabolicGrid::geometric(double s_first, double ratio, double S_max) {
    if (!(s_first > 0) || !(ratio > 1.0) || !(S_max > s_first))
        throw ConfigError("ParabolicGrid: need 0 < s_first < S_max and ratio > 1");
    if (ratio > 1.25 + 1e-12)
        throw ConfigError("ParabolicGrid: grading ratio must not exceed 1.25");
    ParabolicGrid p;
    p.S_max = S_max;
    p.s_nodes.push_back(0.0);
    double s = s_first;
    while (s < S_max * (1 - 1e-12)) {
        p.s_nodes.push_back(s);
        s *= ratio;
    }
    p.s_nodes.push_back(S_max);
    return p;
}

ParabolicGrid ParabolicGrid::dyadic(double s_first, int per_octave, double S_max) {
    double e = std::log2(s_first);
    if (std::abs(e - std::round(e)) > 1e-9)
        throw ConfigError("ParabolicGrid::dyadic: s_first must be a power of two");
    if (per_octave < 4)
        throw ConfigError("ParabolicGrid::dyadic: need >= 4 nodes per octave");
    return geometric(s_first, std::exp2(1.0 / per_octave), S_max);
}

ParabolicGrid ParabolicGrid::refined() const {
    ParabolicGrid p;
    p.S_max = S_max;
    p.s_nodes.push_back(0.0);
    for (std::size_t i = 1; i + 1 < s_nodes.size(); ++i) {
        p.s_nodes.push_back(s_nodes[i]);
        p.s_nodes.push_back(std::sqrt(s_nodes[i] * s_nodes[i + 1]));
    }
    if (s_nodes.size() > 1) p.s_nodes.push_back(s_nodes.back());
    // keep the leading interval graded too
    if (s_nodes.size() > 2)
        p.s_nodes.insert(p.s_nodes.begin() + 1,
                         s_nodes[1] / std::sqrt(s_nodes[2] / s_nodes[1]));
    return p;
}

void ParabolicGrid::validate(const GridSpec& g) const {
    if (s_nodes.empty() || s_nodes[0] != 0.0)
        throw ConfigError("ParabolicGrid: first node must be s = 0");
    for (std::size_t i = 1; i + 1 < s_nodes.size(); ++i) {
        if (s_nodes[i + 1] <= s_nodes[i])
            throw ConfigError("ParabolicGrid: nodes must increase");
        if (s_nodes[i] > 0 && s_nodes[i + 1] / s_nodes[i] > 1.25 + 1e-9)
            throw ConfigError("ParabolicGrid: grading ratio exceeds 1.25");
    }
    if (s_nodes.size() > 1) {
        int k_max = DyadicWindow::from_grid(g).k_max;
        if (s_nodes[1] > std::exp2(-2 * k_max) * (1 + 1e-9))
            throw ConfigError("ParabolicGrid: first node coarser than 2^{-2 k_max}");
    }
}

VectorField3 heat_rhs(const SphereField& field) {
    const GridSpec& g = field.grid();
    VectorField3 lap(g);
    ScalarField grad2(g);
    std::vector<ScalarField> df;
    ScalarField lp(g);
    for (int c = 0; c < 3; ++c) {
        derivatives_and_laplacian(field.phi.comp(c), df, lp);
        lap.comp(c) = lp;
        for (int m = 0; m < g.d; ++m)
            for (std::size_t i = 0; i < grad2.size(); ++i) grad2[i] += sq(df[m][i]);
    }
    VectorField3 out(g);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.set(i, lap.at(i) + field.phi.at(i) * grad2[i]);
    return out;
}

HeatTrajectory heat_evolve(const SphereField& initial, const ParabolicGrid& pgrid,
                           const HeatOptions& opts) {
    pgrid.validate(initial.grid());
    if (opts.substeps < 1) throw ConfigError("heat_evolve: substeps >= 1");

    HeatTrajectory traj;
    traj.pgrid = pgrid;
    traj.snapshots.reserve(pgrid.count());
    SphereField cur = initial;
    traj.snapshots.push_back(cur);

    const GridSpec& g = initial.grid();
    for (int i = 0; i + 1 < pgrid.count(); ++i) {
        double ds_total = pgrid.s_nodes[i + 1] - pgrid.s_nodes[i];
        double ds = ds_total / opts.substeps;
        for (int sub = 0; sub < opts.substeps; ++sub) {
            // N(u) = phi sum_m |d_m phi|^2
            ScalarField grad2(g);
            for (int c = 0; c < 3; ++c)
                for (int m = 0; m < g.d; ++m) {
                    ScalarField df = spectral_derivative(cur.phi.comp(c), m);
                    for (std::size_t p = 0; p < grad2.size(); ++p)
                        grad2[p] += sq(df[p]);
                }
            VectorField3 stage(g);
            for (std::size_t p = 0; p < stage.size(); ++p)
                stage.set(p, cur.phi.at(p) * (1.0 + ds * grad2[p]));
            cur.phi = heat_semigroup(stage, ds);

            for (int c = 0; c < 3; ++c)
                for (std::size_t p = 0; p < cur.size(); ++p)
                    if (!std::isfinite(cur.phi.comp(c)[p]))
                        throw DivergenceError("heat_evolve: NaN near s = " +
                                              std::to_string(pgrid.s_nodes[i]));
            double drift = cur.max_sphere_defect();
            if (drift > opts.sphere_drift_tol)
                throw StabilityError("heat_evolve: sphere drift " +
                                     std::to_string(drift));
            cur.renormalize();
        }
        traj.snapshots.push_back(cur);
    }
    return traj;
}

}  // namespace smlab
