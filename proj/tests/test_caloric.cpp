#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smlab/frame.hpp"
#include "smlab/scenario.hpp"

using namespace smlab;

namespace {

ScenarioConfig bump_cfg(int n = 64, double width = 0.5, double amp = 0.06) {
    ScenarioConfig cfg;
    cfg.scenario = "gaussian_bump";
    cfg.grid = GridSpec(2, n, 8.0);
    cfg.phys.width = width;
    cfg.phys.amplitude = amp;
    return cfg;
}

}  // namespace

TEST_CASE("parabolic grid construction and invariants") {
    ParabolicGrid p = ParabolicGrid::dyadic(std::exp2(-10), 6, 2.0);
    GridSpec g(2, 128, 8.0);
    p.validate(g);
    CHECK(p.s_nodes.front() == 0.0);
    // contains the binary powers 2^{-j}
    for (double target : {0.5, 0.25, 0.0625}) {
        bool found = false;
        for (double s : p.s_nodes) found = found || std::abs(s - target) < 1e-12;
        CHECK(found);
    }
    // refinement halves the grading
    ParabolicGrid r = p.refined();
    r.validate(g);
    CHECK(r.count() > 2 * p.count() - 4);
    CHECK_THROWS_AS(ParabolicGrid::geometric(1e-4, 1.6, 1.0), ConfigError);
    CHECK_THROWS_AS(ParabolicGrid::dyadic(3e-4, 6, 1.0), ConfigError);
}

TEST_CASE("heat_rhs on constant and helical maps") {
    GridSpec g(2, 64, 2.0 * M_PI);
    SphereField c(g, Vec3{0, 0, 1});
    CHECK(linf(heat_rhs(c)) < 1e-14);

    // helical snapshot: Delta phi + phi |d phi|^2 =
    // -kappa^2 (sin cos u, sin sin u, 0) + kappa^2 sin^2 * phi
    double kappa = 2.0, theta = 0.7;
    SphereField hel = helical_wave(g, kappa, theta, 0.0);
    VectorField3 rhs = heat_rhs(hel);
    double worst = 0, tang = 0;
    double st = std::sin(theta);
    for (int i0 = 0; i0 < g.n; ++i0)
        for (int i1 = 0; i1 < g.n; ++i1) {
            std::size_t i = hel.phi.x.index(i0, i1);
            double u = kappa * i0 * g.h();
            Vec3 expect =
                Vec3{st * std::cos(u), st * std::sin(u), 0} * (-sq(kappa)) +
                hel.phi.at(i) * (sq(kappa) * sq(st));
            worst = std::max(worst, (rhs.at(i) - expect).norm());
            tang = std::max(tang, std::abs(hel.phi.at(i).dot(rhs.at(i))));
        }
    CHECK(worst < 1e-10);
    CHECK(tang < 1e-10);

    // equator great circle (theta = pi/2) is harmonic: rhs = 0
    SphereField eq = helical_wave(g, 1.0, M_PI / 2, 0.0);
    CHECK(linf(heat_rhs(eq)) < 1e-11);
}

TEST_CASE("heat_rhs tangency on random bump data") {
    ScenarioConfig cfg = bump_cfg();
    cfg.scenario = "random_band";
    SphereField f = make_initial(cfg);
    VectorField3 rhs = heat_rhs(f);
    double worst = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        worst = std::max(worst, std::abs(f.phi.at(i).dot(rhs.at(i))));
    CHECK(worst < 1e-10);
}

TEST_CASE("heat_evolve fixes constant maps and decays bumps") {
    GridSpec g(2, 32, 8.0);
    SphereField c(g, Vec3{0, 0, 1});
    ParabolicGrid p = ParabolicGrid::dyadic(std::exp2(-8), 6, 1.0);
    HeatTrajectory traj = heat_evolve(c, p);
    double worst = 0;
    for (const auto& s : traj.snapshots)
        for (std::size_t i = 0; i < s.size(); ++i)
            worst = std::max(worst, (s.phi.at(i) - c.Q).norm());
    CHECK(worst < 1e-14);

    // decay oracle: compare against the linear heat semigroup of phi - Q
    ScenarioConfig cfg = bump_cfg();
    SphereField f = make_initial(cfg);
    double smax = 100.0 * sq(cfg.phys.width) * 0.3;  // well past the bump scale
    ParabolicGrid pg = ParabolicGrid::dyadic(std::exp2(-10), 6, smax);
    HeatTrajectory tr = heat_evolve(f, pg);

    double init_dev = 0, final_dev = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        init_dev = std::max(init_dev, (f.phi.at(i) - f.Q).norm());
        final_dev = std::max(final_dev,
                             (tr.snapshots.back().phi.at(i) - f.Q).norm());
    }
    VectorField3 lin(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) lin.set(i, f.phi.at(i) - f.Q);
    double lin_dev = linf(heat_semigroup(lin, smax));
    CHECK(final_dev < 0.1 * init_dev);
    CHECK(final_dev < 3.0 * lin_dev + 1e-12);
    CHECK(final_dev > lin_dev / 3.0 - 1e-12);

    // Dirichlet energy dissipates along the flow
    double prev = energy_E1(tr.snapshots.front());
    for (int i = 1; i < tr.count(); ++i) {
        double cur = energy_E1(tr.snapshots[i]);
        CHECK(cur <= prev * (1 + 1e-10));
        prev = cur;
    }
}

TEST_CASE("heat flow decay over the advertised horizon") {
    // |phi(S) - Q| < 0.01 |phi(0) - Q| for S >= 100 w^2 (sup norms)
    ScenarioConfig cfg = bump_cfg(64, 0.4, 0.06);
    SphereField f = make_initial(cfg);
    double smax = 100.0 * sq(cfg.phys.width);
    ParabolicGrid pg = ParabolicGrid::dyadic(std::exp2(-10), 6, smax);
    HeatTrajectory tr = heat_evolve(f, pg);
    double init_dev = 0, final_dev = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        init_dev = std::max(init_dev, (f.phi.at(i) - f.Q).norm());
        final_dev = std::max(final_dev, (tr.snapshots.back().phi.at(i) - f.Q).norm());
    }
    CHECK(final_dev < 0.01 * init_dev);
}

TEST_CASE("heat trajectory tangency at every node") {
    ScenarioConfig cfg = bump_cfg();
    SphereField f = make_initial(cfg);
    ParabolicGrid pg = ParabolicGrid::dyadic(std::exp2(-10), 6, 1.0);
    HeatTrajectory tr = heat_evolve(f, pg);
    double worst = 0;
    for (const auto& snap : tr.snapshots) {
        VectorField3 rhs = heat_rhs(snap);
        for (std::size_t i = 0; i < snap.size(); ++i)
            worst = std::max(worst, std::abs(snap.phi.at(i).dot(rhs.at(i))));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("r_matrix structure") {
    GridSpec g(2, 32, 8.0);
    SphereField c(g, Vec3{0, 0, 1});
    ParabolicGrid p = ParabolicGrid::dyadic(std::exp2(-8), 6, 0.5);
    HeatTrajectory traj = heat_evolve(c, p);
    RotationField r0 = r_matrix(traj, 0);
    CHECK(linf(r0.axial) < 1e-14);

    ScenarioConfig cfg = bump_cfg();
    SphereField f = make_initial(cfg);
    HeatTrajectory tr = heat_evolve(f, ParabolicGrid::dyadic(std::exp2(-10), 6, 0.5));
    RotationField r = r_matrix(tr, 3);
    // antisymmetry of the materialized matrix
    double anti = 0;
    for (std::size_t i = 0; i < f.size(); i += 97) {
        auto m = r.matrix(i);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                anti = std::max(anti, std::abs(m[3 * a + b] + m[3 * b + a]));
    }
    CHECK(anti < 1e-12);
    CHECK_THROWS_AS(r_matrix(tr, 10000), ConfigError);
}

TEST_CASE("r_matrix agrees with the finite-difference d_s form") {
    // R = d_s phi . phi^T - phi . (d_s phi)^T with discrete d_s approaches the
    // Delta-based form as the trajectory is refined.
    ScenarioConfig cfg = bump_cfg();
    SphereField f = make_initial(cfg);
    auto defect = [&](int per_octave, int substeps) {
        ParabolicGrid pg = ParabolicGrid::dyadic(std::exp2(-10), per_octave, 0.25);
        HeatOptions opts;
        opts.substeps = substeps;
        HeatTrajectory tr = heat_evolve(f, pg, opts);
        // centered difference at an interior node
        int i = tr.count() / 2;
        double h_lo = tr.pgrid.s_nodes[i] - tr.pgrid.s_nodes[i - 1];
        double h_hi = tr.pgrid.s_nodes[i + 1] - tr.pgrid.s_nodes[i];
        // nonuniform 3-point derivative of phi
        double c_lo = -h_hi / (h_lo * (h_lo + h_hi));
        double c_mid = (h_hi - h_lo) / (h_lo * h_hi);
        double c_hi = h_lo / (h_hi * (h_lo + h_hi));
        VectorField3 ds(f.grid());
        for (int c = 0; c < 3; ++c)
            for (std::size_t p = 0; p < ds.size(); ++p)
                ds.comp(c)[p] = c_lo * tr.at(i - 1).phi.comp(c)[p] +
                                c_mid * tr.at(i).phi.comp(c)[p] +
                                c_hi * tr.at(i + 1).phi.comp(c)[p];
        // axial vector of d_s phi . phi^T - phi . d_s phi^T is d_s phi x phi
        RotationField rexact = r_matrix(tr, i);
        double worst = 0;
        for (std::size_t p = 0; p < ds.size(); ++p) {
            Vec3 fd_axial = ds.at(p).cross(tr.at(i).phi.at(p));
            worst = std::max(worst, (fd_axial - rexact.axial.at(p)).norm());
        }
        return worst;
    };
    double d1 = defect(6, 2);
    double d2 = defect(12, 4);
    CHECK(d2 < d1 / 2.5);  // second-order stencil, refined grid
}

TEST_CASE("transport_frame on the trivial trajectory") {
    GridSpec g(2, 16, 4.0);
    SphereField c(g, Vec3{0, 0, 1});
    ParabolicGrid p = ParabolicGrid::dyadic(std::exp2(-6), 6, 0.5);
    HeatTrajectory traj = heat_evolve(c, p);
    Vec3 qp{1, 0, 0};
    FrameField fr = transport_frame(traj, qp);
    double worst = 0;
    for (int i = 0; i < fr.count(); ++i)
        for (std::size_t p2 = 0; p2 < c.size(); ++p2) {
            worst = std::max(worst, (fr.v[i].at(p2) - qp).norm());
            worst = std::max(worst, (fr.w[i].at(p2) - Vec3{0, 1, 0}).norm());
        }
    CHECK(worst < 1e-13);
}

TEST_CASE("transport_frame invariants and input validation") {
    ScenarioConfig cfg = bump_cfg();
    SphereField f = make_initial(cfg);
    HeatTrajectory tr = heat_evolve(f, ParabolicGrid::dyadic(std::exp2(-10), 6, 1.0));
    CHECK_THROWS_AS(transport_frame(tr, Vec3{0, 0, 1}), ConstraintError);
    CHECK_THROWS_AS(transport_frame(tr, Vec3{2, 0, 0}), ConstraintError);
    FrameField fr = transport_frame(tr, Vec3{1, 0, 0});
    CHECK(fr.max_invariant_defect(tr) < 1e-8);
}

TEST_CASE("far-from-equilibrium trajectories are rejected") {
    // a large bump that has not decayed by S_max
    ScenarioConfig cfg = bump_cfg(32, 1.2, 1.2);
    SphereField f = make_initial(cfg);
    HeatOptions opts;
    opts.substeps = 8;
    opts.sphere_drift_tol = 1e-4;  // large data, only the rejection matters here
    HeatTrajectory tr =
        heat_evolve(f, ParabolicGrid::dyadic(std::exp2(-8), 6, 0.02), opts);
    CHECK_THROWS_AS(transport_frame(tr, Vec3{1, 0, 0}), StabilityError);
}

TEST_CASE("parallel transport residual shrinks under s-refinement") {
    ScenarioConfig cfg = bump_cfg();
    SphereField f = make_initial(cfg);
    auto monitor = [&](const ParabolicGrid& pg) {
        HeatTrajectory tr = heat_evolve(f, pg);
        FrameField fr = transport_frame(tr, Vec3{1, 0, 0});
        // discrete w . d_s v at an interior node
        double worst = 0;
        for (int i = 1; i + 1 < tr.count(); ++i) {
            const auto& s = tr.pgrid.s_nodes;
            double h_lo = s[i] - s[i - 1], h_hi = s[i + 1] - s[i];
            double c_lo = -h_hi / (h_lo * (h_lo + h_hi));
            double c_mid = (h_hi - h_lo) / (h_lo * h_hi);
            double c_hi = h_lo / (h_hi * (h_lo + h_hi));
            for (std::size_t p = 0; p < f.size(); p += 37) {
                Vec3 dv = fr.v[i - 1].at(p) * c_lo + fr.v[i].at(p) * c_mid +
                          fr.v[i + 1].at(p) * c_hi;
                worst = std::max(worst, std::abs(fr.w[i].at(p).dot(dv)));
            }
        }
        return worst;
    };
    ParabolicGrid pg = ParabolicGrid::dyadic(std::exp2(-10), 6, 1.0);
    double m1 = monitor(pg);
    double m2 = monitor(pg.refined());
    CHECK(m2 < m1 / 3.0);  // second-order stencil dominates
}
