#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smlab/scenario.hpp"
#include "smlab/smap.hpp"

using namespace smlab;

namespace {

ScenarioConfig small_bump_cfg(int n = 64, double L = 8.0) {
    ScenarioConfig cfg;
    cfg.scenario = "gaussian_bump";
    cfg.grid = GridSpec(2, n, L);
    cfg.phys.width = 0.6;
    cfg.phys.amplitude = 0.08;
    return cfg;
}

// independent oracle: 8th-order centered finite-difference Laplacian
ScalarField fd_laplacian8(const ScalarField& f) {
    static const double c[5] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0,
                                -1.0 / 560.0};
    const GridSpec& g = f.grid();
    const int n = g.n;
    const double h2 = sq(g.h());
    ScalarField out(g);
    for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1) {
            double acc = 2 * c[0] * f[f.index(i0, i1)];
            for (int o = 1; o <= 4; ++o) {
                acc += c[o] * (f[f.index((i0 + o) % n, i1)] +
                               f[f.index((i0 - o + n) % n, i1)] +
                               f[f.index(i0, (i1 + o) % n)] +
                               f[f.index(i0, (i1 - o + n) % n)]);
            }
            out[out.index(i0, i1)] = acc / h2;
        }
    return out;
}

}  // namespace

TEST_CASE("smap_rhs vanishes on constant maps") {
    GridSpec g(2, 16, 4.0);
    SphereField f(g, Vec3{0, 0, 1});
    CHECK(linf(smap_rhs(f)) < 1e-14);
}

TEST_CASE("smap_rhs is pointwise orthogonal to phi") {
    GridSpec g(2, 64, 2.0 * M_PI);
    SphereField f = helical_wave(g, 2.0, 0.8, 0.0);
    VectorField3 r = smap_rhs(f);
    double worst = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        worst = std::max(worst, std::abs(f.phi.at(i).dot(r.at(i))));
    CHECK(worst < 1e-12);
}

TEST_CASE("smap_rhs against the finite-difference oracle") {
    ScenarioConfig cfg = small_bump_cfg(128);
    SphereField f = make_initial(cfg);
    VectorField3 spectral = smap_rhs(f);
    // oracle: phi x (FD Laplacian)
    VectorField3 fd(f.grid());
    for (int c = 0; c < 3; ++c) fd.comp(c) = fd_laplacian8(f.phi.comp(c));
    VectorField3 oracle(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i)
        oracle.set(i, f.phi.at(i).cross(fd.at(i)));
    VectorField3 diff = spectral;
    for (std::size_t i = 0; i < f.size(); ++i)
        diff.set(i, diff.at(i) - oracle.at(i));
    CHECK(l2(diff) / l2(spectral) < 1e-6);
}

TEST_CASE("helical wave is an exact solution (substitution)") {
    GridSpec g(2, 64, 2.0 * M_PI);
    // theta = pi/2: omega = 0 and Delta phi is parallel to -phi
    {
        SphereField f = helical_wave(g, 1.0, M_PI / 2, 0.0);
        CHECK(linf(smap_rhs(f)) < 1e-10);
    }
    // theta = pi/4, kappa = 1: residual of d_t phi = phi x Delta phi with the
    // exact omega = kappa^2 cos(theta)
    {
        double theta = M_PI / 4, kappa = 1.0;
        double omega = sq(kappa) * std::cos(theta);
        SphereField f = helical_wave(g, kappa, theta, 0.0);
        VectorField3 rhs = smap_rhs(f);
        double worst = 0;
        double h = g.h();
        for (int i0 = 0; i0 < g.n; ++i0)
            for (int i1 = 0; i1 < g.n; ++i1) {
                double u = kappa * i0 * h;
                // d_t phi at t=0: omega sin(theta) (sin u, -cos u, 0)
                Vec3 dt_phi{omega * std::sin(theta) * std::sin(u),
                            -omega * std::sin(theta) * std::cos(u), 0};
                Vec3 res = rhs.at(f.phi.x.index(i0, i1)) - dt_phi;
                worst = std::max(worst, res.norm());
            }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("helical wave input validation") {
    GridSpec g(2, 32, 2.0 * M_PI);
    CHECK_THROWS_AS(helical_wave(g, 1.3, 0.5, 0.0), ConfigError);
    CHECK_THROWS_AS(helical_wave(g, 40.0, 0.5, 0.0), ConfigError);
    SphereField f = helical_wave(g, 0.0, 0.7, 0.0);
    CHECK(f.max_sphere_defect() < 1e-14);
}

TEST_CASE("evolve keeps constant maps fixed") {
    GridSpec g(2, 16, 4.0);
    SphereField f(g, Vec3{0, 0, 1});
    FlowState fin = evolve({f, 0.0, 0}, 0.1, g.dt_hint, {});
    double worst = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        worst = std::max(worst, (fin.field.phi.at(i) - f.Q).norm());
    CHECK(worst < 1e-14);
    CHECK(fin.t == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("evolve matches the helical solution") {
    GridSpec g(2, 64, 2.0 * M_PI);
    g.dt_hint = std::max(g.dt_hint, 2e-4);
    SphereField init = helical_wave(g, 2.0, M_PI / 4, 0.0);
    FlowState fin = evolve({init, 0.0, 0}, 0.2, 2e-4, {});
    SphereField exact = helical_wave(g, 2.0, M_PI / 4, fin.t);
    VectorField3 diff = fin.field.phi;
    for (std::size_t i = 0; i < diff.size(); ++i)
        diff.set(i, diff.at(i) - exact.phi.at(i));
    CHECK(l2(diff) < 1e-8);
    CHECK(fin.field.max_sphere_defect() < 1e-10);
}

TEST_CASE("energies: closed forms and conservation") {
    GridSpec g(2, 64, 2.0 * M_PI);
    SphereField c(g, Vec3{0, 0, 1});
    CHECK(energy_E0(c) == 0.0);
    CHECK(energy_E1(c) < 1e-20);
    // helical wave: E1 = kappa^2 sin^2(theta) |B|
    double kappa = 3.0, theta = 0.9;
    SphereField hel = helical_wave(g, kappa, theta, 0.0);
    double expected = sq(kappa) * sq(std::sin(theta)) * sq(g.box_length);
    CHECK(energy_E1(hel) == doctest::Approx(expected).epsilon(1e-12));

    ScenarioConfig cfg = small_bump_cfg();
    SphereField f = make_initial(cfg);
    double e0 = energy_E0(f), e1 = energy_E1(f);
    FlowState fin = evolve({f, 0.0, 0}, 0.05, cfg.grid.dt_hint, {});
    CHECK(std::abs(energy_E0(fin.field) - e0) / e0 < 1e-6);
    CHECK(std::abs(energy_E1(fin.field) - e1) / e1 < 1e-6);
}

TEST_CASE("time reversal returns the initial data") {
    ScenarioConfig cfg = small_bump_cfg();
    SphereField f = make_initial(cfg);
    double dt = cfg.grid.dt_hint;
    FlowState fwd = evolve({f, 0.0, 0}, 0.05, dt, {});
    FlowState back = evolve(fwd, 0.0, -dt, {});
    VectorField3 diff = back.field.phi;
    for (std::size_t i = 0; i < diff.size(); ++i)
        diff.set(i, diff.at(i) - f.phi.at(i));
    CHECK(l2(diff) < 1e-7);
}

TEST_CASE("evolve validates its preconditions") {
    GridSpec g(2, 32, 2.0);
    SphereField f(g, Vec3{0, 0, 1});
    CHECK_THROWS_AS(evolve({f, 0.0, 0}, 0.1, 10 * g.dt_hint, {}), ConfigError);
    CHECK_THROWS_AS(evolve({f, 0.0, 0}, 0.1, -g.dt_hint, {}), ConfigError);
    CHECK_THROWS_AS(evolve({f, 0.0, 0}, 0.1, 0.0, {}), ConfigError);
}

TEST_CASE("linearized_rhs basics") {
    GridSpec g(2, 32, 4.0);
    SphereField q(g, Vec3{0, 0, 1});
    VectorField3 lin(g);
    for (std::size_t i = 0; i < lin.size(); ++i) lin.set(i, Vec3{1, 0, 0});
    CHECK(linf(linearized_rhs(q, lin)) < 1e-13);
    for (std::size_t i = 0; i < lin.size(); ++i) lin.set(i, Vec3{0, 0.5, 0.5});
    CHECK_THROWS_AS(linearized_rhs(q, lin), ConstraintError);
}

TEST_CASE("linearized_rhs along a symmetry direction") {
    // phi_lin = d_1 phi satisfies the linearized equation with right side
    // d_1(phi x Delta phi) (translation equivariance)
    GridSpec g(2, 64, 2.0 * M_PI);
    SphereField hel = helical_wave(g, 2.0, 0.6, 0.0);
    VectorField3 lin(g);
    for (int c = 0; c < 3; ++c) lin.comp(c) = spectral_derivative(hel.phi.comp(c), 0);
    VectorField3 got = linearized_rhs(hel, lin);
    VectorField3 rhs = smap_rhs(hel);
    VectorField3 expect(g);
    for (int c = 0; c < 3; ++c) expect.comp(c) = spectral_derivative(rhs.comp(c), 0);
    double worst = 0;
    for (std::size_t i = 0; i < got.size(); ++i)
        worst = std::max(worst, (got.at(i) - expect.at(i)).norm());
    CHECK(worst < 1e-9);
}

TEST_CASE("linearized flow against the two-solution finite difference") {
    // (evolve(phi + h phi_lin) - evolve(phi)) / h approaches the evolved
    // linearization at O(h): the error roughly halves when h halves.
    ScenarioConfig cfg = small_bump_cfg(64);
    SphereField base = make_initial(cfg);
    VectorField3 bump = tangent_bump(base, cfg.phys);

    double T = 0.02, dt = cfg.grid.dt_hint;
    LinearizedState ls{{base, 0.0, 0}, bump};
    LinearizedState lin_fin = evolve_linearized(ls, T, dt, {});
    FlowState base_fin = evolve({base, 0.0, 0}, T, dt, {});

    auto fd_error = [&](double h) {
        SphereField pert = perturb(base, bump, h);
        FlowState pert_fin = evolve({pert, 0.0, 0}, T, dt, {});
        double worst = 0;
        for (std::size_t i = 0; i < base.size(); ++i) {
            Vec3 fd = (pert_fin.field.phi.at(i) - base_fin.field.phi.at(i)) * (1.0 / h);
            worst = std::max(worst, (fd - lin_fin.lin.at(i)).norm());
        }
        return worst;
    };
    double e1 = fd_error(1e-3);
    double e2 = fd_error(5e-4);
    CHECK(e1 / e2 > 1.5);
    CHECK(e1 / e2 < 3.0);
}

TEST_CASE("tangency is propagated by the linearized flow") {
    ScenarioConfig cfg = small_bump_cfg(32);
    SphereField base = make_initial(cfg);
    VectorField3 bump = tangent_bump(base, cfg.phys);
    LinearizedState ls{{base, 0.0, 0}, bump};
    LinearizedState fin = evolve_linearized(ls, 0.02, cfg.grid.dt_hint, {});
    double worst = 0;
    for (std::size_t i = 0; i < base.size(); ++i)
        worst = std::max(worst,
                         std::abs(fin.base.field.phi.at(i).dot(fin.lin.at(i))));
    CHECK(worst < 1e-8);
}

TEST_CASE("boundary tail stays small for bump scenarios") {
    ScenarioConfig cfg = small_bump_cfg();
    SphereField f = make_initial(cfg);
    CHECK(boundary_tail(f) < 1e-7);
    FlowState fin = evolve({f, 0.0, 0}, 0.05, cfg.grid.dt_hint, {});
    CHECK(boundary_tail(fin.field) < 1e-5);
}
