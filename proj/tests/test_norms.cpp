#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smlab/norms.hpp"
#include "smlab/probe.hpp"
#include "smlab/spectral.hpp"

using namespace smlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SpaceTimeField random_band_evolution(const GridSpec& g, int k, std::uint64_t seed,
                                     double T, int nt) {
    Rng rng(seed);
    ComplexField f = random_band_field(g, k, rng);
    return free_evolution(f, -T, 2 * T / (nt - 1), nt);
}

// brute-force iterated lateral norm for axis-aligned e on small grids
double brute_lateral_axis0(const SpaceTimeField& u, double p, double q) {
    const GridSpec& g = u.grid;
    std::vector<double> wt(u.nt(), u.dt);
    wt.front() *= 0.5;
    wt.back() *= 0.5;
    double outer = std::isinf(p) ? 0.0 : 0.0;
    std::vector<double> inner(g.n, 0.0);
    for (int i0 = 0; i0 < g.n; ++i0) {
        if (std::isinf(q)) {
            double m = 0;
            for (int j = 0; j < u.nt(); ++j)
                for (int i1 = 0; i1 < g.n; ++i1)
                    m = std::max(m, std::abs(u.slices[j][u.slices[j].index(i0, i1)]));
            inner[i0] = m;
        } else {
            double acc = 0;
            for (int j = 0; j < u.nt(); ++j)
                for (int i1 = 0; i1 < g.n; ++i1)
                    acc += wt[j] * g.h() *
                           std::pow(std::abs(u.slices[j][u.slices[j].index(i0, i1)]), q);
            inner[i0] = std::pow(acc, 1.0 / q);
        }
    }
    if (std::isinf(p)) {
        for (double v : inner) outer = std::max(outer, v);
        return outer;
    }
    double acc = 0;
    for (double v : inner) acc += g.h() * std::pow(v, p);
    return std::pow(acc, 1.0 / p);
}

}  // namespace

TEST_CASE("velocity set cardinality and lattice") {
    VelocitySet W = VelocitySet::W(1, 2);
    CHECK(W.count() == doctest::Approx(std::exp2(2 * 1 + 2 * 2 + 1) + 1));
    auto lams = W.lambdas();
    CHECK(lams.size() == static_cast<std::size_t>(W.count()));
    CHECK(lams.front() == -2.0);
    CHECK(lams.back() == 2.0);
    // symmetric about zero
    for (std::size_t i = 0; i < lams.size(); ++i)
        CHECK(lams[i] == doctest::Approx(-lams[lams.size() - 1 - i]).epsilon(1e-15));
    CHECK_THROWS_AS(VelocitySet::W(9, 2).lambdas(), ConfigError);
}

TEST_CASE("lateral norm: Fubini case p = q = 2") {
    GridSpec g(2, 32, 2.0 * M_PI);
    SpaceTimeField u = random_band_evolution(g, 2, 101, 0.3, 9);
    double full = norm_lp_xt(u, 2.0);
    for (const Vec3& e : {Vec3{1, 0, 0}, Vec3{0, 1, 0}}) {
        double lat = lateral_norm(u, 2, 2, e, 0.0);
        CHECK(lat == doctest::Approx(full).epsilon(1e-12));
    }
    // and for a rotated direction (shear resampling is an L2 isometry)
    Vec3 ediag{std::cos(M_PI / 8), std::sin(M_PI / 8), 0};
    CHECK(lateral_norm(u, 2, 2, ediag, 0.0) == doctest::Approx(full).epsilon(1e-10));
}

TEST_CASE("lateral norm against the brute-force oracle") {
    GridSpec g(2, 8, 3.0);
    Rng rng(7);
    SpaceTimeField u(g, -0.2, 0.05, 9);
    for (auto& s : u.slices) {
        for (std::size_t i = 0; i < s.size(); ++i)
            s[i] = cplx(rng.normal(), rng.normal());
        s = apply_multiplier(s, [&](const double* xi) {
            return cplx(std::sqrt(sq(xi[0]) + sq(xi[1])) < g.xi_max() / 2 ? 1 : 0, 0);
        });
    }
    Vec3 e1{1, 0, 0};
    for (auto pq : std::vector<std::pair<double, double>>{
             {kInf, 2}, {2, kInf}, {1, 2}, {4, 4}, {1.5, 1.2}}) {
        double got = lateral_norm(u, pq.first, pq.second, e1, 0.0);
        double ref = brute_lateral_axis0(u, pq.first, pq.second);
        CHECK(got == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("definitional identity for tilted norms") {
    GridSpec g(2, 32, 2.0 * M_PI);
    SpaceTimeField u = random_band_evolution(g, 2, 103, 0.25, 9);
    Vec3 e{0, 1, 0};
    double lambda = 0.7;
    double a = lateral_norm(u, kInf, 2, e, lambda);
    SpaceTimeField tu = galilean_transform(u, lambda * e);
    double b = lateral_norm(tu, kInf, 2, e, 0.0);
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
}

TEST_CASE("rotation resampler: isometry and inverse") {
    GridSpec g(2, 32, 2.0 * M_PI);
    Rng rng(11);
    ComplexField f = random_band_field(g, 2, rng);
    double theta = 0.37;
    ComplexField r = rotate_by_angle(f, theta);
    CHECK(l2(r) == doctest::Approx(l2(f)).epsilon(1e-12));
    ComplexField back = rotate_by_angle(r, -theta);
    double dmax = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        dmax = std::max(dmax, std::abs(back[i] - f[i]));
    CHECK(dmax < 1e-9 * linf(f));
    // quarter turn is exact
    ComplexField q = rotate_by_angle(f, M_PI / 2);
    const int n = g.n;
    double qmax = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            qmax = std::max(qmax, std::abs(q[q.index(i, j)] -
                                           f[f.index((n - j) % n, i)]));
    CHECK(qmax == 0.0);
}

TEST_CASE("rotated lateral norm matches the quarter-turn permutation") {
    GridSpec g(2, 32, 2.0 * M_PI);
    SpaceTimeField u = random_band_evolution(g, 2, 104, 0.2, 9);
    // e = (0,1): rotation is the exact quarter-turn; compare against brute
    // force on the permuted field
    double got = lateral_norm(u, kInf, 2, Vec3{0, 1, 0}, 0.0);
    SpaceTimeField perm(g, u.t0, u.dt, u.nt());
    for (int j = 0; j < u.nt(); ++j) perm.slices[j] = rotate_by_angle(u.slices[j], M_PI / 2);
    double ref = brute_lateral_axis0(perm, kInf, 2);
    CHECK(got == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("sum space: singleton reduces to the lateral norm") {
    GridSpec g(2, 32, 2.0 * M_PI);
    SpaceTimeField u = random_band_evolution(g, 2, 105, 0.2, 9);
    VelocitySet W{0, 0};  // k=0, K=0: lambdas {-1, 0, 1} -- use sub-singleton
    // An actual singleton: k such that range collapses is not representable;
    // check instead that the bound never exceeds the single-lambda value at 0.
    SumSpaceOptions opts;
    double single = lateral_norm(u, 2, kInf, Vec3{1, 0, 0}, 0.0);
    SumSpaceBound b = sum_space_norm(u, 2, kInf, Vec3{1, 0, 0},
                                     VelocitySet::W(2, 2), 1, opts);
    CHECK(b.value <= single * (1 + 1e-12));
}

TEST_CASE("sum space: tilted packet prefers its own ray") {
    // A packet riding x1 = lambda0 t: the inhomogeneous local-smoothing norm
    // L^{1,2} rewards concentration, so the aligned tilt is strictly smallest
    // in a single-lambda sweep. On a desk-scale torus the contrast is limited
    // by the coherence-time / drift trade-off (lattice velocity spread), so
    // strict ordering with a small margin is the honest check.
    GridSpec g(2, 64, 2.0 * M_PI);
    Rng rng(9);
    ComplexField F(g);
    for_each_mode(g, [&](std::size_t i, const double* xi) {
        int x1 = static_cast<int>(std::llround(xi[0]));
        if (x1 >= 15 && x1 <= 17 && xi[1] >= 3 && xi[1] <= 6) {
            double w = x1 == 16 ? 1.0 : 0.35;
            F[i] = w * cplx(rng.normal(), rng.normal());
        }
    });
    ComplexField f = fft_inverse(F);
    double nrm = l2(f);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] /= nrm;

    double T = 0.5;
    SpaceTimeField u = free_evolution(f, -T, 2 * T / 32, 33);
    Vec3 e1{1, 0, 0};
    const double lambda0 = 32.0;  // group velocity 2 xi1 at the column center
    double aligned = lateral_norm(u, 1, 2, e1, lambda0);
    // brute-force single-lambda sweep away from the ray
    for (double lam : {0.0, 16.0, 24.0, 40.0, 48.0})
        CHECK(aligned < (1.0 - 1e-3) * lateral_norm(u, 1, 2, e1, lam));
    // the sum-space bound never exceeds any single-lambda value it samples
    VelocitySet W = VelocitySet::W(6, 2);
    SumSpaceOptions opts;
    opts.lambda_samples = 65;
    SumSpaceBound b = sum_space_norm(u, 1, 2, e1, W, 1, opts);
    CHECK(b.value <= aligned * (1 + 1e-9));
}

TEST_CASE("sum space exponent ordering (compr)") {
    GridSpec g(2, 32, 2.0 * M_PI);
    SpaceTimeField u = random_band_evolution(g, 2, 106, 0.2, 9);
    VelocitySet W = VelocitySet::W(2, 1);
    Vec3 e1{1, 0, 0};
    SumSpaceBound b1 = sum_space_norm(u, 2, kInf, e1, W, 1, {});
    SumSpaceBound b2 = sum_space_norm(u, 2, kInf, e1, W, 2, {});
    CHECK(b1.value <= b2.value * (1 + 1e-12));
}

TEST_CASE("intersection space: exact average and duality spot check") {
    GridSpec g(2, 8, 3.0);
    Rng rng(13);
    SpaceTimeField u(g, -0.2, 0.05, 9), v(g, -0.2, 0.05, 9);
    for (auto* f : {&u, &v})
        for (auto& s : f->slices) {
            for (std::size_t i = 0; i < s.size(); ++i)
                s[i] = cplx(rng.normal(), rng.normal());
            s = apply_multiplier(s, [&](const double* xi) {
                return cplx(std::sqrt(sq(xi[0]) + sq(xi[1])) < g.xi_max() / 2 ? 1 : 0,
                            0);
            });
        }
    Vec3 e1{1, 0, 0};
    VelocitySet W = VelocitySet::W(0, 1);  // 9 lambdas
    // lambda-insensitive data (static in t after averaging): average of equal
    // numbers equals the common value; here just check the formula directly
    double acc = 0;
    for (double lam : W.lambdas())
        acc += sq(lateral_norm(u, 2, kInf, e1, lam));
    double expect = std::sqrt(acc / W.count());
    CHECK(intersection_space_norm(u, 2, kInf, e1, W, 2) ==
          doctest::Approx(expect).epsilon(1e-12));

    // |<u,g>| <= Sigma^2-bound(u) * Cap^2-value(g) with dual exponents
    // (L^{2,inf} vs L^{2,1})
    cplx ip = 0;
    std::vector<double> wt(u.nt(), u.dt);
    wt.front() *= 0.5;
    wt.back() *= 0.5;
    for (int j = 0; j < u.nt(); ++j)
        for (std::size_t i = 0; i < u.slices[j].size(); ++i)
            ip += wt[j] * g.cell_volume() * u.slices[j][i] * std::conj(v.slices[j][i]);
    double lhs = std::abs(ip);
    double rhs = sum_space_norm(u, 2, kInf, e1, W, 2, {}).value *
                 intersection_space_norm(v, 2, 1, e1, W, 2);
    CHECK(lhs <= rhs * (1 + 1e-10));
}

TEST_CASE("composite norms: basic structure") {
    GridSpec g(2, 64, 2.0 * M_PI);
    int k = 3;
    double T = 0.1;
    SpaceTimeField u = random_band_evolution(g, k, 107, T, 9);
    NormParams params;
    params.d = 2;
    params.dir_count = 8;
    params.sum_opts.lambda_samples = 9;

    // L^inf_t L^2_x piece equals ||u(0)||_{L^2} by unitarity
    CHECK(norm_linft_lqx(u, 2) ==
          doctest::Approx(l2(u.slices[u.nt() / 2])).epsilon(1e-10));

    CompositeValue f0 = composite_norm(u, k, CompositeNorm::Fk0, params);
    CompositeValue fk = composite_norm(u, k, CompositeNorm::Fk, params);
    CompositeValue gk = composite_norm(u, k, CompositeNorm::Gk, params);
    CompositeValue nk = composite_norm(u, k, CompositeNorm::Nk, params);
    CHECK(f0.value > 0);
    CHECK(fk.value == doctest::Approx(f0.value));  // J=1, m1=0 member
    CHECK(gk.value >= f0.value);                   // G_k adds terms
    CHECK(nk.value > 0);

    // S^omega embedding: S^{omega'} <= 2 S^{omega} for omega' <= omega on
    // band-limited data
    params.omega = 0.5;
    double s12 = composite_norm(u, k, CompositeNorm::Sk_omega, params).value;
    params.omega = 0.25;
    double s14 = composite_norm(u, k, CompositeNorm::Sk_omega, params).value;
    params.omega = 0.0;
    double s0 = composite_norm(u, k, CompositeNorm::Sk_omega, params).value;
    CHECK(s14 <= 2.0 * s12);
    CHECK(s0 <= 2.0 * s14);

    // band leakage rejection
    SpaceTimeField bad = random_band_evolution(g, 1, 108, T, 9);
    CHECK_THROWS_AS(composite_norm(bad, k, CompositeNorm::Fk0, params), BandError);
    // d mismatch
    params.d = 3;
    CHECK_THROWS_AS(composite_norm(u, k, CompositeNorm::Fk0, params), ConfigError);
}

TEST_CASE("composite norms: d = 3") {
    GridSpec g(3, 16, 2.0 * M_PI);
    int k = 2;
    Rng rng(15);
    ComplexField f = random_band_field(g, k, rng);
    SpaceTimeField u = free_evolution(f, -0.05, 0.0125, 9);
    NormParams params;
    params.d = 3;
    CompositeValue fk = composite_norm(u, k, CompositeNorm::Fk, params);
    CompositeValue gk = composite_norm(u, k, CompositeNorm::Gk, params);
    CompositeValue nk = composite_norm(u, k, CompositeNorm::Nk, params);
    CHECK(fk.value > 0);
    CHECK(gk.value >= fk.value);
    CHECK(nk.value > 0);
}

TEST_CASE("composite norm bounds are monotone under added candidates") {
    GridSpec g(2, 64, 2.0 * M_PI);
    int k = 3;
    SpaceTimeField u = random_band_evolution(g, k, 109, 0.1, 9);
    Vec3 e1{1, 0, 0};
    VelocitySet W = VelocitySet::W(k + 40, 2);
    SumSpaceOptions few;
    few.lambda_samples = 3;
    few.greedy_slabs = 0;
    few.packets = false;
    SumSpaceOptions many;
    many.lambda_samples = 17;
    many.greedy_slabs = 8;
    many.packets = true;
    double coarse = sum_space_norm(u, 2, kInf, e1, W, 1, few).value;
    double fine = sum_space_norm(u, 2, kInf, e1, W, 1, many).value;
    CHECK(fine <= coarse * (1 + 1e-12));
}

TEST_CASE("scaling covariance of the lateral norms") {
    // u(x,t) -> u(2x, 4t) on the compatibly rescaled grid (box halved, same
    // index array: the frequency lattice doubles) maps L^{p,q} by the exact
    // continuum factor 2^{-(1/p + (d-1)/q + 2/q)}.
    GridSpec g(2, 64, 2.0 * M_PI);
    GridSpec g2(2, 64, M_PI);
    int k = 2;
    Rng rng(17);
    ComplexField f = random_band_field(g, k, rng);
    ComplexField f2(g2);
    for (std::size_t i = 0; i < f.size(); ++i) f2[i] = f[i];
    double T = 0.2;
    int nt = 17;
    SpaceTimeField u = free_evolution(f, -T, 2 * T / (nt - 1), nt);
    SpaceTimeField u2 = free_evolution(f2, -T / 4, 2 * (T / 4) / (nt - 1), nt);

    for (auto pq : std::vector<std::pair<double, double>>{{2, kInf}, {kInf, 2}, {4, 4}}) {
        double p = pq.first, q = pq.second;
        double expo = (std::isinf(p) ? 0 : 1 / p) +
                      (std::isinf(q) ? 0 : (g.d - 1) / q + 2 / q);
        double a = lateral_norm(u, p, q, Vec3{1, 0, 0}, 0.0);
        double b = lateral_norm(u2, p, q, Vec3{1, 0, 0}, 0.0);
        CHECK(b / a == doctest::Approx(std::exp2(-expo)).epsilon(0.02));
    }
}
