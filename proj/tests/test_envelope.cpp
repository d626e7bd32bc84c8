#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smlab/envelope.hpp"
#include "smlab/probe.hpp"
#include "smlab/smap.hpp"

using namespace smlab;

TEST_CASE("single-band data: explicit envelope formula") {
    GridSpec g(2, 64, 2.0 * M_PI);
    Rng rng(21);
    int k0 = 3;
    ComplexField f = random_band_field(g, k0, rng);
    DyadicWindow w = DyadicWindow::from_grid(g);
    double sigma = 1.0, delta = 1.0 / 40.0;
    FrequencyEnvelope env = frequency_envelope(f, sigma, w.k_min, w.k_max, delta);
    // alpha concentrates at k0 (chi_k overlap only with neighbors)
    double a0 = env.alpha[k0 - w.k_min];
    CHECK(a0 > 0.5 * std::exp2(sigma * k0));
    for (int k = w.k_min; k <= w.k_max; ++k) {
        if (std::abs(k - k0) > 1) continue;
        // gamma_k = max over k' of alpha_{k'} 2^{-delta |k-k'|}; with one
        // dominant band this is alpha_{k0} 2^{-delta |k-k0|}
        double expect = 0;
        for (int kp = w.k_min; kp <= w.k_max; ++kp)
            expect = std::max(expect, env.alpha[kp - w.k_min] *
                                          std::exp2(-delta * std::abs(k - kp)));
        CHECK(env.gamma_at(k) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("slow variation holds exactly by construction") {
    std::vector<double> alpha = {0.2, 3.0, 0.01, 0.5, 1.7, 0.0, 0.9};
    FrequencyEnvelope env = envelope_from_profile(alpha, -2, 0.5, 1.0 / 40.0);
    CHECK(env.slowly_varying_defect() <= 1e-12);
    for (std::size_t i = 0; i < alpha.size(); ++i)
        CHECK(env.gamma[i] >= alpha[i] - 1e-15);
}

TEST_CASE("l2 control of the envelope") {
    // sum gamma^2 <= C(delta, window) sum alpha^2 with C from the geometric
    // series 1/(1 - 2^{-2 delta}), checked against the direct summation oracle
    Rng rng(22);
    double delta = 1.0 / 40.0;
    int window = 13;
    for (int trial = 0; trial < 32; ++trial) {
        std::vector<double> alpha(window);
        for (double& a : alpha) a = rng.uniform();
        FrequencyEnvelope env = envelope_from_profile(alpha, 0, 0.0, delta);
        double oracle = 0;  // direct bound: sum_k max_j (...)^2 term by term
        for (int k = 0; k < window; ++k) {
            double gk = 0;
            for (int j = 0; j < window; ++j)
                gk = std::max(gk, alpha[j] * std::exp2(-delta * std::abs(k - j)));
            oracle += gk * gk;
        }
        CHECK(env.sum_gamma_sq() == doctest::Approx(oracle).epsilon(1e-13));
        double C = 1.0 / (1.0 - std::exp2(-2.0 * delta));
        CHECK(env.sum_gamma_sq() <= C * env.sum_alpha_sq() * window);
    }
}

TEST_CASE("envelope of a multi-band field stays comparable to alpha") {
    GridSpec g(2, 64, 2.0 * M_PI);
    DyadicWindow w = DyadicWindow::from_grid(g);
    Rng rng(23);
    ComplexField f(g);
    for (int k = w.k_min; k <= w.k_max; ++k) {
        double c = 0.7 + 0.6 * rng.uniform();
        ComplexField band = random_band_field(g, k, rng);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] += c * band[i];
    }
    FrequencyEnvelope env =
        frequency_envelope(f, 1.0, w.k_min, w.k_max, 1.0 / 40.0);
    CHECK(env.slowly_varying_defect() <= 1e-12);
    CHECK(env.sum_gamma_sq() <= 4.0 * env.sum_alpha_sq());
}

TEST_CASE("data envelope of a sphere map gradient") {
    GridSpec g(2, 64, 8.0);
    SphereField hel = helical_wave(g, 2.0 * M_PI / 8.0 * 4, 0.7, 0.0);
    DyadicWindow w = DyadicWindow::from_grid(g);
    FrequencyEnvelope env =
        data_envelope(hel.phi, 0.0, w.k_min, w.k_max, 1.0 / 40.0);
    // gradient mass sits at |xi| = kappa ~ 3.14, i.e. dyadic band 1..2
    double total = env.sum_alpha_sq();
    double local = 0;
    for (int k = 1; k <= 2; ++k) local += sq(env.alpha[k - w.k_min]);
    CHECK(local > 0.9 * total);
}

TEST_CASE("space-time envelope takes the sup over time") {
    GridSpec g(2, 32, 2.0 * M_PI);
    Rng rng(24);
    ComplexField f = random_band_field(g, 2, rng);
    SpaceTimeField u = free_evolution(f, -0.2, 0.05, 9);
    DyadicWindow w = DyadicWindow::from_grid(g);
    FrequencyEnvelope es =
        frequency_envelope(u, 1.0, w.k_min, w.k_max, 1.0 / 40.0);
    FrequencyEnvelope e0 =
        frequency_envelope(f, 1.0, w.k_min, w.k_max, 1.0 / 40.0);
    // free evolution preserves band L2 exactly, so both agree
    for (std::size_t i = 0; i < es.gamma.size(); ++i)
        CHECK(es.gamma[i] == doctest::Approx(e0.gamma[i]).epsilon(1e-10));
}
