#include "smlab/acceptance.hpp"

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <ostream>

#include "smlab/scenario.hpp"

namespace smlab {

namespace {

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

ScenarioConfig bump_config(int n, double L, double width, double amp,
                           int modulation = 1) {
    ScenarioConfig cfg;
    cfg.scenario = "gaussian_bump";
    cfg.grid = GridSpec(2, n, L);
    cfg.phys.width = width;
    cfg.phys.amplitude = amp;
    cfg.phys.modulation = modulation;
    return cfg;
}

// ---- C1: conservation --------------------------------------------------

CriterionResult c1_conservation() {
    ScenarioConfig cfg = bump_config(128, 8.0, 0.5, 0.1);
    SphereField initial = make_initial(cfg);
    double E0_0 = energy_E0(initial), E1_0 = energy_E1(initial);

    double worst0 = 0, worst1 = 0;
    EvolveOptions opts;
    opts.cadence = 500;
    opts.callback = [&](const FlowState& st) {
        worst0 = std::max(worst0, std::abs(energy_E0(st.field) - E0_0) /
                                      std::max(E0_0, 1e-14));
        worst1 = std::max(worst1, std::abs(energy_E1(st.field) - E1_0) /
                                      std::max(E1_0, 1e-14));
    };
    FlowState fin = evolve({initial, 0.0, 0}, 1.0, cfg.grid.dt_hint, opts);
    worst0 = std::max(worst0, std::abs(energy_E0(fin.field) - E0_0) / E0_0);
    worst1 = std::max(worst1, std::abs(energy_E1(fin.field) - E1_0) / E1_0);

    CriterionResult r{1, "conservation E0/E1 (gaussian_bump, n=128, T=1)"};
    r.pass = worst0 <= 1e-6 && worst1 <= 1e-6;
    r.details = fmt("E0 drift %.3e, E1 drift %.3e (gate 1e-6)", worst0, worst1);
    return r;
}

// ---- C2: helical exact solution ------------------------------------------

double helical_error(int n, double dt, double T, double theta) {
    GridSpec g(2, n, 2.0 * M_PI);
    g.dt_hint = std::max(g.dt_hint, dt);
    double kappa = 1.0;
    SphereField init = helical_wave(g, kappa, theta, 0.0);
    FlowState fin = evolve({init, 0.0, 0}, T, dt, {});
    SphereField exact = helical_wave(g, kappa, theta, fin.t);
    VectorField3 diff = fin.field.phi;
    for (std::size_t i = 0; i < diff.size(); ++i)
        diff.set(i, diff.at(i) - exact.phi.at(i));
    return l2(diff);
}

CriterionResult c2_helical() {
    const double theta = M_PI / 4;
    double e1 = helical_error(256, 1e-4, 0.5, theta);
    double e2 = helical_error(256, 5e-5, 0.5, theta);
    double ratio = e1 / std::max(e2, 1e-300);

    CriterionResult r{2, "helical exact-solution convergence (n=256, dt=1e-4)"};
    r.pass = e1 <= 1e-4 && ratio >= 8.0;
    r.details =
        fmt("L2 error %.3e (gate 1e-4), halving ratio %.2f (gate >= 8)", e1, ratio);
    return r;
}

// ---- C3: gauge identities -------------------------------------------------

struct IdentityResiduals {
    double id1, id3, heatcov, schcov;
};

IdentityResiduals identity_linf(int n) {
    ScenarioConfig cfg = bump_config(n, 8.0, 0.26, 0.05);
    cfg.run.s_max = 0.25;
    SphereField initial = make_initial(cfg);
    require_gauge_smallness(initial);
    GaugeStack stack = build_gauge_stack(initial, make_gauge_config(cfg));
    const GaugeData& gd = stack.nodes[0];
    return {residual_id1(gd).linf, residual_id3(gd).linf,
            residual_heatcov(gd).linf, residual_schcov(gd).linf};
}

CriterionResult c3_identities() {
    IdentityResiduals lo = identity_linf(128);
    IdentityResiduals hi = identity_linf(256);
    double worst = std::max(std::max(lo.id1, lo.id3),
                            std::max(lo.heatcov, lo.schcov));
    double rmin = 1e300;
    rmin = std::min(rmin, lo.id1 / std::max(hi.id1, 1e-300));
    rmin = std::min(rmin, lo.id3 / std::max(hi.id3, 1e-300));
    rmin = std::min(rmin, lo.heatcov / std::max(hi.heatcov, 1e-300));
    rmin = std::min(rmin, lo.schcov / std::max(hi.schcov, 1e-300));

    CriterionResult r{3, "gauge identities id1/id3/heatcov/schcov"};
    r.pass = worst <= 1e-8 && rmin >= 10.0;
    r.details = fmt(
        "Linf(n=128): id1 %.2e id3 %.2e heatcov %.2e schcov %.2e (gate 1e-8); "
        "min n-doubling ratio %.1f (gate 10)",
        lo.id1, lo.id3, lo.heatcov, lo.schcov, rmin);
    return r;
}

// ---- shared gauge pipeline for C4/C5/C7/C8/C10 ------------------------------

struct GaugeLab {
    ScenarioConfig cfg;
    SphereField initial;
    GaugePipelineConfig gc;
    GaugeStack stack;
};

GaugeLab make_gauge_lab(double s_max_factor, bool refined, double width = 0.3,
                        double amp = 0.05, int per_octave = 6, double L = 6.0) {
    GaugeLab lab;
    lab.cfg = bump_config(128, L, width, amp);
    lab.cfg.run.s_max_factor = s_max_factor;
    lab.cfg.run.per_octave = per_octave;
    lab.initial = make_initial(lab.cfg);
    require_gauge_smallness(lab.initial);
    lab.gc = make_gauge_config(lab.cfg);
    if (refined) lab.gc.pgrid = lab.gc.pgrid.refined();
    lab.stack = build_gauge_stack(lab.initial, lab.gc);
    return lab;
}

double a0_monitor(const GaugeStack& stack) {
    double m = 0;
    for (int node = 1; node + 1 < stack.traj.count(); ++node)
        m = std::max(m, linf(stack.nodes[node].a[0]));
    return m;
}

CriterionResult c4_caloric_condition() {
    GaugeLab base = make_gauge_lab(64.0, false, 0.5, 0.005, 18, 8.0);
    GaugeLab fine = make_gauge_lab(64.0, true, 0.5, 0.005, 18, 8.0);
    double a0 = a0_monitor(base.stack);
    double a0f = a0_monitor(fine.stack);
    double ratio = a0 / std::max(a0f, 1e-300);

    CriterionResult r{4, "caloric gauge condition A0 = 0"};
    r.pass = a0 <= 1e-6 && ratio >= 4.0;
    r.details = fmt("max|w . d_s v| = %.3e (gate 1e-6), refinement ratio %.2f "
                    "(gate >= 4)",
                    a0, ratio);
    return r;
}

double aform_rel_diff(const GaugeStack& stack) {
    double worst = 0;
    int d = stack.nodes[0].d;
    for (int m = 1; m <= d; ++m) {
        AIntegral ai = a_from_integral(stack.nodes, stack.traj.pgrid, 0, m);
        ScalarField diff = ai.field;
        for (std::size_t i = 0; i < diff.size(); ++i)
            diff[i] -= stack.nodes[0].a[m][i];
        worst = std::max(worst, l2(diff) / std::max(l2(stack.nodes[0].a[m]), 1e-300));
    }
    return worst;
}

CriterionResult c5_aform(const GaugeStack& base_stack) {
    double rel64 = aform_rel_diff(base_stack);
    GaugeLab big = make_gauge_lab(256.0, false);
    double rel256 = aform_rel_diff(big.stack);

    CriterionResult r{5, "integral representation of A_m"};
    r.pass = rel64 <= 0.02 && rel256 <= 0.01;
    r.details = fmt("rel L2 diff: %.4f at S=64w^2 (gate 0.02), %.4f at S=256w^2 "
                    "(gate 0.01)",
                    rel64, rel256);
    return r;
}

// ---- C6: modified Schroedinger residual ------------------------------------

double schcov2_residual(double dt_s) {
    ScenarioConfig cfg = bump_config(128, 8.0, 0.26, 0.05);
    cfg.run.s_max = 0.5;
    SphereField initial = make_initial(cfg);
    GaugePipelineConfig gc = make_gauge_config(cfg);

    double dt_int = dt_s / 4.0;
    FlowState center{initial, 0.0, 0};
    FlowState plus = evolve(center, dt_s, dt_int, {});
    FlowState minus = evolve(center, -dt_s, -dt_int, {});

    std::vector<SphereField> maps = {minus.field, initial, plus.field};
    std::vector<GaugeStack> stacks;
    for (const auto& m : maps) stacks.push_back(build_gauge_stack(m, gc));

    // frames in t at node 0 for A_{d+1} = w . d_t v (centered)
    const GridSpec& g = cfg.grid;
    VectorField3 dv_dt(g);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < dv_dt.size(); ++i)
            dv_dt.comp(c)[i] = (stacks[2].frame.v[0].comp(c)[i] -
                                stacks[0].frame.v[0].comp(c)[i]) /
                               (2 * dt_s);

    std::vector<GaugeData> tstack;
    for (int j = 0; j < 3; ++j) {
        TimeDerivatives td;
        td.dphi_dt = smap_rhs(stacks[j].traj.at(0));
        if (j == 1) {
            td.dv_dt = dv_dt;
            td.has_dv = true;
        }
        tstack.push_back(extract_gauge(stacks[j].traj, stacks[j].frame, 0, &td));
    }
    double worst = 0;
    for (int m = 1; m <= g.d; ++m)
        worst = std::max(worst, residual_schcov2(tstack, dt_s, m).linf);
    return worst;
}

CriterionResult c6_schcov2() {
    double r1 = schcov2_residual(1e-4);
    double r2 = schcov2_residual(5e-5);
    double r3 = schcov2_residual(2.5e-5);
    double q1 = r1 / std::max(r2, 1e-300), q2 = r2 / std::max(r3, 1e-300);

    CriterionResult r{6, "modified Schroedinger equation residual (schcov2)"};
    r.pass = q1 >= 3.5 && q2 >= 3.5;
    r.details = fmt("residuals %.3e / %.3e / %.3e, halving ratios %.2f, %.2f "
                    "(gate >= 3.5)",
                    r1, r2, r3, q1, q2);
    return r;
}

// ---- C7: gauge covariance ----------------------------------------------------

CriterionResult c7_covariance_lab(const GaugeLab& lab) {
    double th = 0.7;
    Vec3 q2 = (lab.gc.Q_prime * std::cos(th) +
               lab.cfg.phys.Q.cross(lab.gc.Q_prime) * std::sin(th))
                  .normalized();
    FrameField frame2 = transport_frame(lab.stack.traj, q2, lab.gc.transport);
    TimeDerivatives td;
    td.dphi_dt = smap_rhs(lab.stack.traj.at(0));
    GaugeData gd2 = extract_gauge(lab.stack.traj, frame2, 0, &td);
    const GaugeData& gd1 = lab.stack.nodes[0];

    double cov_a = 0, cov_psi = 0;
    for (int m = 0; m <= gd1.d; ++m)
        for (std::size_t i = 0; i < gd1.a[m].size(); ++i) {
            if (m >= 1)
                cov_a = std::max(cov_a, std::abs(gd1.a[m][i] - gd2.a[m][i]));
            cov_psi = std::max(cov_psi, std::abs(std::abs(gd1.psi[m][i]) -
                                                 std::abs(gd2.psi[m][i])));
        }

    CriterionResult r{7, "gauge covariance under rotation of Q'"};
    r.pass = cov_a <= 1e-8 && cov_psi <= 1e-8;
    r.details = fmt("max|A - A'| = %.3e, max||psi|-|psi'|| = %.3e (gate 1e-8)",
                    cov_a, cov_psi);
    return r;
}

// ---- C8: derivative-field mass ------------------------------------------------

CriterionResult c8_mass(const GaugeLab& lab) {
    double e1 = energy_E1(lab.stack.traj.at(0));
    double mass = derivative_field_mass(lab.stack.nodes[0]);
    double rel = std::abs(mass - e1) / std::max(e1, 1e-300);

    CriterionResult r{8, "derivative-field mass identity"};
    r.pass = rel <= 1e-10;
    r.details = fmt("|sum ||psi_m||^2 - E1| / E1 = %.3e (gate 1e-10)", rel);
    return r;
}

// ---- C9: linear probes ---------------------------------------------------------

CriterionResult c9_probes() {
    GridSpec g(2, 128, 2.0 * M_PI);
    std::vector<int> ks = {2, 3, 4, 5};
    ProbeOptions opts;
    opts.K_cal = 2;
    opts.T_ref = 0.2 * g.box_length / std::exp2(ks.front() + 2);
    opts.sum_opts.lambda_samples = 9;

    struct Gate {
        ProbeEstimate est;
        double bound;
    };
    std::vector<Gate> gates = {{ProbeEstimate::LocSmo, 0.15},
                               {ProbeEstimate::LinSt, 0.15},
                               {ProbeEstimate::LinNew, 0.2},
                               {ProbeEstimate::LinMax, 0.2}};
    CriterionResult r{9, "linear estimate probes (locsmo/linst/linnew/linmax)"};
    r.pass = true;
    for (const auto& gate : gates) {
        ProbeReport rep = probe(gate.est, g, ks, 32, 20250809u, opts);
        bool ok = std::abs(rep.slope) <= gate.bound;
        r.pass = r.pass && ok;
        r.details += fmt("%s slope %+.3f (gate %.2f)%s; ", rep.estimate.c_str(),
                         rep.slope, gate.bound, ok ? "" : " FAIL");
    }
    return r;
}

// ---- C10: heat-flow dyadic decay -----------------------------------------------

CriterionResult c10_dyadic_decay(const GaugeLab& lab) {
    const HeatTrajectory& traj = lab.stack.traj;
    auto node_at = [&](double s) {
        for (int i = 0; i < traj.count(); ++i)
            if (std::abs(traj.pgrid.s_nodes[i] - s) < 1e-12 * std::max(1.0, s))
                return i;
        throw DataError("dyadic decay: s-node missing");
    };
    CriterionResult r{10, "heat-flow dyadic decay of P_k"};
    r.pass = true;
    for (int k = 2; k <= 4; ++k) {
        double base = std::exp2(-2.0 * k);
        double n1 = l2(project_dyadic(traj.at(node_at(base)).phi, k));
        double n2 = l2(project_dyadic(traj.at(node_at(4 * base)).phi, k));
        double n3 = l2(project_dyadic(traj.at(node_at(16 * base)).phi, k));
        double q1 = n1 / std::max(n2, 1e-300), q2 = n2 / std::max(n3, 1e-300);
        bool ok = q1 >= 4.0 && q2 >= 4.0;
        r.pass = r.pass && ok;
        r.details += fmt("k=%d ratios %.1f,%.1f%s; ", k, q1, q2, ok ? "" : " FAIL");
    }
    r.details += "(gate >= 4 per quadrupling)";
    return r;
}

// ---- C11: Lipschitz dependence ---------------------------------------------------

CriterionResult c11_lipschitz() {
    ScenarioConfig cfg = bump_config(128, 8.0, 0.5, 0.1);
    cfg.scenario = "nearby_pair";
    SphereField base = make_initial(cfg);
    VectorField3 bump = tangent_bump(base, cfg.phys);

    double h = 1e-2;
    SphereField ph = perturb(base, bump, h);
    SphereField ph2 = perturb(base, bump, h / 2);

    const double T = 1.0, dt = cfg.grid.dt_hint;
    const long cad = 1000;
    std::vector<VectorField3> snaps0, snaps1, snaps2;
    auto run = [&](const SphereField& f, std::vector<VectorField3>& store) {
        EvolveOptions opts;
        opts.cadence = cad;
        opts.callback = [&](const FlowState& st) { store.push_back(st.field.phi); };
        evolve({f, 0.0, 0}, T, dt, opts);
    };
    run(base, snaps0);
    run(ph, snaps1);
    run(ph2, snaps2);

    auto sup_diff = [&](const std::vector<VectorField3>& a,
                        const std::vector<VectorField3>& b) {
        double m = 0;
        for (std::size_t j = 0; j < std::min(a.size(), b.size()); ++j) {
            VectorField3 d = a[j];
            for (std::size_t i = 0; i < d.size(); ++i)
                d.set(i, d.at(i) - b[j].at(i));
            m = std::max(m, l2(d));
        }
        return m;
    };
    double D1 = sup_diff(snaps0, snaps1);
    double D2 = sup_diff(snaps0, snaps2);
    double dev = std::abs(D1 / (2.0 * D2) - 1.0);

    CriterionResult r{11, "Lipschitz dependence on initial data"};
    r.pass = dev <= 0.2;
    r.details = fmt("sup_t L2 diffs %.3e (h) vs %.3e (h/2), linearity deviation "
                    "%.3f (gate 0.2)",
                    D1, D2, dev);
    return r;
}

// ---- C12: frequency envelopes -----------------------------------------------------

CriterionResult c12_envelopes() {
    GridSpec g(2, 64, 2.0 * M_PI);
    DyadicWindow win = DyadicWindow::from_grid(g);
    Rng rng(77001);
    ComplexField f(g);
    for (int k = win.k_min; k <= win.k_max; ++k) {
        double c = 0.7 + 0.6 * rng.uniform();
        ComplexField band = random_band_field(g, k, rng);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] += c * band[i];
    }
    double delta = 1.0 / (20.0 * g.d);
    FrequencyEnvelope env =
        frequency_envelope(f, 1.0, win.k_min, win.k_max, delta);

    double defect = env.slowly_varying_defect();
    double sums_ratio = env.sum_gamma_sq() / std::max(env.sum_alpha_sq(), 1e-300);
    bool majorizes = true;
    for (std::size_t i = 0; i < env.alpha.size(); ++i)
        majorizes = majorizes && env.gamma[i] >= env.alpha[i] - 1e-14;

    CriterionResult r{12, "frequency envelopes (slow variation, l2 control)"};
    r.pass = defect <= 1e-12 && sums_ratio <= 4.0 && majorizes;
    r.details = fmt("slow-variation defect %.2e (gate 1e-12), sum gamma^2 / sum "
                    "alpha^2 = %.2f (gate 4)",
                    defect, sums_ratio);
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::vector<int>& only,
                                            std::ostream* live) {
    auto wanted = [&](int id) {
        if (only.empty()) return true;
        for (int x : only)
            if (x == id) return true;
        return false;
    };

    std::vector<CriterionResult> results;
    GaugeLab shared_lab;
    bool lab_ready = false;
    auto lab = [&]() -> GaugeLab& {
        if (!lab_ready) {
            shared_lab = make_gauge_lab(64.0, false);
            lab_ready = true;
        }
        return shared_lab;
    };

    std::vector<std::pair<int, std::function<CriterionResult()>>> table = {
        {1, c1_conservation},
        {2, c2_helical},
        {3, c3_identities},
        {4, c4_caloric_condition},
        {5, [&]() { return c5_aform(lab().stack); }},
        {6, c6_schcov2},
        {7, [&]() {
             GaugeLab deep = make_gauge_lab(64.0, false, 0.4, 0.05, 6, 8.0);
             deep.cfg.run.s_max = 32.0;
             deep.gc = make_gauge_config(deep.cfg);
             deep.stack = build_gauge_stack(deep.initial, deep.gc);
             return c7_covariance_lab(deep);
         }},
        {8, [&]() { return c8_mass(lab()); }},
        {9, c9_probes},
        {10, [&]() { return c10_dyadic_decay(lab()); }},
        {11, c11_lipschitz},
        {12, c12_envelopes},
    };

    for (auto& [id, fn] : table) {
        if (!wanted(id)) continue;
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult res;
        try {
            res = fn();
        } catch (const std::exception& e) {
            res.id = id;
            res.name = "criterion " + std::to_string(id);
            res.pass = false;
            res.details = std::string("exception: ") + e.what();
        }
        res.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        if (live)
            *live << (res.pass ? "[PASS] " : "[FAIL] ") << "C" << res.id << " "
                  << res.name << " -- " << res.details << " (" << fmt("%.1f", res.seconds)
                  << "s)" << std::endl;
        results.push_back(res);
    }
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace smlab
