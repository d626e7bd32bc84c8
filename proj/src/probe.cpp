#include "smlab/probe.hpp"

#include "smlab/spectral.hpp"

namespace smlab {

SpaceTimeField free_evolution(const ComplexField& f, double t0, double dt, int nt) {
    SpaceTimeField u(f.grid(), t0, dt, nt);
    for (int j = 0; j < nt; ++j) u.slices[j] = free_propagator(f, t0 + j * dt);
    return u;
}

namespace {

ComplexField band_weighted_field(const GridSpec& g, int k, const Vec3* e,
                                 Rng* rng) {
    DyadicWindow::from_grid(g).require(k);
    ComplexField F(g);
    const int d = g.d;
    for_each_mode(g, [&](std::size_t i, const double* xi) {
        double r2 = 0;
        for (int m = 0; m < d; ++m) r2 += sq(xi[m]);
        double r = std::sqrt(r2);
        double w;
        if (e) {
            double p = xi[0] * e->x + xi[1] * e->y + (d == 3 ? xi[2] * e->z : 0.0);
            w = chi_k(p, k) * eta0(r * std::exp2(-(k + 1)));
        } else {
            w = chi_k(r, k);
        }
        if (w > 1e-14)
            F[i] = rng ? w * cplx(rng->normal(), rng->normal()) : cplx(w, 0.0);
    });
    ComplexField f = fft_inverse(F);
    double nrm = l2(f);
    if (nrm == 0) throw ConfigError("band field: empty band");
    for (std::size_t i = 0; i < f.size(); ++i) f[i] /= nrm;
    return f;
}

}  // namespace

ComplexField random_band_field(const GridSpec& g, int k, Rng& rng, const Vec3* e) {
    return band_weighted_field(g, k, e, &rng);
}

ComplexField band_kernel_field(const GridSpec& g, int k, const Vec3* e) {
    return band_weighted_field(g, k, e, nullptr);
}

ComplexField dilate_spectrum(const ComplexField& f, int j) {
    if (j == 0) return f;
    if (j < 0) throw ConfigError("dilate_spectrum: j >= 0");
    const GridSpec& g = f.grid();
    ComplexField F = fft_forward(f);
    ComplexField G(g);
    const int n = g.n;
    auto map_index = [&](int idx) -> int {
        int m = idx <= n / 2 ? idx : idx - n;
        long long m2 = static_cast<long long>(m) << j;
        if (m2 <= -n / 2 || m2 >= n / 2) return -1;  // outside Nyquist
        return static_cast<int>(m2 < 0 ? m2 + n : m2);
    };
    if (g.d == 2) {
        for (int a = 0; a < n; ++a) {
            int a2 = map_index(a);
            if (a2 < 0) continue;
            for (int b = 0; b < n; ++b) {
                int b2 = map_index(b);
                if (b2 < 0) continue;
                G[G.index(a2, b2)] = F[F.index(a, b)];
            }
        }
    } else {
        for (int a = 0; a < n; ++a) {
            int a2 = map_index(a);
            if (a2 < 0) continue;
            for (int b = 0; b < n; ++b) {
                int b2 = map_index(b);
                if (b2 < 0) continue;
                for (int c = 0; c < n; ++c) {
                    int c2 = map_index(c);
                    if (c2 < 0) continue;
                    G[G.index(a2, b2, c2)] = F[F.index(a, b, c)];
                }
            }
        }
    }
    return fft_inverse(G);
}

const char* probe_name(ProbeEstimate e) {
    switch (e) {
        case ProbeEstimate::LocSmo: return "locsmobound";
        case ProbeEstimate::LatStc: return "latstc";
        case ProbeEstimate::LinNew: return "linnew";
        case ProbeEstimate::LinSt: return "linst";
        case ProbeEstimate::LinMax: return "linmax";
        case ProbeEstimate::LatStA: return "latsta";
        default: return "latstb";
    }
}

ProbeEstimate probe_from_name(const std::string& name) {
    for (ProbeEstimate e :
         {ProbeEstimate::LocSmo, ProbeEstimate::LatStc, ProbeEstimate::LinNew,
          ProbeEstimate::LinSt, ProbeEstimate::LinMax, ProbeEstimate::LatStA,
          ProbeEstimate::LatStB})
        if (name == probe_name(e)) return e;
    throw ConfigError("unknown probe estimate: " + name);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double fit_slope(const std::vector<int>& ks, const std::vector<double>& logv) {
    const int n = static_cast<int>(ks.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += ks[i];
        sy += logv[i];
        sxx += sq(static_cast<double>(ks[i]));
        sxy += ks[i] * logv[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

ProbeReport probe(ProbeEstimate estimate, const GridSpec& g,
                  const std::vector<int>& ks, int ensemble, std::uint64_t seed,
                  const ProbeOptions& opts) {
    if (ks.size() < 3) throw ConfigError("probe: need >= 3 dyadic bands");
    if (ensemble < 16) throw ConfigError("probe: ensemble size >= 16");
    const int d = g.d;
    if (estimate == ProbeEstimate::LinNew && d != 2)
        throw ConfigError("probe: linnew requires d = 2");
    if (estimate == ProbeEstimate::LatStc && d < 3)
        throw ConfigError("probe: latstc requires d >= 3");
    if ((estimate == ProbeEstimate::LatStA || estimate == ProbeEstimate::LatStB) &&
        d != 2)
        throw ConfigError("probe: lateral Strichartz probes require d = 2");

    DyadicWindow win = DyadicWindow::from_grid(g);
    for (int k : ks) win.require(k);
    const int k_ref = *std::min_element(ks.begin(), ks.end());
    const Vec3 e1{1, 0, 0};
    const bool directional = estimate == ProbeEstimate::LocSmo ||
                             estimate == ProbeEstimate::LatStA;

    // Time-window policy: the local smoothing / lateral maximal norms probe
    // the gain a band-k wave realizes before it wraps around the box, so their
    // window shrinks linearly with the band velocity (T_k ~ 2^{-k}); the
    // space-time Strichartz norms use the fixed window. Sampling densities
    // track the dispersive phase so quadrature roughness stays k-uniform.
    // Everything except the pointwise-in-time maximal estimate needs the
    // window capped by the box traversal/revival time of band k (on the torus
    // the wave recirculates; the dispersive decay the estimates encode exists
    // only before wrap-around).
    const bool traversal = estimate != ProbeEstimate::LinMax;

    ProbeReport rep;
    rep.estimate = probe_name(estimate);
    rep.d = d;
    rep.K_cal = opts.K_cal;
    rep.ks = ks;
    rep.ensemble = ensemble;
    rep.seed = seed;
    rep.max_ratio.assign(ks.size(), 0.0);
    rep.mean_ratio.assign(ks.size(), 0.0);
    {
        char buf[200];
        if (traversal)
            std::snprintf(buf, sizeof(buf),
                          "T_k = %.4g * 2^{-(k-%d)} (box-traversal restriction), "
                          "independent ensembles + focusing member",
                          opts.T_ref, k_ref);
        else
            std::snprintf(buf, sizeof(buf),
                          "fixed T = %.4g, independent ensembles + focusing member",
                          opts.T_ref);
        rep.protocol = buf;
    }

    Rng root(seed);
    for (int m = 0; m < ensemble; ++m) {
        Rng member = root.split(m);
        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
            int k = ks[ki];
            Rng per_k = member.split(1000 + k);
            // member 0 is the deterministic phase-aligned kernel, the
            // extremizer of the maximal-function bounds
            ComplexField f =
                m == 0 ? band_kernel_field(g, k, directional ? &e1 : nullptr)
                       : random_band_field(g, k, per_k, directional ? &e1 : nullptr);
            double fn = l2(f);
            double T = traversal ? opts.T_ref * std::exp2(-(double)(k - k_ref))
                                 : opts.T_ref;
            int nt = opts.nt;
            if (traversal)
                nt = std::min(opts.nt_max,
                              1 + (opts.nt - 1) * (1 << std::max(0, k - k_ref)));
            double dt = 2.0 * T / (nt - 1);
            SpaceTimeField u = free_evolution(f, -T, dt, nt);

            double lhs = 0, predicted = 1;
            switch (estimate) {
                case ProbeEstimate::LocSmo: {
                    double cap = std::exp2(k - 5);
                    std::vector<double> lams;
                    for (int li = 0; li < opts.lambda_samples; ++li)
                        lams.push_back(opts.lambda_samples > 1
                                           ? -cap + 2.0 * cap * li /
                                                        (opts.lambda_samples - 1)
                                           : 0.0);
                    for (double v : lateral_norm_sweep(u, kInf, 2, e1, lams))
                        lhs = std::max(lhs, v);
                    predicted = std::exp2(-0.5 * k);
                    break;
                }
                case ProbeEstimate::LatStc:
                    lhs = lateral_norm(u, 2, kInf, e1);
                    predicted = std::exp2(0.5 * k * (d - 1));
                    break;
                case ProbeEstimate::LinNew: {
                    VelocitySet W = VelocitySet::W(k + 5, opts.K_cal);
                    lhs = sum_space_norm(u, 2, kInf, e1, W, 2, opts.sum_opts).value;
                    predicted = std::exp2(0.5 * k);
                    break;
                }
                case ProbeEstimate::LinSt:
                    lhs = norm_lp_xt(u, strichartz_p(d));
                    predicted = 1;
                    break;
                case ProbeEstimate::LinMax:
                    lhs = norm_lqx_linft(u, strichartz_p(d));
                    predicted = std::exp2(k * d / (d + 2.0));
                    break;
                case ProbeEstimate::LatStA:
                    lhs = lateral_norm(u, 6, 3, e1);
                    predicted = std::exp2(k * (2.0 / 6.0 - 0.5));
                    break;
                case ProbeEstimate::LatStB:
                    lhs = lateral_norm(u, 3, 6, e1);
                    predicted = std::exp2(k * (2.0 / 3.0 - 0.5));
                    break;
            }
            double ratio = lhs / (predicted * fn);
            rep.max_ratio[ki] = std::max(rep.max_ratio[ki], ratio);
            rep.mean_ratio[ki] += ratio / ensemble;
        }
    }
    std::vector<double> logv;
    for (double v : rep.max_ratio) logv.push_back(std::log2(v));
    rep.slope = fit_slope(ks, logv);
    return rep;
}

SpaceTimeField duhamel_solve(const ComplexField& u0,
                             const std::function<ComplexField(double)>& h,
                             double t0, double dt, int nt, int substeps) {
    if (substeps < 1) throw ConfigError("duhamel_solve: substeps >= 1");
    SpaceTimeField u(u0.grid(), t0, dt, nt);
    int center = static_cast<int>(std::llround(-t0 / dt));
    if (center < 0 || center >= nt ||
        std::abs(t0 + center * dt) > 1e-9 * std::max(1.0, std::abs(dt)))
        throw ConfigError("duhamel_solve: time nodes must include t = 0");
    u.slices[center] = u0;

    auto step = [&](const ComplexField& from, double t, double step_dt) {
        ComplexField v = free_propagator(from, step_dt);
        double ds = step_dt / substeps;
        for (int m = 0; m < substeps; ++m) {
            double tm = t + (m + 0.5) * ds;
            ComplexField hm = h(tm);
            ComplexField prop = free_propagator(hm, t + step_dt - tm);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += ds * prop[i];
        }
        return v;
    };
    for (int j = center; j + 1 < nt; ++j)
        u.slices[j + 1] = step(u.slices[j], u.time(j), dt);
    for (int j = center; j > 0; --j)
        u.slices[j - 1] = step(u.slices[j], u.time(j), -dt);
    return u;
}

DuhamelReport duhamel_probe(const ComplexField& u0, const SpaceTimeField& h, int k,
                            const NormParams& params, int substeps) {
    if (band_leakage(u0, k) > params.leakage_tol && l2(u0) > 0)
        throw BandError("duhamel_probe: u0 leaks outside I_k");
    for (const auto& s : h.slices)
        if (band_leakage(s, k) > params.leakage_tol && l2(s) > 0)
            throw BandError("duhamel_probe: h leaks outside I_k");

    auto h_at = [&](double t) -> ComplexField {
        double x = (t - h.t0) / h.dt;
        int j = std::clamp(static_cast<int>(std::floor(x)), 0, h.nt() - 2);
        double a = std::clamp(x - j, 0.0, 1.0);
        ComplexField out = h.slices[j];
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = (1.0 - a) * out[i] + a * h.slices[j + 1][i];
        return out;
    };

    DuhamelReport rep;
    SpaceTimeField u = duhamel_solve(u0, h_at, h.t0, h.dt, h.nt(), substeps);
    SpaceTimeField u2 = duhamel_solve(u0, h_at, h.t0, h.dt, h.nt(), 2 * substeps);
    double dnum = 0, dden = 0;
    for (int j = 0; j < u.nt(); ++j) {
        ComplexField diff = u.slices[j];
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= u2.slices[j][i];
        dnum = std::max(dnum, l2(diff));
        dden = std::max(dden, l2(u2.slices[j]));
    }
    rep.richardson = dden > 0 ? dnum / dden : 0;

    CompositeValue gk = composite_norm(u, k, CompositeNorm::Gk, params);
    CompositeValue nk = composite_norm(h, k, CompositeNorm::Nk, params);
    rep.g_norm = gk.value;
    rep.u0_norm = l2(u0);
    rep.n_norm = nk.value;
    rep.n_candidate = nk.candidate;
    rep.ratio = rep.g_norm / (rep.u0_norm + rep.n_norm);
    return rep;
}

}  // namespace smlab
