#include "smlab/norms.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "smlab/spectral.hpp"

namespace smlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> time_weights(const SpaceTimeField& u) {
    std::vector<double> w(u.nt(), u.dt);
    if (u.nt() >= 2) {
        w.front() = 0.5 * u.dt;
        w.back() = 0.5 * u.dt;
    }
    return w;
}

}  // namespace

std::vector<double> VelocitySet::lambdas() const {
    if (count() > 16384.0)
        throw ConfigError("VelocitySet: too large to materialize (use k or K_cal smaller)");
    std::vector<double> v;
    long long jm = j_max();
    v.reserve(static_cast<std::size_t>(2 * jm + 1));
    for (long long j = -jm; j <= jm; ++j) v.push_back(lambda_of(j));
    return v;
}

double norm_lp_xt(const SpaceTimeField& u, double p) {
    u.require_norm_ready();
    double cv = u.grid.cell_volume();
    auto wt = time_weights(u);
    if (std::isinf(p)) {
        double m = 0;
        for (const auto& s : u.slices) m = std::max(m, linf(s));
        return m;
    }
    double acc = 0;
    for (int j = 0; j < u.nt(); ++j) {
        const ComplexField& s = u.slices[j];
        double a = 0;
        for (std::size_t i = 0; i < s.size(); ++i) a += std::pow(std::abs(s[i]), p);
        acc += wt[j] * cv * a;
    }
    return std::pow(acc, 1.0 / p);
}

double norm_linft_lqx(const SpaceTimeField& u, double q) {
    u.require_norm_ready();
    double cv = u.grid.cell_volume();
    double m = 0;
    for (const auto& s : u.slices) {
        if (std::isinf(q)) {
            m = std::max(m, linf(s));
        } else {
            double a = 0;
            for (std::size_t i = 0; i < s.size(); ++i)
                a += std::pow(std::abs(s[i]), q);
            m = std::max(m, std::pow(cv * a, 1.0 / q));
        }
    }
    return m;
}

double norm_lpt_lqx(const SpaceTimeField& u, double p, double q) {
    u.require_norm_ready();
    if (std::isinf(p)) return norm_linft_lqx(u, q);
    double cv = u.grid.cell_volume();
    auto wt = time_weights(u);
    double acc = 0;
    for (int j = 0; j < u.nt(); ++j) {
        const ComplexField& s = u.slices[j];
        double slice;
        if (std::isinf(q)) {
            slice = linf(s);
        } else {
            double a = 0;
            for (std::size_t i = 0; i < s.size(); ++i)
                a += std::pow(std::abs(s[i]), q);
            slice = std::pow(cv * a, 1.0 / q);
        }
        acc += wt[j] * std::pow(slice, p);
    }
    return std::pow(acc, 1.0 / p);
}

double norm_lqx_linft(const SpaceTimeField& u, double q) {
    u.require_norm_ready();
    std::vector<double> m(u.slices[0].size(), 0.0);
    for (const auto& s : u.slices)
        for (std::size_t i = 0; i < m.size(); ++i)
            m[i] = std::max(m[i], std::abs(s[i]));
    if (std::isinf(q)) return *std::max_element(m.begin(), m.end());
    double a = 0;
    for (double v : m) a += std::pow(v, q);
    return std::pow(u.grid.cell_volume() * a, 1.0 / q);
}

namespace {

// Iterated norm with e already rotated onto axis 0: outer L^p over axis-0
// offsets, inner L^q over the transverse axes and time.
double iterated_axis0(const SpaceTimeField& u, double p, double q) {
    const GridSpec& g = u.grid;
    const int n = g.n;
    auto wt = time_weights(u);
    double transverse_cell = 1;
    for (int m = 1; m < g.d; ++m) transverse_cell *= g.h();
    std::size_t stride0 = u.slices[0].size() / n;  // elements per axis-0 slab

    std::vector<double> inner(n, 0.0);
    for (int j = 0; j < u.nt(); ++j) {
        const cplx* s = u.slices[j].data();
        for (int i0 = 0; i0 < n; ++i0) {
            const cplx* slab = s + i0 * stride0;
            if (std::isinf(q)) {
                double m = inner[i0];
                for (std::size_t i = 0; i < stride0; ++i)
                    m = std::max(m, std::abs(slab[i]));
                inner[i0] = m;
            } else {
                double a = 0;
                for (std::size_t i = 0; i < stride0; ++i)
                    a += std::pow(std::abs(slab[i]), q);
                inner[i0] += wt[j] * transverse_cell * a;
            }
        }
    }
    if (!std::isinf(q))
        for (double& v : inner) v = std::pow(v, 1.0 / q);

    if (std::isinf(p)) return *std::max_element(inner.begin(), inner.end());
    double acc = 0;
    for (double v : inner) acc += g.h() * std::pow(v, p);
    return std::pow(acc, 1.0 / p);
}

SpaceTimeField rotate_spacetime(const SpaceTimeField& u, const Vec3& e) {
    if (axis_of(e, u.grid.d) == 0 && e.x > 0) return u;
    SpaceTimeField out(u.grid, u.t0, u.dt, u.nt());
    for (int j = 0; j < u.nt(); ++j) out.slices[j] = rotate_to_axis(u.slices[j], e);
    return out;
}

}  // namespace

std::vector<double> lateral_norm_sweep(const SpaceTimeField& u, double p, double q,
                                       const Vec3& e,
                                       const std::vector<double>& lambdas) {
    u.require_norm_ready();
    if (std::abs(e.norm() - 1.0) > 1e-12)
        throw ConstraintError("lateral_norm: e is not a unit vector");
    const GridSpec& g = u.grid;
    const int n = g.n;
    const int nl = static_cast<int>(lambdas.size());
    auto wt = time_weights(u);
    double transverse_cell = 1;
    for (int m = 1; m < g.d; ++m) transverse_cell *= g.h();
    std::size_t stride0 = u.slices[0].size() / n;

    // rotate once so e is axis 0, then tilt by pure Fourier shifts
    SpaceTimeField r = rotate_spacetime(u, e);
    std::vector<std::vector<double>> inner(nl, std::vector<double>(n, 0.0));
    for (int j = 0; j < u.nt(); ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < r.slices[j].size() && zero; ++i)
            if (r.slices[j][i] != cplx(0.0, 0.0)) zero = false;
        if (zero) continue;
        ComplexField F = fft_forward(r.slices[j]);
        double t = u.time(j);
        for (int li = 0; li < nl; ++li) {
            ComplexField S(g);
            for_each_mode(g, [&](std::size_t i, const double* xi) {
                S[i] = F[i] * std::exp(cplx(0.0, xi[0] * lambdas[li] * t));
            });
            ComplexField slice = fft_inverse(S);
            for (int i0 = 0; i0 < n; ++i0) {
                const cplx* slab = slice.data() + i0 * stride0;
                if (std::isinf(q)) {
                    double m = inner[li][i0];
                    for (std::size_t i = 0; i < stride0; ++i)
                        m = std::max(m, std::abs(slab[i]));
                    inner[li][i0] = m;
                } else {
                    double a = 0;
                    for (std::size_t i = 0; i < stride0; ++i)
                        a += std::pow(std::abs(slab[i]), q);
                    inner[li][i0] += wt[j] * transverse_cell * a;
                }
            }
        }
    }
    std::vector<double> out(nl, 0.0);
    for (int li = 0; li < nl; ++li) {
        std::vector<double>& in = inner[li];
        if (!std::isinf(q))
            for (double& v : in) v = std::pow(v, 1.0 / q);
        if (std::isinf(p)) {
            out[li] = *std::max_element(in.begin(), in.end());
        } else {
            double acc = 0;
            for (double v : in) acc += g.h() * std::pow(v, p);
            out[li] = std::pow(acc, 1.0 / p);
        }
    }
    return out;
}

double lateral_norm(const SpaceTimeField& u, double p, double q, const Vec3& e,
                    double lambda) {
    if (lambda == 0.0) {
        u.require_norm_ready();
        if (std::abs(e.norm() - 1.0) > 1e-12)
            throw ConstraintError("lateral_norm: e is not a unit vector");
        return iterated_axis0(rotate_spacetime(u, e), p, q);
    }
    return lateral_norm_sweep(u, p, q, e, {lambda})[0];
}

namespace {

std::vector<double> lambda_subsample(const VelocitySet& W, int count,
                                     double physical_cap) {
    double range = std::min(W.range(), physical_cap);
    std::set<long long> idx;
    idx.insert(0);
    for (int i = 0; i < count; ++i) {
        double lam = count > 1 ? -range + 2.0 * range * i / (count - 1) : 0.0;
        idx.insert(W.snap_index(lam));
    }
    std::vector<double> out;
    for (long long j : idx) out.push_back(W.lambda_of(j));
    return out;
}

SpaceTimeField time_slab(const SpaceTimeField& u, int j0, int j1) {
    SpaceTimeField out(u.grid, u.t0, u.dt, u.nt());
    for (int j = j0; j < j1; ++j) out.slices[j] = u.slices[j];
    return out;
}

// Per-column data for the frequency-packet candidate: inner L^q norm over
// (transverse, t) of the partial Fourier coefficient G(xi_0, x_perp, t).
// A single-column piece has |piece| independent of the axis-0 coordinate, so
// its lateral norm is L^{1/p} * inner for every tilt lambda.
struct ColumnData {
    int i0;           // axis-0 frequency index
    double xi;        // corresponding wavenumber
    double inner_q;   // inner norm
    double mass;      // spectral mass (for pruning)
};

std::vector<ColumnData> column_profiles(const SpaceTimeField& u, double q) {
    const GridSpec& g = u.grid;
    const int n = g.n;
    auto wt = time_weights(u);
    double transverse_cell = 1;
    for (int m = 1; m < g.d; ++m) transverse_cell *= g.h();

    std::vector<double> acc(n, 0.0), mass(n, 0.0);
    std::size_t stride0 = u.slices[0].size() / n;
    for (int j = 0; j < u.nt(); ++j) {
        ComplexField F = fft_forward(u.slices[j]);
        // invert along all axes except axis 0
        cplx* data = F.data();
        if (g.d == 2) {
            for (int i0 = 0; i0 < n; ++i0)
                fft_line(data + i0 * stride0, n, 1, 1 /*backward*/, false);
        } else {
            for (int i0 = 0; i0 < n; ++i0) {
                cplx* slab = data + i0 * stride0;
                for (int i1 = 0; i1 < n; ++i1)
                    fft_line(slab + i1 * n, n, 1, 1, false);
                for (int i2 = 0; i2 < n; ++i2)
                    fft_line(slab + i2, n, n, 1, false);
            }
        }
        for (int i0 = 0; i0 < n; ++i0) {
            const cplx* slab = data + i0 * stride0;
            if (std::isinf(q)) {
                double m = acc[i0];
                for (std::size_t i = 0; i < stride0; ++i)
                    m = std::max(m, std::abs(slab[i]));
                acc[i0] = m;
            } else {
                double a = 0;
                for (std::size_t i = 0; i < stride0; ++i)
                    a += std::pow(std::abs(slab[i]), q);
                acc[i0] += wt[j] * transverse_cell * a;
            }
            for (std::size_t i = 0; i < stride0; ++i)
                mass[i0] += std::norm(slab[i]);
        }
    }
    std::vector<ColumnData> cols;
    double total_mass = 0;
    for (double m : mass) total_mass += m;
    for (int i0 = 0; i0 < n; ++i0) {
        if (mass[i0] <= 1e-28 * total_mass) continue;
        double inner = std::isinf(q) ? acc[i0] : std::pow(acc[i0], 1.0 / q);
        cols.push_back({i0, g.xi(i0), inner, mass[i0]});
    }
    return cols;
}

}  // namespace

SumSpaceBound sum_space_norm(const SpaceTimeField& u, double p, double q,
                             const Vec3& e, const VelocitySet& W, double r,
                             const SumSpaceOptions& opts) {
    u.require_norm_ready();
    if (r < 1) throw ConfigError("sum_space_norm: r >= 1");
    const double wfac = std::pow(W.count(), (r - 1.0) / r);

    SumSpaceBound best{kInf, "none"};
    auto consider = [&](double value, const std::string& id) {
        if (value < best.value) best = {value, id};
    };

    // single-lambda assignments over a lattice subsample
    double vmax_phys = 4.0 * u.grid.xi_max();
    auto lams = lambda_subsample(W, opts.lambda_samples, vmax_phys);
    std::vector<double> single = lateral_norm_sweep(u, p, q, e, lams);
    double best_single = kInf;
    double best_lam = 0;
    for (std::size_t li = 0; li < lams.size(); ++li) {
        if (single[li] < best_single) {
            best_single = single[li];
            best_lam = lams[li];
        }
    }
    consider(wfac * best_single, "single-lambda(" + std::to_string(best_lam) + ")");

    // greedy per-time-slab assignment over a smaller lambda menu
    if (opts.greedy_slabs > 1 && u.nt() >= opts.greedy_slabs) {
        auto menu = lambda_subsample(W, std::min(opts.lambda_samples, 9), vmax_phys);
        int nslab = opts.greedy_slabs;
        std::vector<int> choice(nslab, 0);
        for (int sIdx = 0; sIdx < nslab; ++sIdx) {
            int j0 = sIdx * u.nt() / nslab, j1 = (sIdx + 1) * u.nt() / nslab;
            SpaceTimeField slab = time_slab(u, j0, j1);
            std::vector<double> vals = lateral_norm_sweep(slab, p, q, e, menu);
            double bestv = kInf;
            for (std::size_t mi = 0; mi < menu.size(); ++mi)
                if (vals[mi] < bestv) {
                    bestv = vals[mi];
                    choice[sIdx] = static_cast<int>(mi);
                }
        }
        // assemble the per-lambda pieces and evaluate exactly
        double acc = 0;
        for (std::size_t mi = 0; mi < menu.size(); ++mi) {
            SpaceTimeField piece(u.grid, u.t0, u.dt, u.nt());
            bool any = false;
            for (int sIdx = 0; sIdx < nslab; ++sIdx) {
                if (choice[sIdx] != static_cast<int>(mi)) continue;
                int j0 = sIdx * u.nt() / nslab, j1 = (sIdx + 1) * u.nt() / nslab;
                for (int j = j0; j < j1; ++j) piece.slices[j] = u.slices[j];
                any = true;
            }
            if (any) acc += std::pow(lateral_norm(piece, p, q, e, menu[mi]), r);
        }
        consider(std::pow(std::pow(W.count(), r - 1.0) * acc, 1.0 / r),
                 "greedy-slab(" + std::to_string(nslab) + ")");
    }

    // frequency-column packets: columns ride their own group-velocity ray
    if (opts.packets && axis_of(e, u.grid.d) == 0) {
        auto cols = column_profiles(u, q);
        std::set<long long> used;
        double acc = 0;
        double L = u.grid.box_length;
        for (const auto& c : cols) {
            long long j = W.snap_index(2.0 * c.xi);
            while (used.count(j)) ++j;  // keep assignments distinct
            used.insert(j);
            double piece = std::isinf(p) ? c.inner_q
                                         : std::pow(L, 1.0 / p) * c.inner_q;
            acc += std::pow(piece, r);
        }
        consider(std::pow(std::pow(W.count(), r - 1.0) * acc, 1.0 / r),
                 "packets(" + std::to_string(cols.size()) + ")");
    }

    return best;
}

double intersection_space_norm(const SpaceTimeField& u, double p, double q,
                               const Vec3& e, const VelocitySet& W, double r) {
    auto lams = W.lambdas();
    double acc = 0;
    for (double lam : lams) acc += std::pow(lateral_norm(u, p, q, e, lam), r);
    return std::pow(acc / W.count(), 1.0 / r);
}

namespace {

std::vector<int> band_range(const GridSpec& g, int k, int halfwidth) {
    DyadicWindow w = DyadicWindow::from_grid(g);
    std::vector<int> js;
    for (int j = std::max(w.k_min, k - halfwidth);
         j <= std::min(w.k_max, k + halfwidth); ++j)
        js.push_back(j);
    return js;
}

SpaceTimeField project_directional_st(const SpaceTimeField& u, int j,
                                      const Vec3& e) {
    SpaceTimeField out(u.grid, u.t0, u.dt, u.nt());
    for (int t = 0; t < u.nt(); ++t)
        out.slices[t] = project_directional(u.slices[t], j, e);
    return out;
}

}  // namespace

CompositeValue composite_norm(const SpaceTimeField& u, int k, CompositeNorm which,
                              const NormParams& params) {
    u.require_norm_ready();
    const GridSpec& g = u.grid;
    const int d = g.d;
    if (params.d != d) throw ConfigError("composite_norm: params.d mismatch");
    double leak = 0;
    for (const auto& s : u.slices) leak = std::max(leak, band_leakage(s, k));
    if (leak > params.leakage_tol)
        throw BandError("composite_norm: band leakage " + std::to_string(leak) +
                        " exceeds tolerance");
    if (d == 2 && u.half_width() > std::exp2(2 * params.K_cal) * (1 + 1e-9))
        throw ConfigError("composite_norm (d=2): T must be <= 2^{2K}");

    DirectionSet dirs = DirectionSet::make(d, d == 2 ? params.dir_count : 9);
    const double pd = strichartz_p(d);

    auto sup_dirs = [&](double p, double q, double lambda = 0.0) {
        double m = 0;
        for (const Vec3& e : dirs.dirs)
            m = std::max(m, lateral_norm(u, p, q, e, lambda));
        return m;
    };

    if (which == CompositeNorm::Sk_omega) {
        double omega = params.omega;
        if (omega < 0 || omega > 0.5)
            throw ConfigError("S_k^omega: omega in [0, 1/2]");
        double two_om = 1.0 / (0.5 + omega / d);
        double pd_om = 1.0 / (1.0 / pd + omega / d);
        double v = norm_linft_lqx(u, two_om) + norm_lpt_lqx(u, pd, pd_om) +
                   std::exp2(-k * d / (d + 2.0)) * norm_lqx_linft(u, pd_om);
        return {std::exp2(k * omega) * v, "exact"};
    }

    if (d >= 3) {
        double fk = norm_linft_lqx(u, 2) + norm_lp_xt(u, pd) +
                    std::exp2(-k * d / (d + 2.0)) * norm_lqx_linft(u, pd);
        {
            double m = 0;
            for (const Vec3& e : dirs.dirs)
                m = std::max(m, lateral_norm(u, 2, kInf, e));
            fk += std::exp2(-k * (d - 1) / 2.0) * m;
        }
        if (which == CompositeNorm::Fk || which == CompositeNorm::Fk0)
            return {fk, "exact"};
        if (which == CompositeNorm::Gk) {
            double m = 0;
            for (int j : band_range(g, k, params.j_halfwidth))
                for (const Vec3& e : dirs.dirs)
                    m = std::max(m, lateral_norm(project_directional_st(u, j, e),
                                                 kInf, 2, e));
            return {fk + std::exp2(0.5 * k) * m, "exact"};
        }
        // N_k, d >= 3: two-way split
        double pprime = pd / (pd - 1.0);
        auto part2 = [&](const SpaceTimeField& f) {
            double m = 0;
            for (const Vec3& e : dirs.dirs)
                m = std::max(m, lateral_norm(f, 1, 2, e));
            return std::exp2(-0.5 * k) * m;
        };
        double c1 = norm_lp_xt(u, pprime);
        double c2 = part2(u);
        CompositeValue best{std::min(c1, c2), c1 < c2 ? "all-Lp'" : "all-L12"};
        // greedy per-slab split
        int nslab = std::min(params.sum_opts.greedy_slabs, u.nt() / 2);
        if (nslab >= 2) {
            SpaceTimeField f1(g, u.t0, u.dt, u.nt()), f2(g, u.t0, u.dt, u.nt());
            for (int sIdx = 0; sIdx < nslab; ++sIdx) {
                int j0 = sIdx * u.nt() / nslab, j1 = (sIdx + 1) * u.nt() / nslab;
                SpaceTimeField slab = time_slab(u, j0, j1);
                bool to1 = norm_lp_xt(slab, pprime) <= part2(slab);
                for (int j = j0; j < j1; ++j)
                    (to1 ? f1 : f2).slices[j] = u.slices[j];
            }
            double v = norm_lp_xt(f1, pprime) + part2(f2);
            if (v < best.value) best = {v, "greedy-slab"};
        }
        return best;
    }

    // ---- d = 2 ----
    VelocitySet Wp = VelocitySet::W(k + 40, params.K_cal);
    auto fk0 = [&]() -> CompositeValue {
        double v = norm_linft_lqx(u, 2) + norm_lp_xt(u, 4) +
                   std::exp2(-0.5 * k) * norm_lqx_linft(u, 4);
        double m = 0;
        std::string cand;
        for (const Vec3& e : dirs.dirs) {
            SumSpaceBound b = sum_space_norm(u, 2, kInf, e, Wp, 1, params.sum_opts);
            if (b.value > m) {
                m = b.value;
                cand = b.candidate;
            }
        }
        return {v + std::exp2(-0.5 * k) * m, "L2inf:" + cand};
    };

    if (which == CompositeNorm::Fk0) return fk0();
    if (which == CompositeNorm::Fk) {
        // upper bound: the trivial member J=1, m_1=0 of the decomposition family
        CompositeValue v = fk0();
        return {v.value, "J=1,m1=0;" + v.candidate};
    }
    if (which == CompositeNorm::Gk) {
        CompositeValue base = fk0();
        double v = base.value + std::exp2(-k / 6.0) * sup_dirs(3, 6);
        double m63 = 0, mls = 0;
        for (int j : band_range(g, k, params.j_halfwidth))
            for (const Vec3& e : dirs.dirs) {
                SpaceTimeField pj = project_directional_st(u, j, e);
                m63 = std::max(m63, lateral_norm(pj, 6, 3, e));
                double cap = std::exp2(k - 40);
                for (int li = 0; li < params.lambda_samples; ++li) {
                    double lam = params.lambda_samples > 1
                                     ? -cap + 2.0 * cap * li / (params.lambda_samples - 1)
                                     : 0.0;
                    lam *= (1.0 - 1e-9);
                    mls = std::max(mls, lateral_norm(pj, kInf, 2, e, lam));
                }
            }
        v += std::exp2(k / 6.0) * m63 + std::exp2(0.5 * k) * mls;
        return {v, base.candidate};
    }

    // N_k, d = 2: four-way split
    VelocitySet Wm = VelocitySet::W(k - 40, params.K_cal);
    Vec3 e1{1, 0, 0}, e2{0, 1, 0};
    auto cost_part = [&](const SpaceTimeField& f, int part) -> double {
        switch (part) {
            case 0: return norm_lp_xt(f, 4.0 / 3.0);
            case 1: return std::exp2(k / 6.0) * lateral_norm(f, 1.5, 1.2, e1);
            case 2: return std::exp2(k / 6.0) * lateral_norm(f, 1.5, 1.2, e2);
            default: {
                double m = 0;
                for (const Vec3& e : dirs.dirs)
                    m = std::max(
                        m, sum_space_norm(f, 1, 2, e, Wm, 1, params.sum_opts).value);
                return std::exp2(-0.5 * k) * m;
            }
        }
    };
    CompositeValue best{kInf, "none"};
    const char* names[4] = {"all-L43", "all-L326e1", "all-L326e2", "all-L12W"};
    for (int part = 0; part < 4; ++part) {
        double v = cost_part(u, part);
        if (v < best.value) best = {v, names[part]};
    }
    int nslab = std::min(params.sum_opts.greedy_slabs, u.nt() / 2);
    if (nslab >= 2) {
        std::vector<SpaceTimeField> parts(
            4, SpaceTimeField(g, u.t0, u.dt, u.nt()));
        std::vector<bool> any(4, false);
        for (int sIdx = 0; sIdx < nslab; ++sIdx) {
            int j0 = sIdx * u.nt() / nslab, j1 = (sIdx + 1) * u.nt() / nslab;
            SpaceTimeField slab = time_slab(u, j0, j1);
            int bestp = 0;
            double bestv = kInf;
            for (int part = 0; part < 4; ++part) {
                double v = cost_part(slab, part);
                if (v < bestv) {
                    bestv = v;
                    bestp = part;
                }
            }
            for (int j = j0; j < j1; ++j)
                parts[bestp].slices[j] = u.slices[j];
            any[bestp] = true;
        }
        double v = 0;
        for (int part = 0; part < 4; ++part)
            if (any[part]) v += cost_part(parts[part], part);
        if (v < best.value) best = {v, "greedy-slab"};
    }
    return best;
}

}  // namespace smlab
