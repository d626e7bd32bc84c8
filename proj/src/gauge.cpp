#include "smlab/gauge.hpp"

namespace smlab {

namespace {

ComplexField pair_field(const VectorField3& v, const VectorField3& w,
                        const VectorField3& f) {
    ComplexField out(f.grid());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = cplx(v.at(i).dot(f.at(i)), w.at(i).dot(f.at(i)));
    return out;
}

ScalarField dot_field(const VectorField3& a, const VectorField3& b) {
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.at(i).dot(b.at(i));
    return out;
}

VectorField3 derivative3(const VectorField3& f, int axis) {
    VectorField3 out(f.grid());
    for (int c = 0; c < 3; ++c) out.comp(c) = spectral_derivative(f.comp(c), axis);
    return out;
}

// nonuniform second-order three-point first derivative at the middle node
template <typename FieldT>
FieldT fd_middle(const FieldT& lo, const FieldT& mid, const FieldT& hi,
                 double h_lo, double h_hi) {
    double c_lo = -h_hi / (h_lo * (h_lo + h_hi));
    double c_mid = (h_hi - h_lo) / (h_lo * h_hi);
    double c_hi = h_lo / (h_hi * (h_lo + h_hi));
    FieldT out = mid;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = c_lo * lo[i] + c_mid * mid[i] + c_hi * hi[i];
    return out;
}

VectorField3 fd_middle3(const VectorField3& lo, const VectorField3& mid,
                        const VectorField3& hi, double h_lo, double h_hi) {
    VectorField3 out(mid.grid());
    for (int c = 0; c < 3; ++c)
        out.comp(c) = fd_middle(lo.comp(c), mid.comp(c), hi.comp(c), h_lo, h_hi);
    return out;
}

// first-derivative weights at offset 0 from nodes at offsets d[0..m-1],
// exact for polynomials of degree m-1 (solves the Vandermonde system)
std::vector<double> fd_weights(const std::vector<double>& d) {
    const int m = static_cast<int>(d.size());
    std::vector<std::vector<double>> A(m, std::vector<double>(m + 1, 0.0));
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            double p = 1;
            for (int t = 0; t < r; ++t) p *= d[c];
            A[r][c] = p;
        }
        A[r][m] = r == 1 ? 1.0 : 0.0;
    }
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        for (int r = 0; r < m; ++r) {
            if (r == col) continue;
            double f = A[r][col] / A[col][col];
            for (int c = col; c <= m; ++c) A[r][c] -= f * A[col][c];
        }
    }
    std::vector<double> w(m);
    for (int r = 0; r < m; ++r) w[r] = A[r][m] / A[r][r];
    return w;
}

// one-sided second-order derivative at the first of three nodes
VectorField3 fd_left3(const VectorField3& f0, const VectorField3& f1,
                      const VectorField3& f2, double h1, double h2) {
    double c0 = -(2 * h1 + h2) / (h1 * (h1 + h2));
    double c1 = (h1 + h2) / (h1 * h2);
    double c2 = -h1 / (h2 * (h1 + h2));
    VectorField3 out(f0.grid());
    for (int c = 0; c < 3; ++c) {
        ScalarField& o = out.comp(c);
        for (std::size_t i = 0; i < o.size(); ++i)
            o[i] = c0 * f0.comp(c)[i] + c1 * f1.comp(c)[i] + c2 * f2.comp(c)[i];
    }
    return out;
}

void check_frame(const HeatTrajectory& traj, const FrameField& frame, int node) {
    const VectorField3& phi = traj.at(node).phi;
    const VectorField3& v = frame.v[node];
    const VectorField3& w = frame.w[node];
    double worst = 0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        worst = std::max(worst, std::abs(v.at(i).norm() - 1.0));
        worst = std::max(worst, std::abs(v.at(i).dot(w.at(i))));
        worst = std::max(worst, std::abs(v.at(i).dot(phi.at(i))));
    }
    if (worst > 1e-8)
        throw ConstraintError("extract_gauge: invalid frame (defect " +
                              std::to_string(worst) + ")");
}

}  // namespace

GaugeData extract_gauge(const HeatTrajectory& traj, const FrameField& frame,
                        int node, const TimeDerivatives* td) {
    if (node < 0 || node >= traj.count())
        throw ConfigError("extract_gauge: node out of range");
    check_frame(traj, frame, node);

    const SphereField& snap = traj.at(node);
    const GridSpec& g = snap.grid();
    const VectorField3& v = frame.v[node];
    const VectorField3& w = frame.w[node];

    GaugeData out;
    out.d = g.d;
    out.node = node;
    out.s = traj.pgrid.s_nodes[node];
    out.psi.assign(g.d + 2, ComplexField(g));
    out.a.assign(g.d + 2, ScalarField(g));

    // spatial directions
    for (int m = 1; m <= g.d; ++m) {
        VectorField3 dphi = derivative3(snap.phi, m - 1);
        out.psi[m] = pair_field(v, w, dphi);
        out.a[m] = dot_field(w, derivative3(v, m - 1));
    }

    // parabolic direction: d phi/ds from the heat equation, A_0 from the
    // finite-difference d v/ds (the caloric gauge monitor)
    out.psi[0] = pair_field(v, w, heat_rhs(snap));
    {
        const auto& s = traj.pgrid.s_nodes;
        int n = traj.count();
        VectorField3 dvds(g);
        if (node >= 2 && node + 2 < n) {
            // centered five-point stencil on the graded grid (4th order)
            std::vector<double> off;
            for (int j = -2; j <= 2; ++j) off.push_back(s[node + j] - s[node]);
            std::vector<double> wts = fd_weights(off);
            for (int c = 0; c < 3; ++c) {
                ScalarField& o = dvds.comp(c);
                for (int j = -2; j <= 2; ++j) {
                    const ScalarField& vc = frame.v[node + j].comp(c);
                    double wj = wts[j + 2];
                    for (std::size_t i = 0; i < o.size(); ++i) o[i] += wj * vc[i];
                }
            }
        } else if (n >= 3) {
            if (node == 0)
                dvds = fd_left3(frame.v[0], frame.v[1], frame.v[2], s[1] - s[0],
                                s[2] - s[1]);
            else if (node == n - 1)
                dvds = fd_left3(frame.v[n - 1], frame.v[n - 2], frame.v[n - 3],
                                s[n - 2] - s[n - 1], s[n - 3] - s[n - 2]);
            else
                dvds = fd_middle3(frame.v[node - 1], frame.v[node],
                                  frame.v[node + 1], s[node] - s[node - 1],
                                  s[node + 1] - s[node]);
        }
        out.a[0] = dot_field(w, dvds);
    }

    if (td) {
        out.psi[g.d + 1] = pair_field(v, w, td->dphi_dt);
        if (td->has_dv) out.a[g.d + 1] = dot_field(w, td->dv_dt);
        out.has_time = true;
    }
    return out;
}

ComplexField covariant_derivative(const GaugeData& g, const ComplexField& psi,
                                  int l) {
    if (l < 1 || l > g.d) throw ConfigError("covariant_derivative: l in 1..d");
    ComplexField out = spectral_derivative(psi, l - 1);
    const ScalarField& al = g.a[l];
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += cplx(0.0, al[i]) * psi[i];
    return out;
}

ResidualReport field_residual(const ComplexField& r) {
    return ResidualReport{l2(r), linf(r)};
}

ResidualReport residual_id1(const GaugeData& g) {
    ResidualReport worst;
    for (int l = 1; l <= g.d; ++l)
        for (int m = l + 1; m <= g.d; ++m) {
            ComplexField r = covariant_derivative(g, g.psi[m], l);
            ComplexField r2 = covariant_derivative(g, g.psi[l], m);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] -= r2[i];
            ResidualReport rep = field_residual(r);
            worst.l2 = std::max(worst.l2, rep.l2);
            worst.linf = std::max(worst.linf, rep.linf);
        }
    return worst;
}

ResidualReport residual_id3(const GaugeData& g) {
    ResidualReport worst;
    for (int l = 1; l <= g.d; ++l)
        for (int m = l + 1; m <= g.d; ++m) {
            ScalarField dl = spectral_derivative(g.a[m], l - 1);
            ScalarField dm = spectral_derivative(g.a[l], m - 1);
            ComplexField r(dl.grid());
            for (std::size_t i = 0; i < r.size(); ++i) {
                double q = std::imag(g.psi[l][i] * std::conj(g.psi[m][i]));
                r[i] = cplx(dl[i] - dm[i] - q, 0.0);
            }
            ResidualReport rep = field_residual(r);
            worst.l2 = std::max(worst.l2, rep.l2);
            worst.linf = std::max(worst.linf, rep.linf);
        }
    return worst;
}

ResidualReport residual_schcov(const GaugeData& g) {
    if (!g.has_time)
        throw DataError("residual_schcov: time direction not populated");
    ComplexField r = g.psi[g.ti()];
    for (int l = 1; l <= g.d; ++l) {
        ComplexField dl = covariant_derivative(g, g.psi[l], l);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= cplx(0, 1) * dl[i];
    }
    return field_residual(r);
}

ResidualReport residual_heatcov(const GaugeData& g) {
    ComplexField r = g.psi[0];
    for (int l = 1; l <= g.d; ++l) {
        ComplexField dl = covariant_derivative(g, g.psi[l], l);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= dl[i];
    }
    return field_residual(r);
}

namespace {

// Right side of the modified Schroedinger / covariant heat equations:
//   sign = -1:  -2i sum A_l d_l psi + (A_t + sum (A_l^2 - i d_l A_l)) psi
//               - i sum psi_l Im(conj(psi_l) psi)
//   sign = +1:  +2i sum A_l d_l psi - sum (A_l^2 - i d_l A_l) psi
//               + i sum Im(psi conj(psi_l)) psi_l   (no A_t term)
ComplexField nonlinearity(const GaugeData& g, const ComplexField& psi, int sign,
                          bool with_time_coeff) {
    const GridSpec& grid = psi.grid();
    ComplexField rhs(grid);
    for (int l = 1; l <= g.d; ++l) {
        ComplexField dpsi = spectral_derivative(psi, l - 1);
        ScalarField dal = spectral_derivative(g.a[l], l - 1);
        const ScalarField& al = g.a[l];
        const ComplexField& pl = g.psi[l];
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            cplx term = cplx(0, 2.0 * sign) * al[i] * dpsi[i];
            term += static_cast<double>(-sign) *
                    (cplx(sq(al[i]), 0) - cplx(0, dal[i])) * psi[i];
            double im = std::imag(std::conj(pl[i]) * psi[i]);
            term += cplx(0, sign) * pl[i] * im;
            rhs[i] += term;
        }
    }
    if (with_time_coeff) {
        const ScalarField& at = g.a[g.d + 1];
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += at[i] * psi[i];
    }
    return rhs;
}

}  // namespace

ResidualReport residual_schcov2(const std::vector<GaugeData>& tstack, double dt,
                                int m) {
    if (tstack.size() < 3 || tstack.size() % 2 == 0)
        throw DataError("residual_schcov2: need an odd stack of >= 3 extractions");
    int c = static_cast<int>(tstack.size()) / 2;
    const GaugeData& g = tstack[c];
    if (!g.has_time)
        throw DataError("residual_schcov2: A_{d+1} missing in center extraction");
    if (m < 1 || m > g.d) throw ConfigError("residual_schcov2: m in 1..d");

    const ComplexField& psi = g.psi[m];
    ComplexField dpsi_dt = psi;
    for (std::size_t i = 0; i < psi.size(); ++i)
        dpsi_dt[i] = (tstack[c + 1].psi[m][i] - tstack[c - 1].psi[m][i]) / (2 * dt);

    ComplexField lhs = spectral_laplacian(psi);
    for (std::size_t i = 0; i < lhs.size(); ++i)
        lhs[i] += cplx(0, 1) * dpsi_dt[i];

    ComplexField rhs = nonlinearity(g, psi, -1, true);
    for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] -= rhs[i];
    return field_residual(lhs);
}

ResidualReport residual_heatcov2(const GaugeData& lo, const GaugeData& mid,
                                 const GaugeData& hi, double s_lo, double s_mid,
                                 double s_hi, int m) {
    if (m < 1 || m > mid.d) throw ConfigError("residual_heatcov2: m in 1..d");
    const ComplexField& psi = mid.psi[m];
    ComplexField dpsi_ds =
        fd_middle(lo.psi[m], mid.psi[m], hi.psi[m], s_mid - s_lo, s_hi - s_mid);
    ComplexField lhs = spectral_laplacian(psi);
    for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] = dpsi_ds[i] - lhs[i];
    ComplexField rhs = nonlinearity(mid, psi, +1, false);
    for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] -= rhs[i];
    return field_residual(lhs);
}

ResidualReport residual_schlin(const GaugeData& center,
                               const std::vector<ComplexField>& psilin_stack,
                               double dt) {
    if (psilin_stack.size() < 3 || psilin_stack.size() % 2 == 0)
        throw DataError("residual_schlin: need an odd stack of >= 3 slices");
    if (!center.has_time)
        throw DataError("residual_schlin: A_{d+1} missing in center extraction");
    int c = static_cast<int>(psilin_stack.size()) / 2;
    const ComplexField& pl = psilin_stack[c];

    ComplexField lhs = spectral_laplacian(pl);
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        cplx dt_term = (psilin_stack[c + 1][i] - psilin_stack[c - 1][i]) / (2 * dt);
        lhs[i] += cplx(0, 1) * dt_term;
    }
    ComplexField rhs = nonlinearity(center, pl, -1, true);
    for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] -= rhs[i];
    return field_residual(lhs);
}

AIntegral a_from_integral(const std::vector<GaugeData>& stack,
                          const ParabolicGrid& pgrid, int from_node, int m) {
    if (stack.size() != static_cast<std::size_t>(pgrid.count()))
        throw DataError("a_from_integral: stack does not cover the parabolic grid");
    int d = stack.front().d;
    if (m < 1 || m > d + 1) throw ConfigError("a_from_integral: m in 1..d+1");
    if (m == d + 1)
        for (const auto& g : stack)
            if (!g.has_time)
                throw DataError("a_from_integral: time direction not populated");

    const GridSpec& grid = stack.front().psi[0].grid();
    auto integrand = [&](int j, std::size_t i) {
        return std::imag(stack[j].psi[0][i] * std::conj(stack[j].psi[m][i]));
    };

    AIntegral out{ScalarField(grid), 0.0};
    int last = pgrid.count() - 1;
    for (int j = from_node; j < last; ++j) {
        double h = pgrid.s_nodes[j + 1] - pgrid.s_nodes[j];
        for (std::size_t i = 0; i < out.field.size(); ++i)
            out.field[i] -= 0.5 * h * (integrand(j, i) + integrand(j + 1, i));
    }
    double tail = 0;
    for (std::size_t i = 0; i < out.field.size(); ++i)
        tail = std::max(tail, std::abs(integrand(last, i)));
    out.tail_bound = tail * pgrid.S_max;
    return out;
}

double derivative_field_mass(const GaugeData& g) {
    double total = 0;
    for (int m = 1; m <= g.d; ++m) total += sq(l2(g.psi[m]));
    return total;
}

ComplexField frame_coordinates(const FrameField& frame, int node,
                               const VectorField3& f) {
    return pair_field(frame.v[node], frame.w[node], f);
}

GaugeStack build_gauge_stack(const SphereField& data,
                             const GaugePipelineConfig& cfg) {
    GaugeStack out;
    out.traj = heat_evolve(data, cfg.pgrid, cfg.heat);
    out.frame = transport_frame(out.traj, cfg.Q_prime, cfg.transport);
    out.nodes.reserve(out.traj.count());
    for (int i = 0; i < out.traj.count(); ++i) {
        if (i == 0 && cfg.time_at_zero) {
            TimeDerivatives td;
            td.dphi_dt = smap_rhs(out.traj.at(0));
            out.nodes.push_back(extract_gauge(out.traj, out.frame, i, &td));
        } else {
            out.nodes.push_back(extract_gauge(out.traj, out.frame, i));
        }
    }
    return out;
}

Vec3 default_Q_prime(const Vec3& Q) {
    Vec3 seed = std::abs(Q.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 v = seed - Q * Q.dot(seed);
    return v.normalized();
}

}  // namespace smlab
