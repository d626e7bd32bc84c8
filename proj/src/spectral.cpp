#include "smlab/spectral.hpp"

namespace smlab {

namespace {
double smooth_step_g(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }
}  // namespace

double eta0(double mu) {
    double a = std::abs(mu);
    if (a <= 1.25) return 1.0;
    if (a >= 1.6) return 0.0;
    double t = (1.6 - a) / 0.35;
    double g = smooth_step_g(t);
    return g / (g + smooth_step_g(1.0 - t));
}

double chi_k(double mu, int k) {
    return eta0(mu * std::exp2(-k)) - eta0(mu * std::exp2(-(k - 1)));
}

ComplexField project_dyadic(const ComplexField& f, int k) {
    DyadicWindow::from_grid(f.grid()).require(k);
    return apply_multiplier(f, [&](const double* xi) {
        double r2 = 0;
        for (int m = 0; m < f.grid().d; ++m) r2 += sq(xi[m]);
        return cplx(chi_k(std::sqrt(r2), k), 0.0);
    });
}

VectorField3 project_dyadic(const VectorField3& f, int k) {
    VectorField3 out(f.grid());
    for (int c = 0; c < 3; ++c)
        out.comp(c) = real_part(project_dyadic(to_complex(f.comp(c)), k));
    return out;
}

ComplexField project_directional(const ComplexField& f, int k, const Vec3& e) {
    if (std::abs(e.norm() - 1.0) > 1e-12)
        throw ConstraintError("project_directional: e is not a unit vector");
    DyadicWindow::from_grid(f.grid()).require(k);
    const int d = f.grid().d;
    return apply_multiplier(f, [&](const double* xi) {
        double p = xi[0] * e.x + xi[1] * e.y + (d == 3 ? xi[2] * e.z : 0.0);
        return cplx(chi_k(p, k), 0.0);
    });
}

ComplexField spectral_derivative(const ComplexField& f, int axis) {
    return apply_multiplier(
        f, [axis](const double* xi) { return cplx(0.0, xi[axis]); });
}

ScalarField spectral_derivative(const ScalarField& f, int axis) {
    return real_part(spectral_derivative(to_complex(f), axis));
}

ComplexField spectral_laplacian(const ComplexField& f) {
    const int d = f.grid().d;
    return apply_multiplier(f, [d](const double* xi) {
        double r2 = 0;
        for (int m = 0; m < d; ++m) r2 += sq(xi[m]);
        return cplx(-r2, 0.0);
    });
}

ScalarField spectral_laplacian(const ScalarField& f) {
    return real_part(spectral_laplacian(to_complex(f)));
}

VectorField3 spectral_laplacian(const VectorField3& f) {
    VectorField3 out(f.grid());
    for (int c = 0; c < 3; ++c) out.comp(c) = spectral_laplacian(f.comp(c));
    return out;
}

void derivatives_and_laplacian(const ScalarField& f, std::vector<ScalarField>& df,
                               ScalarField& lap) {
    const GridSpec& g = f.grid();
    ComplexField F = fft_forward(to_complex(f));
    df.assign(g.d, ScalarField(g));
    for (int m = 0; m < g.d; ++m) {
        ComplexField D(g);
        for_each_mode(g, [&](std::size_t i, const double* xi) {
            D[i] = cplx(0.0, xi[m]) * F[i];
        });
        df[m] = real_part(fft_inverse(D));
    }
    ComplexField Lp(g);
    for_each_mode(g, [&](std::size_t i, const double* xi) {
        double r2 = 0;
        for (int m = 0; m < g.d; ++m) r2 += sq(xi[m]);
        Lp[i] = -r2 * F[i];
    });
    lap = real_part(fft_inverse(Lp));
}

ComplexField heat_semigroup(const ComplexField& f, double s) {
    const int d = f.grid().d;
    return apply_multiplier(f, [d, s](const double* xi) {
        double r2 = 0;
        for (int m = 0; m < d; ++m) r2 += sq(xi[m]);
        return cplx(std::exp(-s * r2), 0.0);
    });
}

ScalarField heat_semigroup(const ScalarField& f, double s) {
    return real_part(heat_semigroup(to_complex(f), s));
}

VectorField3 heat_semigroup(const VectorField3& f, double s) {
    VectorField3 out(f.grid());
    for (int c = 0; c < 3; ++c) out.comp(c) = heat_semigroup(f.comp(c), s);
    return out;
}

ComplexField free_propagator(const ComplexField& f, double t) {
    const int d = f.grid().d;
    return apply_multiplier(f, [d, t](const double* xi) {
        double r2 = 0;
        for (int m = 0; m < d; ++m) r2 += sq(xi[m]);
        return std::exp(cplx(0.0, -t * r2));
    });
}

double band_leakage(const ComplexField& f, int k) {
    ComplexField F = fft_forward(f);
    const int d = f.grid().d;
    double inside = 0, total = 0;
    double lo = std::exp2(k - 1), hi = std::exp2(k + 1);
    for_each_mode(f.grid(), [&](std::size_t i, const double* xi) {
        double r2 = 0;
        for (int m = 0; m < d; ++m) r2 += sq(xi[m]);
        double r = std::sqrt(r2);
        double p = std::norm(F[i]);
        total += p;
        if (r >= lo && r <= hi) inside += p;
    });
    return total > 0 ? 1.0 - inside / total : 0.0;
}

ComplexField to_complex(const ScalarField& f) {
    ComplexField out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = cplx(f[i], 0.0);
    return out;
}

ScalarField real_part(const ComplexField& f) {
    ScalarField out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
    return out;
}

}  // namespace smlab
