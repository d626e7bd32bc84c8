#include "smlab/spacetime.hpp"

namespace smlab {

ComplexField shift_field(const ComplexField& f, const Vec3& offset) {
    const int d = f.grid().d;
    return apply_multiplier(f, [&](const double* xi) {
        double phase = xi[0] * offset.x + xi[1] * offset.y +
                       (d == 3 ? xi[2] * offset.z : 0.0);
        return std::exp(cplx(0.0, phase));
    });
}

SpaceTimeField galilean_transform(const SpaceTimeField& u, const Vec3& w) {
    SpaceTimeField out(u.grid, u.t0, u.dt, u.nt());
    const int d = u.grid.d;
    const double w2 = w.dot(w);
    for (int j = 0; j < u.nt(); ++j) {
        double t = u.time(j);
        // u(x + t w, t), exact by Fourier phases
        ComplexField s = shift_field(u.slices[j], t * w);
        // unimodular prefactors e^{-i x.w/2} e^{-i t |w|^2 / 4}
        const GridSpec& g = u.grid;
        cplx tphase = std::exp(cplx(0.0, -t * w2 / 4.0));
        std::size_t idx = 0;
        double h = g.h();
        if (d == 2) {
            for (int i0 = 0; i0 < g.n; ++i0)
                for (int i1 = 0; i1 < g.n; ++i1, ++idx) {
                    double xw = i0 * h * w.x + i1 * h * w.y;
                    s[idx] *= tphase * std::exp(cplx(0.0, -xw / 2.0));
                }
        } else {
            for (int i0 = 0; i0 < g.n; ++i0)
                for (int i1 = 0; i1 < g.n; ++i1)
                    for (int i2 = 0; i2 < g.n; ++i2, ++idx) {
                        double xw = i0 * h * w.x + i1 * h * w.y + i2 * h * w.z;
                        s[idx] *= tphase * std::exp(cplx(0.0, -xw / 2.0));
                    }
        }
        out.slices[j] = std::move(s);
    }
    return out;
}

}  // namespace smlab
