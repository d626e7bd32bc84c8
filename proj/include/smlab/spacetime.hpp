#pragma once

#include <vector>

#include "smlab/spectral.hpp"

namespace smlab {

/// Complex scalar field sampled on grid x uniform time nodes in [t0, t0 + (nt-1) dt].
struct SpaceTimeField {
    GridSpec grid;
    double t0 = 0;
    double dt = 0;
    std::vector<ComplexField> slices;

    SpaceTimeField() = default;
    SpaceTimeField(const GridSpec& g, double t0_, double dt_, int nt)
        : grid(g), t0(t0_), dt(dt_), slices(nt, ComplexField(g)) {}

    int nt() const { return static_cast<int>(slices.size()); }
    double time(int j) const { return t0 + j * dt; }
    double half_width() const { return 0.5 * (nt() - 1) * dt; }

    void require_norm_ready() const {
        if (nt() < 9) throw DataError("SpaceTimeField: need >= 9 time nodes");
    }
};

// Galilean boost T_w(u)(x,t) = e^{-i x.w/2} e^{-i t |w|^2/4} u(x + t w, t).
// The time-dependent spatial shift is realized by Fourier phases, exact for
// band-limited u (shifts wrap around the periodic box). The modulus of a
// single boost is exact for every w; composing boosts or differentiating the
// output additionally needs w/2 on the frequency lattice, since the phase
// prefactor is only then grid-periodic.
SpaceTimeField galilean_transform(const SpaceTimeField& u, const Vec3& w);

// Spatial shift by a constant offset via Fourier phases.
ComplexField shift_field(const ComplexField& f, const Vec3& offset);

}  // namespace smlab
