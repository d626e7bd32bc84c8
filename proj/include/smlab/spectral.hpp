#pragma once

#include <vector>

#include "smlab/fft.hpp"
#include "smlab/grid.hpp"

namespace smlab {

// Littlewood-Paley cutoff profile: smooth, even, 1 on |mu|<=5/4 and 0 on
// |mu|>=8/5, realized as a smoothed step between the two plateaus.
double eta0(double mu);

// chi_k(mu) = eta0(mu/2^k) - eta0(mu/2^{k-1}); supported in
// |mu| in [5/8 * 2^k, 8/5 * 2^k].
double chi_k(double mu, int k);

/// Dyadic indices resolvable on a grid: the annulus of band k must sit
/// between the lowest torus frequency and half of Nyquist.
struct DyadicWindow {
    int k_min, k_max;

    static DyadicWindow from_grid(const GridSpec& g) {
        DyadicWindow w;
        w.k_min = static_cast<int>(std::ceil(std::log2(2.0 * M_PI / g.box_length)));
        w.k_max = static_cast<int>(std::floor(std::log2(g.xi_max() / 2.0)));
        return w;
    }
    bool contains(int k) const { return k >= k_min && k <= k_max; }
    void require(int k) const {
        if (!contains(k))
            throw BandError("dyadic band k=" + std::to_string(k) +
                            " outside window [" + std::to_string(k_min) + "," +
                            std::to_string(k_max) + "]");
    }
};

// P_k: Fourier multiplier chi_k(|xi|).
ComplexField project_dyadic(const ComplexField& f, int k);
VectorField3 project_dyadic(const VectorField3& f, int k);

// P_{k,e}: Fourier multiplier chi_k(xi . e). e must be a unit vector.
ComplexField project_directional(const ComplexField& f, int k, const Vec3& e);

// Exact Fourier-side differentiation on the periodic box.
ScalarField spectral_derivative(const ScalarField& f, int axis);
ComplexField spectral_derivative(const ComplexField& f, int axis);
ScalarField spectral_laplacian(const ScalarField& f);
ComplexField spectral_laplacian(const ComplexField& f);
VectorField3 spectral_laplacian(const VectorField3& f);

// One forward transform, d+1 inverse transforms: all first derivatives and
// the Laplacian of f.
void derivatives_and_laplacian(const ScalarField& f, std::vector<ScalarField>& df,
                               ScalarField& lap);

// e^{s Delta} f (heat semigroup, s >= 0).
ComplexField heat_semigroup(const ComplexField& f, double s);
ScalarField heat_semigroup(const ScalarField& f, double s);
VectorField3 heat_semigroup(const VectorField3& f, double s);

// e^{i t Delta} f (free Schroedinger propagator).
ComplexField free_propagator(const ComplexField& f, double t);

// Fraction of spectral mass outside the annulus I_k = {|xi| in [2^{k-1}, 2^{k+1}]}.
double band_leakage(const ComplexField& f, int k);

ComplexField to_complex(const ScalarField& f);
ScalarField real_part(const ComplexField& f);

}  // namespace smlab
