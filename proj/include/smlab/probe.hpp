#pragma once

#include "smlab/norms.hpp"

namespace smlab {

// Free Schroedinger evolution e^{i t Delta} f sampled on uniform time nodes.
SpaceTimeField free_evolution(const ComplexField& f, double t0, double dt, int nt);

// Unit-L2 random data with complex Gaussian Fourier coefficients weighted by
// chi_k(|xi|); when e is given, by chi_k(xi . e) with a radial cap (the
// P_{k,e}-localized variant).
ComplexField random_band_field(const GridSpec& g, int k, Rng& rng,
                               const Vec3* e = nullptr);

// Phase-aligned band kernel (all Fourier coefficients positive): the focusing
// extremizer of the maximal-function estimates, unit L2.
ComplexField band_kernel_field(const GridSpec& g, int k, const Vec3* e = nullptr);

// Exact dyadic dilation on the torus: spectrum index map xi -> 2^j xi.
ComplexField dilate_spectrum(const ComplexField& f, int j);

enum class ProbeEstimate { LocSmo, LatStc, LinNew, LinSt, LinMax, LatStA, LatStB };

const char* probe_name(ProbeEstimate e);
ProbeEstimate probe_from_name(const std::string& name);

struct ProbeOptions {
    int K_cal = 2;
    int nt = 17;           // time nodes at the reference band
    int nt_max = 129;
    double T_ref = 0.25;   // window half-width at the reference (smallest) band
    int lambda_samples = 5;
    SumSpaceOptions sum_opts;
};

struct ProbeReport {
    std::string estimate;
    int d = 2;
    int K_cal = 2;
    std::vector<int> ks;
    std::vector<double> max_ratio, mean_ratio;
    double slope = 0;  // least-squares slope of log2(max ratio) vs k
    int ensemble = 0;
    std::uint64_t seed = 0;
    std::string protocol;  // time-window restriction note
};

// Ensemble ratio probe of one homogeneous estimate: left-side norm divided by
// the predicted dyadic right side, per k; requires >= 3 bands and >= 16 members.
ProbeReport probe(ProbeEstimate estimate, const GridSpec& g,
                  const std::vector<int>& ks, int ensemble, std::uint64_t seed,
                  const ProbeOptions& opts = {});

// u(t) = e^{it Delta} u0 + int_0^t e^{i(t-s) Delta} h(s) ds by exact-propagator
// midpoint quadrature (substeps per output interval).
SpaceTimeField duhamel_solve(const ComplexField& u0,
                             const std::function<ComplexField(double)>& h,
                             double t0, double dt, int nt, int substeps);

struct DuhamelReport {
    double ratio = 0;       // G_k(u) / (||u0|| + N_k(h))
    double g_norm = 0;
    double u0_norm = 0;
    double n_norm = 0;
    double richardson = 0;  // relative quadrature error estimate
    std::string n_candidate;
};

DuhamelReport duhamel_probe(const ComplexField& u0, const SpaceTimeField& h, int k,
                            const NormParams& params, int substeps = 64);

}  // namespace smlab
