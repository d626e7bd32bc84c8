#pragma once

#include <optional>
#include <string>

#include "smlab/rotate.hpp"
#include "smlab/spacetime.hpp"

namespace smlab {

/// Admissible tilt speeds W_k = { lambda in [-2^k, 2^k] : 2^{k+2K} lambda in Z },
/// kept implicit (the cardinality is exponential in k).
struct VelocitySet {
    int k = 0;
    int K_cal = 2;

    static VelocitySet W(int k, int K_cal) { return VelocitySet{k, K_cal}; }

    double spacing() const { return std::exp2(-(k + 2 * K_cal)); }
    double range() const { return std::exp2(k); }
    long long j_max() const { return 1ll << (2 * k + 2 * K_cal); }
    double count() const { return 2.0 * static_cast<double>(j_max()) + 1.0; }
    double lambda_of(long long j) const { return j * spacing(); }
    long long snap_index(double lambda) const {
        long long j = llround(lambda / spacing());
        return std::clamp(j, -j_max(), j_max());
    }
    std::vector<double> lambdas() const;  // materialized; throws if too large
};

// ---- mixed space-time norms ------------------------------------------------
// Time integrals use the trapezoid rule on the uniform node set; p or q = infinity
// is the max over sample nodes. Pass std::numeric_limits<double>::infinity().

// Full space-time Lebesgue norm L^p_{x,t}.
double norm_lp_xt(const SpaceTimeField& u, double p);
// sup over t of the spatial L^q norm (L^infty_t L^q_x).
double norm_linft_lqx(const SpaceTimeField& u, double q);
// outer L^p in t of the spatial L^q norm.
double norm_lpt_lqx(const SpaceTimeField& u, double p, double q);
// pointwise sup over t, then spatial L^q (L^q_x L^infty_t).
double norm_lqx_linft(const SpaceTimeField& u, double q);

// Lateral norm L^{p,q}_{e,lambda}: Galilean tilt by lambda e, outer L^p along
// e, inner L^q over the transverse coordinates and time.
double lateral_norm(const SpaceTimeField& u, double p, double q, const Vec3& e,
                    double lambda = 0.0);

// Shared-spectrum evaluation over many tilts: the unimodular Galilean
// prefactors do not change the norms, so each lambda costs one phase ramp and
// one inverse transform per time slice. Zero slices are skipped.
std::vector<double> lateral_norm_sweep(const SpaceTimeField& u, double p, double q,
                                       const Vec3& e,
                                       const std::vector<double>& lambdas);

// ---- sum / intersection spaces ----------------------------------------------

struct SumSpaceOptions {
    int lambda_samples = 33;  // single-lambda candidate subsample of W
    int greedy_slabs = 8;     // time slabs for the greedy candidate
    bool packets = true;      // frequency-column candidate (axis-aligned e)
};

struct SumSpaceBound {
    double value = 0;
    std::string candidate;  // which family member attained the bound
};

// Upper bound on the Sigma^r sum-space norm
//   ||u||^r = |W|^{r-1} inf_{u = sum u_lambda} sum ||u_lambda||^r
// over the documented candidate family.
SumSpaceBound sum_space_norm(const SpaceTimeField& u, double p, double q,
                             const Vec3& e, const VelocitySet& W, double r,
                             const SumSpaceOptions& opts = {});

// Exact evaluation (|W|^{-1} sum_lambda ||u||^r)^{1/r}; requires a
// materializable W.
double intersection_space_norm(const SpaceTimeField& u, double p, double q,
                               const Vec3& e, const VelocitySet& W, double r);

// ---- composite dyadic norms --------------------------------------------------

enum class CompositeNorm { Fk, Fk0, Gk, Nk, Sk_omega };

struct NormParams {
    int d = 2;
    int K_cal = 2;
    double omega = 0.5;        // for S_k^omega
    int dir_count = 16;        // d = 2 direction count (d = 3 uses the fixed set)
    int j_halfwidth = 20;      // |j - k| range in the G_k locmoothing sup
    int lambda_samples = 3;    // subsample of |lambda| < 2^{k-40} sups
    double leakage_tol = 0.01; // spectral mass allowed outside I_k
    SumSpaceOptions sum_opts;
};

struct CompositeValue {
    double value = 0;
    std::string candidate;  // decomposition id for infimum-type norms
};

CompositeValue composite_norm(const SpaceTimeField& u, int k, CompositeNorm which,
                              const NormParams& params);

// Strichartz exponent p_d = (2d+4)/d.
inline double strichartz_p(int d) { return (2.0 * d + 4.0) / d; }

}  // namespace smlab
