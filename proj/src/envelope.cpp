#include "smlab/envelope.hpp"

namespace smlab {

double FrequencyEnvelope::slowly_varying_defect() const {
    double worst = 0;
    int m = static_cast<int>(gamma.size());
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            double bound = gamma[b] * std::exp2(delta * std::abs(a - b));
            worst = std::max(worst, gamma[a] - bound);
        }
    return worst;
}

double FrequencyEnvelope::sum_gamma_sq() const {
    double s = 0;
    for (double g : gamma) s += sq(g);
    return s;
}

double FrequencyEnvelope::sum_alpha_sq() const {
    double s = 0;
    for (double a : alpha) s += sq(a);
    return s;
}

FrequencyEnvelope envelope_from_profile(const std::vector<double>& alpha, int k_min,
                                        double sigma, double delta) {
    FrequencyEnvelope env;
    env.k_min = k_min;
    env.sigma = sigma;
    env.delta = delta;
    env.alpha = alpha;
    env.gamma.resize(alpha.size());
    int m = static_cast<int>(alpha.size());
    for (int a = 0; a < m; ++a) {
        double g = 0;
        for (int b = 0; b < m; ++b)
            g = std::max(g, alpha[b] * std::exp2(-delta * std::abs(a - b)));
        env.gamma[a] = g;
    }
    return env;
}

namespace {

std::vector<double> band_l2_profile(const ComplexField& f, int k_min, int k_max,
                                    double sigma) {
    std::vector<double> alpha;
    for (int k = k_min; k <= k_max; ++k)
        alpha.push_back(std::exp2(sigma * k) * l2(project_dyadic(f, k)));
    return alpha;
}

}  // namespace

FrequencyEnvelope frequency_envelope(const ComplexField& phi, double sigma,
                                     int k_min, int k_max, double delta) {
    return envelope_from_profile(band_l2_profile(phi, k_min, k_max, sigma), k_min,
                                 sigma, delta);
}

FrequencyEnvelope frequency_envelope(const SpaceTimeField& u, double sigma,
                                     int k_min, int k_max, double delta) {
    std::vector<double> alpha(k_max - k_min + 1, 0.0);
    for (const auto& s : u.slices) {
        auto a = band_l2_profile(s, k_min, k_max, sigma);
        for (std::size_t i = 0; i < alpha.size(); ++i)
            alpha[i] = std::max(alpha[i], a[i]);
    }
    return envelope_from_profile(alpha, k_min, sigma, delta);
}

FrequencyEnvelope data_envelope(const VectorField3& phi, double sigma, int k_min,
                                int k_max, double delta) {
    const GridSpec& g = phi.grid();
    std::vector<double> alpha(k_max - k_min + 1, 0.0);
    for (int c = 0; c < 3; ++c)
        for (int m = 0; m < g.d; ++m) {
            ComplexField df = to_complex(spectral_derivative(phi.comp(c), m));
            for (int k = k_min; k <= k_max; ++k)
                alpha[k - k_min] += sq(l2(project_dyadic(df, k)));
        }
    for (std::size_t i = 0; i < alpha.size(); ++i)
        alpha[i] = std::exp2(sigma * (k_min + static_cast<int>(i))) *
                   std::sqrt(alpha[i]);
    return envelope_from_profile(alpha, k_min, sigma, delta);
}

}  // namespace smlab
