#pragma once

#include "smlab/spacetime.hpp"

namespace smlab {

/// Slowly varying envelope gamma_k = sup_{k'} 2^{-delta |k-k'|} alpha_{k'}
/// over a dyadic window, delta = 1/(20 d).
struct FrequencyEnvelope {
    int k_min = 0;
    double sigma = 0;
    double delta = 0;
    std::vector<double> alpha;  // raw band profile 2^{sigma k} |P_k .|
    std::vector<double> gamma;

    int k_max() const { return k_min + static_cast<int>(gamma.size()) - 1; }
    double gamma_at(int k) const { return gamma[k - k_min]; }
    // worst violation of gamma_k <= gamma_j 2^{delta |k-j|} (0 for exact construction)
    double slowly_varying_defect() const;
    double sum_gamma_sq() const;
    double sum_alpha_sq() const;
};

FrequencyEnvelope envelope_from_profile(const std::vector<double>& alpha, int k_min,
                                        double sigma, double delta);

// alpha_k = 2^{sigma k} ||P_k phi||_{L^2} for a static complex field.
FrequencyEnvelope frequency_envelope(const ComplexField& phi, double sigma,
                                     int k_min, int k_max, double delta);

// alpha_k = 2^{sigma k} sup_t ||P_k u(t)||_{L^2} for a space-time field.
FrequencyEnvelope frequency_envelope(const SpaceTimeField& u, double sigma,
                                     int k_min, int k_max, double delta);

// Data envelope c_k: alpha_k = 2^{sigma k} ||P_k grad phi||_{L^2} summed over
// components of a sphere-valued map.
FrequencyEnvelope data_envelope(const VectorField3& phi, double sigma, int k_min,
                                int k_max, double delta);

}  // namespace smlab
