#pragma once

#include <string>

#include "smlab/envelope.hpp"
#include "smlab/gauge.hpp"
#include "smlab/probe.hpp"

namespace smlab {

struct PhysicsConfig {
    Vec3 Q{0, 0, 1};
    double theta = M_PI / 4;  // helical cone angle
    int kappa_mult = 1;       // kappa = kappa_mult * 2 pi / L
    double amplitude = 0.05;  // bump amplitude (radians at the center)
    double width = 0.3;       // bump width
    double amplitude2 = 0.6;  // relative size of the second tangent component
    int modulation = 0;       // oscillation count across the box
};

struct RunConfig {
    double T = 1.0;
    double dt = 0;             // 0: grid default
    double s_max = 0;          // 0: s_max_factor * width^2
    double s_max_factor = 64;
    int per_octave = 6;        // parabolic grading 2^{1/per_octave}
    int heat_substeps = 16;
    int transport_substeps = 8;
    int K_cal = 2;
    int dir_count = 16;
    std::uint64_t seed = 1234;
    double lipschitz_h = 1e-2;
    long cadence = 100;
};

struct ScenarioConfig {
    std::string scenario = "gaussian_bump";  // constant | helical | gaussian_bump
                                             // | nearby_pair | random_band
    GridSpec grid{2, 128, 8.0};
    PhysicsConfig phys;
    RunConfig run;
    std::string out_dir = "out";
};

ScenarioConfig load_config(const std::string& path);
std::string config_to_json(const ScenarioConfig& cfg);
std::string config_hash(const ScenarioConfig& cfg);

// Initial data for the configured scenario (smallness-checked for gauge use).
SphereField make_initial(const ScenarioConfig& cfg);
// Smooth tangent bump used by nearby_pair and the linearized checks.
VectorField3 tangent_bump(const SphereField& base, const PhysicsConfig& phys);
// exp-map perturbation of base by h * bump (pointwise geodesic step).
SphereField perturb(const SphereField& base, const VectorField3& bump, double h);

double boundary_tail(const SphereField& f);

// E_1^{1/2} <= 0.3 smallness surrogate for gauge scenarios.
void require_gauge_smallness(const SphereField& f);

ParabolicGrid make_pgrid(const ScenarioConfig& cfg);
GaugePipelineConfig make_gauge_config(const ScenarioConfig& cfg);

// ---- runners (CLI subcommands) ----
struct RunSummary {
    bool gates_passed = true;
    std::string details;
};

RunSummary run_evolve(const ScenarioConfig& cfg);
RunSummary run_gauge(const ScenarioConfig& cfg);
RunSummary run_norms(const ScenarioConfig& cfg);
RunSummary run_probe(const ScenarioConfig& cfg);
RunSummary run_report(const ScenarioConfig& cfg);

void write_manifest(const ScenarioConfig& cfg, double wall_seconds);

}  // namespace smlab
