#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "smlab/acceptance.hpp"
#include "smlab/scenario.hpp"

using namespace smlab;

namespace {

int run_subcommand(const std::string& cmd, ScenarioConfig cfg) {
    auto t0 = std::chrono::steady_clock::now();
    RunSummary sum;
    if (cmd == "evolve")
        sum = run_evolve(cfg);
    else if (cmd == "gauge")
        sum = run_gauge(cfg);
    else if (cmd == "norms")
        sum = run_norms(cfg);
    else if (cmd == "probe")
        sum = run_probe(cfg);
    else
        sum = run_report(cfg);
    double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(cfg, wall);
    std::cout << cmd << ": " << sum.details << "\n";
    return sum.gates_passed ? 0 : 1;
}

void write_error_record(const std::string& out_dir, const std::string& type,
                        const std::string& what) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    nlohmann::json j = {{"error", what}, {"type", type}};
    std::ofstream f(out_dir + "/error.json");
    f << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"smlab: Schroedinger map flow, caloric gauge, and dispersive "
                 "norm laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 1;
    std::vector<int> only;

    app.add_option("--config", config_path, "scenario config (JSON)");
    app.add_option("--seed", seed, "override RNG seed")->each([&](std::string) {
        seed_set = true;
    });
    app.add_option("--workers", workers, "cap internal parallelism");
    app.add_option("--out", out_dir, "output directory");

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--only", only, "criteria ids to run");
    verify->fallthrough();
    for (const char* name : {"evolve", "gauge", "norms", "probe", "report"})
        app.add_subcommand(name)->fallthrough();

    CLI11_PARSE(app, argc, argv);
    std::string cmd = app.get_subcommands().front()->get_name();

    if (cmd == "verify") {
        auto results = run_acceptance(only, &std::cout);
        return all_passed(results) ? 0 : 1;
    }

    ScenarioConfig cfg;
    if (!out_dir.empty()) cfg.out_dir = out_dir;  // error records land here too
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed_set) cfg.run.seed = seed;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        (void)workers;
        return run_subcommand(cmd, cfg);
    } catch (const ConfigError& e) {
        write_error_record(cfg.out_dir, "config", e.what());
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DivergenceError& e) {
        write_error_record(cfg.out_dir, "divergence", e.what());
        std::cerr << "numerical divergence: " << e.what() << "\n";
        return 3;
    } catch (const StabilityError& e) {
        write_error_record(cfg.out_dir, "stability", e.what());
        std::cerr << "numerical instability: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        write_error_record(cfg.out_dir, "error", e.what());
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
