#include "smlab/io.hpp"

#include <fstream>

#include <json.hpp>

namespace smlab {

namespace {

void write_sidecar(const std::string& path, const GridSpec& g, int components,
                   double time) {
    nlohmann::json j;
    j["d"] = g.d;
    j["n"] = g.n;
    j["box_length"] = g.box_length;
    j["components"] = components;
    j["time"] = time;
    std::ofstream out(path + ".json");
    out << j.dump(2) << "\n";
}

GridSpec read_sidecar(const std::string& path, int expected_components) {
    std::ifstream in(path + ".json");
    if (!in) throw DataError("missing sidecar for " + path);
    nlohmann::json j;
    in >> j;
    if (j.at("components").get<int>() != expected_components)
        throw DataError("component count mismatch in " + path);
    return GridSpec(j.at("d").get<int>(), j.at("n").get<int>(),
                    j.at("box_length").get<double>());
}

void write_raw(const std::string& path, const double* data, std::size_t count) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(count * sizeof(double)));
    if (!out) throw DataError("failed to write " + path);
}

void read_raw(const std::string& path, double* data, std::size_t count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("failed to open " + path);
    in.read(reinterpret_cast<char*>(data),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double))
        throw DataError("short read in " + path);
}

}  // namespace

void dump_scalar(const std::string& path, const ScalarField& f, double time) {
    write_raw(path, f.data(), f.size());
    write_sidecar(path, f.grid(), 1, time);
}

void dump_complex(const std::string& path, const ComplexField& f, double time) {
    write_raw(path, reinterpret_cast<const double*>(f.data()), 2 * f.size());
    write_sidecar(path, f.grid(), 2, time);
}

void dump_vector3(const std::string& path, const VectorField3& f, double time) {
    std::vector<double> interleaved(3 * f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        interleaved[3 * i] = f.x[i];
        interleaved[3 * i + 1] = f.y[i];
        interleaved[3 * i + 2] = f.z[i];
    }
    write_raw(path, interleaved.data(), interleaved.size());
    write_sidecar(path, f.grid(), 3, time);
}

ScalarField load_scalar(const std::string& path) {
    GridSpec g = read_sidecar(path, 1);
    ScalarField f(g);
    read_raw(path, f.data(), f.size());
    return f;
}

ComplexField load_complex(const std::string& path) {
    GridSpec g = read_sidecar(path, 2);
    ComplexField f(g);
    read_raw(path, reinterpret_cast<double*>(f.data()), 2 * f.size());
    return f;
}

VectorField3 load_vector3(const std::string& path) {
    GridSpec g = read_sidecar(path, 3);
    VectorField3 f(g);
    std::vector<double> interleaved(3 * f.size());
    read_raw(path, interleaved.data(), interleaved.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.x[i] = interleaved[3 * i];
        f.y[i] = interleaved[3 * i + 1];
        f.z[i] = interleaved[3 * i + 2];
    }
    return f;
}

}  // namespace smlab
