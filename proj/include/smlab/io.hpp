#pragma once

#include <string>

#include "smlab/grid.hpp"

namespace smlab {

// Field dump format shared by all modules: little-endian 64-bit floats in
// row-major axis order (components fastest), plus a JSON sidecar
// <path>.json with {"d", "n", "box_length", "components", "time"}.
void dump_scalar(const std::string& path, const ScalarField& f, double time = 0);
void dump_complex(const std::string& path, const ComplexField& f, double time = 0);
void dump_vector3(const std::string& path, const VectorField3& f, double time = 0);

ScalarField load_scalar(const std::string& path);
ComplexField load_complex(const std::string& path);
VectorField3 load_vector3(const std::string& path);

}  // namespace smlab
