#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace smlab {

// Error taxonomy shared by the library and the CLI. Exit codes:
// config errors -> 2, numerical divergence -> 3, gate failures -> 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConstraintError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BandError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double a) const { return {a * x, a * y, a * z}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        double r = norm();
        return {x / r, y / r, z / r};
    }
};

inline Vec3 operator*(double a, const Vec3& v) { return v * a; }

// Deterministic splittable RNG. We roll our own normal sampler
// (Box-Muller over mt19937_64 uniforms) so that streams are identical
// across standard library implementations.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    // splitmix64
    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    Rng split(std::uint64_t stream) const {
        Rng r(state ^ (0x5851f42d4c957f2dull * (stream + 1)));
        r.next_u64();
        return r;
    }
    double uniform() {  // (0,1)
        return (next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }
    double normal() {
        double u1 = uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
};

inline double sq(double a) { return a * a; }

}  // namespace smlab
