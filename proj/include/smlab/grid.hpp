#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "smlab/util.hpp"

namespace smlab {

using cplx = std::complex<double>;

/// Periodic box discretization. The grid has n points per axis on
/// [0, box_length)^d, d = 2 or 3, n a power of two.
struct GridSpec {
    int d = 2;
    int n = 64;
    double box_length = 2.0 * M_PI;
    double dt_hint = 0.0;

    GridSpec() { dt_hint = default_dt(); }
    GridSpec(int d_, int n_, double box_length_)
        : d(d_), n(n_), box_length(box_length_) {
        validate();
        dt_hint = default_dt();
    }

    void validate() const {
        if (d != 2 && d != 3) throw ConfigError("GridSpec: d must be 2 or 3");
        if (n < 8 || (n & (n - 1)) != 0)
            throw ConfigError("GridSpec: n must be a power of two, n >= 8");
        if (!(box_length > 0)) throw ConfigError("GridSpec: box_length must be > 0");
    }

    std::size_t points() const {
        std::size_t p = 1;
        for (int m = 0; m < d; ++m) p *= static_cast<std::size_t>(n);
        return p;
    }
    double h() const { return box_length / n; }
    double cell_volume() const {
        double v = 1;
        for (int m = 0; m < d; ++m) v *= h();
        return v;
    }
    // Diffusive-scale step for the stiff |xi|^2 dispersion.
    double default_dt() const { return 0.25 * sq(box_length / (M_PI * n)); }
    // Signed integer mode for index i along one axis.
    int mode(int i) const { return i <= n / 2 ? i : i - n; }
    // Wavenumber for index i; the Nyquist mode is kept with its positive sign
    // (all supported data is band-limited strictly below it).
    double xi(int i) const { return 2.0 * M_PI / box_length * mode(i); }
    double xi_max() const { return M_PI * n / box_length; }

    bool operator==(const GridSpec& o) const {
        return d == o.d && n == o.n && box_length == o.box_length;
    }
};

template <typename T>
class Field {
  public:
    Field() = default;
    explicit Field(const GridSpec& g, T fill = T{})
        : grid_(g), v_(g.points(), fill) {}

    const GridSpec& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    T* data() { return v_.data(); }
    const T* data() const { return v_.data(); }
    T& operator[](std::size_t i) { return v_[i]; }
    const T& operator[](std::size_t i) const { return v_[i]; }
    std::vector<T>& values() { return v_; }
    const std::vector<T>& values() const { return v_; }

    // Row-major index: axis 0 slowest, axis d-1 fastest.
    std::size_t index(int i0, int i1) const {
        return static_cast<std::size_t>(i0) * grid_.n + i1;
    }
    std::size_t index(int i0, int i1, int i2) const {
        return (static_cast<std::size_t>(i0) * grid_.n + i1) * grid_.n + i2;
    }

  private:
    GridSpec grid_;
    std::vector<T> v_;
};

using ScalarField = Field<double>;
using ComplexField = Field<cplx>;

/// R^3-valued field stored as three scalar planes.
struct VectorField3 {
    ScalarField x, y, z;

    VectorField3() = default;
    explicit VectorField3(const GridSpec& g) : x(g), y(g), z(g) {}

    const GridSpec& grid() const { return x.grid(); }
    std::size_t size() const { return x.size(); }
    Vec3 at(std::size_t i) const { return {x[i], y[i], z[i]}; }
    void set(std::size_t i, const Vec3& v) {
        x[i] = v.x;
        y[i] = v.y;
        z[i] = v.z;
    }
    ScalarField& comp(int c) { return c == 0 ? x : (c == 1 ? y : z); }
    const ScalarField& comp(int c) const { return c == 0 ? x : (c == 1 ? y : z); }
};

/// S^2-valued map together with its base point Q (the value at infinity,
/// realized on the torus as the value away from the central bump).
struct SphereField {
    VectorField3 phi;
    Vec3 Q{0, 0, 1};

    SphereField() = default;
    explicit SphereField(const GridSpec& g, Vec3 q = {0, 0, 1}) : phi(g), Q(q) {
        for (std::size_t i = 0; i < phi.size(); ++i) phi.set(i, q);
    }
    const GridSpec& grid() const { return phi.grid(); }
    std::size_t size() const { return phi.size(); }

    double max_sphere_defect() const {
        double m = 0;
        for (std::size_t i = 0; i < size(); ++i)
            m = std::max(m, std::abs(phi.at(i).norm() - 1.0));
        return m;
    }
    void renormalize() {
        for (std::size_t i = 0; i < size(); ++i) phi.set(i, phi.at(i).normalized());
    }
};

inline double linf(const ScalarField& f) {
    double m = 0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
}
inline double linf(const ComplexField& f) {
    double m = 0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
}
inline double linf(const VectorField3& f) {
    double m = 0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, f.at(i).norm());
    return m;
}
inline double l2(const ScalarField& f) {
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += sq(f[i]);
    return std::sqrt(s * f.grid().cell_volume());
}
inline double l2(const ComplexField& f) {
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]);
    return std::sqrt(s * f.grid().cell_volume());
}
inline double l2(const VectorField3& f) {
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f.at(i).dot(f.at(i));
    return std::sqrt(s * f.grid().cell_volume());
}

}  // namespace smlab
