#include "smlab/rotate.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace smlab {

namespace {

// cached 1D in-place plans for the per-line shifts
class Plan1D {
  public:
    static fftw_plan get(int n, int sign) {
        static std::mutex mu;
        static std::map<std::pair<int, int>, fftw_plan> plans;
        std::lock_guard<std::mutex> lk(mu);
        auto key = std::make_pair(n, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        fftw_complex* buf = fftw_alloc_complex(n);
        fftw_plan p = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE);
        fftw_free(buf);
        plans[key] = p;
        return p;
    }
};

// 1D spectral shift of a strided line: line[j] <- line at position x_j + delta
void shift_line(cplx* base, int n, std::size_t stride, double delta, double L) {
    static thread_local std::vector<cplx> buf;
    buf.resize(n);
    for (int j = 0; j < n; ++j) buf[j] = base[j * stride];
    fftw_plan fwd = Plan1D::get(n, FFTW_FORWARD);
    fftw_plan bwd = Plan1D::get(n, FFTW_BACKWARD);
    fftw_execute_dft(fwd, reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(buf.data()));
    for (int j = 0; j < n; ++j) {
        int m = j <= n / 2 ? j : j - n;
        double xi = 2.0 * M_PI / L * m;
        buf[j] *= std::exp(cplx(0.0, xi * delta)) / static_cast<double>(n);
    }
    fftw_execute_dft(bwd, reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(buf.data()));
    for (int j = 0; j < n; ++j) base[j * stride] = buf[j];
}

// pullback by Shear_0(a): g(x0, x1) = f(x0 + a x1, x1) on the plane (ax0, ax1)
// of a d-dimensional field
void shear(ComplexField& f, int ax0, int ax1, double a) {
    const GridSpec& g = f.grid();
    const int n = g.n;
    const double h = g.h(), L = g.box_length;
    // stride of one step along an axis (axis d-1 fastest)
    auto stride_of = [&](int ax) {
        std::size_t s = 1;
        for (int m = g.d - 1; m > ax; --m) s *= n;
        return s;
    };
    std::size_t s0 = stride_of(ax0), s1 = stride_of(ax1);

    if (g.d == 2) {
        for (int j = 0; j < n; ++j)
            shift_line(f.data() + j * s1, n, s0, a * (j * h), L);
    } else {
        int ax2 = 3 - ax0 - ax1;
        std::size_t s2 = stride_of(ax2);
        for (int k2 = 0; k2 < n; ++k2)
            for (int j = 0; j < n; ++j)
                shift_line(f.data() + k2 * s2 + j * s1, n, s0, a * (j * h), L);
    }
}

// pullback by the exact quarter-turn q times in the (0,1) plane, d = 2
ComplexField quarter_turns(const ComplexField& f, int q) {
    q = ((q % 4) + 4) % 4;
    if (q == 0) return f;
    const GridSpec& g = f.grid();
    const int n = g.n;
    ComplexField out(g);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int si, sj;  // source indices: (i,j) -> R^q (i,j)
            if (q == 1) {
                si = (n - j) % n;
                sj = i;
            } else if (q == 2) {
                si = (n - i) % n;
                sj = (n - j) % n;
            } else {
                si = j;
                sj = (n - i) % n;
            }
            out[out.index(i, j)] = f[f.index(si, sj)];
        }
    return out;
}

// in-plane rotation pullback by |theta| <= pi/4 via three shears
void rotate_small(ComplexField& f, int ax0, int ax1, double theta) {
    if (theta == 0) return;
    double a = -std::tan(theta / 2);
    double b = std::sin(theta);
    shear(f, ax0, ax1, a);
    shear(f, ax1, ax0, b);
    shear(f, ax0, ax1, a);
}

}  // namespace

ComplexField rotate_by_angle(const ComplexField& f, double theta) {
    if (f.grid().d != 2) throw ConfigError("rotate_by_angle: d = 2 only");
    // reduce to a quarter turn plus a residual angle in [-pi/4, pi/4]
    int q = static_cast<int>(std::round(theta / (M_PI / 2)));
    double rem = theta - q * (M_PI / 2);
    ComplexField out = quarter_turns(f, q);
    rotate_small(out, 0, 1, rem);
    return out;
}

int axis_of(const Vec3& e, int d) {
    const double tol = 1e-12;
    double comps[3] = {e.x, e.y, e.z};
    for (int m = 0; m < d; ++m)
        if (std::abs(std::abs(comps[m]) - 1.0) < tol) {
            bool others_zero = true;
            for (int l = 0; l < d; ++l)
                if (l != m && std::abs(comps[l]) > tol) others_zero = false;
            if (others_zero) return m;
        }
    return -1;
}

ComplexField rotate_to_axis(const ComplexField& f, const Vec3& e) {
    const GridSpec& g = f.grid();
    if (std::abs(e.norm() - 1.0) > 1e-12)
        throw ConstraintError("rotate_to_axis: e is not a unit vector");
    if (g.d == 2) {
        if (std::abs(e.z) > 1e-12)
            throw ConfigError("rotate_to_axis: e must lie in the plane for d = 2");
        double theta = std::atan2(e.y, e.x);
        return rotate_by_angle(f, theta);
    }

    // d = 3: axes and two-axis diagonals
    int ax = axis_of(e, 3);
    double comps[3] = {e.x, e.y, e.z};
    if (ax >= 0) {
        if (ax == 0 && comps[0] > 0) return f;
        // permute so that +-axis becomes axis 0 via index remap
        ComplexField out(g);
        const int n = g.n;
        bool neg = comps[ax] < 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    // target (i,j,k): y = (i,j,k); source = R y with R e1 = e
                    int c[3] = {i, j, k};
                    int src[3];
                    // rotate axes cyclically so axis `ax` takes the axis-0 slot
                    for (int m = 0; m < 3; ++m) src[(ax + m) % 3] = c[m];
                    if (neg) {
                        src[ax] = (n - src[ax]) % n;
                        // flip one transverse axis to keep orientation
                        int tr = (ax + 1) % 3;
                        src[tr] = (n - src[tr]) % n;
                    }
                    out[out.index(i, j, k)] = f[f.index(src[0], src[1], src[2])];
                }
        return out;
    }

    // face diagonal: nonzero in exactly two axes, both +-1/sqrt(2)
    int nz[2], cnt = 0;
    for (int m = 0; m < 3; ++m)
        if (std::abs(comps[m]) > 1e-12) {
            if (cnt < 2) nz[cnt] = m;
            ++cnt;
        }
    const double r2 = 1.0 / std::sqrt(2.0);
    if (cnt != 2 || std::abs(std::abs(comps[nz[0]]) - r2) > 1e-9 ||
        std::abs(std::abs(comps[nz[1]]) - r2) > 1e-9)
        throw ConfigError(
            "rotate_to_axis (d=3): direction must be an axis or a face diagonal");

    // First map the quadrant so that e looks like (+,+) in the (nz0, nz1)
    // plane by sign flips, then rotate by -pi/4 in that plane, then bring
    // nz0 to axis 0.
    ComplexField out = f;
    const int n = g.n;
    if (comps[nz[0]] < 0 || comps[nz[1]] < 0) {
        ComplexField tmp(g);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    int c[3] = {i, j, k};
                    int src[3] = {i, j, k};
                    if (comps[nz[0]] < 0) src[nz[0]] = (n - c[nz[0]]) % n;
                    if (comps[nz[1]] < 0) src[nz[1]] = (n - c[nz[1]]) % n;
                    // keep orientation: flip the remaining axis if needed
                    if ((comps[nz[0]] < 0) != (comps[nz[1]] < 0)) {
                        int rem = 3 - nz[0] - nz[1];
                        src[rem] = (n - c[rem]) % n;
                    }
                    tmp[tmp.index(i, j, k)] = out[out.index(src[0], src[1], src[2])];
                }
        out = tmp;
    }
    rotate_small(out, nz[0], nz[1], M_PI / 4);
    if (nz[0] != 0) {
        ComplexField tmp(g);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    int c[3] = {i, j, k};
                    int src[3];
                    for (int m = 0; m < 3; ++m) src[(nz[0] + m) % 3] = c[m];
                    tmp[tmp.index(i, j, k)] = out[out.index(src[0], src[1], src[2])];
                }
        out = tmp;
    }
    return out;
}

DirectionSet DirectionSet::make(int d, int count) {
    DirectionSet s;
    if (d == 2) {
        if (count < 2) throw ConfigError("DirectionSet: need >= 2 directions");
        for (int j = 0; j < count; ++j) {
            double th = 2.0 * M_PI * j / count;
            s.dirs.push_back(Vec3{std::cos(th), std::sin(th), 0});
        }
    } else {
        const double r2 = 1.0 / std::sqrt(2.0);
        s.dirs = {Vec3{1, 0, 0},    Vec3{0, 1, 0},    Vec3{0, 0, 1},
                  Vec3{r2, r2, 0},  Vec3{r2, -r2, 0}, Vec3{r2, 0, r2},
                  Vec3{r2, 0, -r2}, Vec3{0, r2, r2},  Vec3{0, r2, -r2}};
    }
    return s;
}

}  // namespace smlab
