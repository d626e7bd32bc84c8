#include "smlab/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace smlab {

namespace {

struct PlanKey {
    int d, n, sign;
    bool operator<(const PlanKey& o) const {
        return std::tie(d, n, sign) < std::tie(o.d, o.n, o.sign);
    }
};

// One in-place plan per (d, n, direction). Planning is serialized; execution
// uses the new-array interface on per-call fftw buffers, which is thread-safe.
// FFTW_ESTIMATE keeps plans deterministic across runs.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    fftw_plan get(int d, int n, int sign) {
        std::lock_guard<std::mutex> lk(mu_);
        PlanKey key{d, n, sign};
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::size_t total = 1;
        for (int m = 0; m < d; ++m) total *= n;
        fftw_complex* buf = fftw_alloc_complex(total);
        fftw_plan p;
        if (d == 2)
            p = fftw_plan_dft_2d(n, n, buf, buf, sign, FFTW_ESTIMATE);
        else
            p = fftw_plan_dft_3d(n, n, n, buf, buf, sign, FFTW_ESTIMATE);
        fftw_free(buf);
        plans_[key] = p;
        return p;
    }

  private:
    std::mutex mu_;
    std::map<PlanKey, fftw_plan> plans_;
};

ComplexField run(const ComplexField& f, int sign, double scale) {
    const GridSpec& g = f.grid();
    fftw_plan p = PlanCache::instance().get(g.d, g.n, sign);
    std::size_t total = f.size();
    fftw_complex* buf = fftw_alloc_complex(total);
    std::memcpy(buf, f.data(), total * sizeof(fftw_complex));
    fftw_execute_dft(p, buf, buf);
    ComplexField out(g);
    cplx* o = out.data();
    for (std::size_t i = 0; i < total; ++i)
        o[i] = cplx(buf[i][0] * scale, buf[i][1] * scale);
    fftw_free(buf);
    return out;
}

}  // namespace

ComplexField fft_forward(const ComplexField& f) {
    return run(f, FFTW_FORWARD, 1.0 / static_cast<double>(f.size()));
}

ComplexField fft_inverse(const ComplexField& F) {
    return run(F, FFTW_BACKWARD, 1.0);
}

void for_each_mode(const GridSpec& g,
                   const std::function<void(std::size_t, const double*)>& cb) {
    double xi[3] = {0, 0, 0};
    if (g.d == 2) {
        std::size_t idx = 0;
        for (int i0 = 0; i0 < g.n; ++i0) {
            xi[0] = g.xi(i0);
            for (int i1 = 0; i1 < g.n; ++i1, ++idx) {
                xi[1] = g.xi(i1);
                cb(idx, xi);
            }
        }
    } else {
        std::size_t idx = 0;
        for (int i0 = 0; i0 < g.n; ++i0) {
            xi[0] = g.xi(i0);
            for (int i1 = 0; i1 < g.n; ++i1) {
                xi[1] = g.xi(i1);
                for (int i2 = 0; i2 < g.n; ++i2, ++idx) {
                    xi[2] = g.xi(i2);
                    cb(idx, xi);
                }
            }
        }
    }
}

ComplexField apply_multiplier(const ComplexField& f,
                              const std::function<cplx(const double*)>& m) {
    ComplexField F = fft_forward(f);
    for_each_mode(f.grid(), [&](std::size_t i, const double* xi) { F[i] *= m(xi); });
    return fft_inverse(F);
}

void fft_line(cplx* base, int n, std::size_t stride, int sign, bool normalize) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, fftw_plan> plans;
    fftw_plan p;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto key = std::make_pair(n, sign);
        auto it = plans.find(key);
        if (it == plans.end()) {
            fftw_complex* buf = fftw_alloc_complex(n);
            p = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE);
            fftw_free(buf);
            plans[key] = p;
        } else {
            p = it->second;
        }
    }
    static thread_local std::vector<cplx> buf;
    buf.resize(n);
    for (int j = 0; j < n; ++j) buf[j] = base[j * stride];
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(buf.data()));
    double scale = normalize ? 1.0 / n : 1.0;
    for (int j = 0; j < n; ++j) base[j * stride] = buf[j] * scale;
}

double l2_fourier(const ComplexField& f) {
    ComplexField F = fft_forward(f);
    double s = 0;
    for (std::size_t i = 0; i < F.size(); ++i) s += std::norm(F[i]);
    double vol = 1;
    for (int m = 0; m < f.grid().d; ++m) vol *= f.grid().box_length;
    return std::sqrt(s * vol);
}

}  // namespace smlab
