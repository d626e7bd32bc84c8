#pragma once

#include <functional>

#include "smlab/grid.hpp"

namespace smlab {

// Forward transform returns spectral coefficients F with the convention
//   f(x) = sum_xi F[xi] e^{i xi . x},
// i.e. the DFT divided by the number of points. fft_inverse undoes it.
ComplexField fft_forward(const ComplexField& f);
ComplexField fft_inverse(const ComplexField& F);

// Loops over spectral entries; cb receives the flat index and the
// wavevector (xi[0..d-1]).
void for_each_mode(const GridSpec& g, const std::function<void(std::size_t, const double*)>& cb);

// Applies a Fourier multiplier m(xi) to f (physical space in, physical out).
ComplexField apply_multiplier(const ComplexField& f,
                              const std::function<cplx(const double*)>& m);

// Parseval-consistent L2 norm computed on the Fourier side.
double l2_fourier(const ComplexField& f);

// In-place 1D transform of a strided line; sign is FFTW_FORWARD (-1) or
// FFTW_BACKWARD (+1). normalize divides by n (pair a normalized forward with
// an unnormalized backward to round-trip).
void fft_line(cplx* base, int n, std::size_t stride, int sign, bool normalize);

}  // namespace smlab
