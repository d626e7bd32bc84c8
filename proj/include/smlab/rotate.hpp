#pragma once

#include <vector>

#include "smlab/grid.hpp"

namespace smlab {

// Resamples f onto coordinates in which the unit vector e is the first axis:
// the result g satisfies g(y) = f(R y) with R e_1 = e. Quarter turns and axis
// permutations are exact grid permutations; residual in-plane angles are
// realized by the three-shear decomposition of a rotation, each shear a
// per-line Fourier phase shift (unitary, exact for band-limited content).
ComplexField rotate_to_axis(const ComplexField& f, const Vec3& e);

// d = 2 only: pullback g(y) = f(R_theta y) for an arbitrary angle.
ComplexField rotate_by_angle(const ComplexField& f, double theta);

/// Evaluation directions for the sup over e in S^{d-1}. For d = 2, `count`
/// equally spaced angles; for d = 3 the axes and face diagonals.
struct DirectionSet {
    std::vector<Vec3> dirs;
    static DirectionSet make(int d, int count);
};

// Index of the (positive or negative) coordinate axis e is aligned with, or
// -1 if it is not axis-aligned.
int axis_of(const Vec3& e, int d);

}  // namespace smlab
