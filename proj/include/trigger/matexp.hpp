#pragma once

#include <trigger/chain.hpp>

namespace trigger {

//! Largest dimension accepted by the dense kernels.
inline constexpr Eigen::Index kMaxDenseDimension = 64;

/*! Matrix exponential e^{At}.

    Scaling and squaring with a degree-13 Pade approximant; the scaling power
    is chosen from the 1-norm of At. expm(A, 0) is the identity exactly.
    Throws NumericRangeError when the result overflows.
*/
Matrix expm(const Matrix& a, double t);

//! e^{At} w.
Vector exp_action(const Matrix& a, const Vector& w, double t);

/*! Integral of e^{Bs} y over s in [0, T].

    Evaluated as the last column of the exponential of the augmented matrix
    [[B, y], [0, 0]] T, so B may be singular.
*/
Vector integral_action(const Matrix& b, const Vector& y, double horizon);

} // namespace trigger
