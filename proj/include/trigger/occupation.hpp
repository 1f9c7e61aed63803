#pragma once

#include <trigger/chain.hpp>

namespace trigger {

//! Q + diag(u): the matrix whose exponential gives the occupation-time MGF.
Matrix build_A(const ChainSpec& spec, const Vector& u);

enum class MgfMethod {
    MatrixExponential, //!< closed form e^{At} 1
    RungeKutta         //!< classical RK4 on Psi' = A Psi; cross-validation only
};

/*! Joint MGF of the occupation times, one entry per initial state.

    Entry i is E[exp(u . T_i(t))], where T_i(t) holds the time spent in each
    state during [0, t] starting from state i.
*/
Vector mgf(const ChainSpec& spec, const Vector& u, double t, MgfMethod method = MgfMethod::MatrixExponential);

} // namespace trigger
