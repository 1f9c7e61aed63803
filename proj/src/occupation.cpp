#include <trigger/errors.hpp>
#include <trigger/matexp.hpp>
#include <trigger/occupation.hpp>

#include <algorithm>
#include <cmath>

namespace trigger {

Matrix build_A(const ChainSpec& spec, const Vector& u) {
    if (static_cast<std::size_t>(u.size()) != spec.size())
        throw ValidationError("query", "u", "expected " + std::to_string(spec.size()) + " weights, got " +
                                                std::to_string(u.size()));
    Matrix a = generator(spec);
    a.diagonal() += u;
    return a;
}

namespace {

Vector mgf_runge_kutta(const Matrix& a, double t) {
    const double norm = std::max(a.cwiseAbs().colwise().sum().maxCoeff(), 1e-12);
    const double steps_needed = std::ceil(t * norm / 0.01);
    const auto steps = static_cast<long>(std::clamp(steps_needed, 200.0, 1e6));
    const double h = t / static_cast<double>(steps);

    Vector psi = Vector::Ones(a.rows());
    for (long s = 0; s < steps; ++s) {
        const Vector k1 = a * psi;
        const Vector k2 = a * (psi + 0.5 * h * k1);
        const Vector k3 = a * (psi + 0.5 * h * k2);
        const Vector k4 = a * (psi + h * k3);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return psi;
}

} // namespace

Vector mgf(const ChainSpec& spec, const Vector& u, double t, MgfMethod method) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw ValidationError("query", "t", "time must be finite and non-negative");
    const Matrix a = build_A(spec, u);
    const Vector ones = Vector::Ones(a.rows());
    if (t == 0.0)
        return ones;

    Vector psi = method == MgfMethod::MatrixExponential ? exp_action(a, ones, t) : mgf_runge_kutta(a, t);
    if (!psi.allFinite())
        throw NumericRangeError("mgf: occupation-time MGF overflows double precision");
    return psi;
}

} // namespace trigger
