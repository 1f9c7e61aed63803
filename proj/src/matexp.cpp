#include <trigger/errors.hpp>
#include <trigger/matexp.hpp>

#include <array>
#include <cmath>
#include <stdexcept>

namespace trigger {

namespace {

// Pade(13) coefficients and the 1-norm bound below which no scaling is needed
// (Higham, SIAM J. Matrix Anal. Appl. 26(4), 2005).
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

void check_square(const Matrix& a, Eigen::Index max_dim, const char* who) {
    if (a.rows() != a.cols())
        throw std::invalid_argument(std::string(who) + ": matrix is not square");
    if (a.rows() > max_dim)
        throw std::invalid_argument(std::string(who) + ": dimension exceeds " + std::to_string(max_dim));
    if (!a.allFinite())
        throw NumericRangeError(std::string(who) + ": matrix has non-finite entries");
}

void check_time(double t, const char* who) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument(std::string(who) + ": time must be finite and non-negative");
}

Matrix pade13_expm(const Matrix& at) {
    const Eigen::Index d = at.rows();
    const Matrix identity = Matrix::Identity(d, d);

    const double norm = at.cwiseAbs().colwise().sum().maxCoeff();
    if (norm == 0.0)
        return identity;
    int squarings = 0;
    if (norm > kTheta13)
        squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    if (squarings > 1000)
        throw NumericRangeError("expm: argument norm too large");

    const Matrix a = at * std::ldexp(1.0, -squarings);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const auto& b = kPade13;

    const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
                           b[1] * identity;
    const Matrix u = a * u_inner;
    const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
                     b[0] * identity;

    Matrix r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i)
        r = r * r;
    return r;
}

Matrix expm_unchecked(const Matrix& a, double t) {
    if (t == 0.0)
        return Matrix::Identity(a.rows(), a.cols());
    Matrix result = pade13_expm(a * t);
    if (!result.allFinite())
        throw NumericRangeError("expm: result overflows double precision");
    return result;
}

} // namespace

Matrix expm(const Matrix& a, double t) {
    check_square(a, kMaxDenseDimension, "expm");
    check_time(t, "expm");
    return expm_unchecked(a, t);
}

Vector exp_action(const Matrix& a, const Vector& w, double t) {
    check_square(a, kMaxDenseDimension, "exp_action");
    check_time(t, "exp_action");
    if (w.size() != a.rows())
        throw std::invalid_argument("exp_action: vector dimension does not match matrix");
    if (t == 0.0)
        return w;
    return expm_unchecked(a, t) * w;
}

Vector integral_action(const Matrix& b, const Vector& y, double horizon) {
    check_square(b, kMaxDenseDimension, "integral_action");
    check_time(horizon, "integral_action");
    if (y.size() != b.rows())
        throw std::invalid_argument("integral_action: vector dimension does not match matrix");
    const Eigen::Index d = b.rows();
    if (horizon == 0.0)
        return Vector::Zero(d);
    if (!y.allFinite())
        throw NumericRangeError("integral_action: vector has non-finite entries");

    Matrix augmented = Matrix::Zero(d + 1, d + 1);
    augmented.topLeftCorner(d, d) = b;
    augmented.topRightCorner(d, 1) = y;
    const Matrix e = expm_unchecked(augmented, horizon);
    return e.topRightCorner(d, 1);
}

} // namespace trigger
