#include <trigger/errors.hpp>
#include <trigger/two_firm.hpp>

#include <cmath>
#include <stdexcept>

namespace trigger {

namespace {

constexpr double kDegenerateGap = 1e-9;

void require_non_negative(double value, const char* key) {
    if (!(value >= 0.0) || !std::isfinite(value))
        throw ValidationError("two_firm", key, "must be finite and non-negative");
}

void check_time(double t) {
    if (!(t >= 0.0))
        throw std::invalid_argument("two_firm: time must be non-negative");
}

// (exp(-p k t) - exp(-p s t)) / (s - k) with k = a1 + a2 and s = a1 + b1, so
// s - k = b1 - a2. Tends to p t exp(-p s t) as the gap closes.
double exponential_difference(double p, double k, double s, double t) {
    const double gap = s - k;
    if (std::abs(gap) < kDegenerateGap)
        return p * t * std::exp(-p * s * t);
    if (gap > 0.0)
        return -std::exp(-p * k * t) * std::expm1(-p * gap * t) / gap;
    return std::exp(-p * s * t) * std::expm1(p * gap * t) / gap;
}

// Formulas are written for firm A; firm B evaluates the mirrored model.
const TwoFirmParams& as_firm_a(const TwoFirmParams& params, Firm firm, TwoFirmParams& storage) {
    if (firm == Firm::A)
        return params;
    storage = params.mirrored();
    return storage;
}

} // namespace

TwoFirmParams::TwoFirmParams(double a1, double a2, double b1, double b2, double fatality, double rate,
                             double maturity)
    : a1_(a1), a2_(a2), b1_(b1), b2_(b2), p_(fatality), r_(rate), maturity_(maturity) {
    require_non_negative(a1, "a1");
    require_non_negative(a2, "a2");
    require_non_negative(b1, "b1");
    require_non_negative(b2, "b2");
    if (!(a1 + b1 > 0.0))
        throw ValidationError("two_firm", "a1", "a1 + b1 must be positive");
    if (!(fatality > 0.0 && fatality <= 1.0))
        throw ValidationError("two_firm", "p", "fatality probability must lie in (0, 1]");
    if (!std::isfinite(rate))
        throw ValidationError("two_firm", "r", "must be finite");
    require_non_negative(maturity, "T");
}

TwoFirmParams TwoFirmParams::mirrored() const { return {b1_, b2_, a1_, a2_, p_, r_, maturity_}; }

double first_default_survival(const TwoFirmParams& params, double t) {
    check_time(t);
    return std::exp(-params.fatality() * (params.a1() + params.b1()) * t);
}

double survival_defaulting_first(const TwoFirmParams& params, Firm firm, double t) {
    TwoFirmParams storage = params;
    const auto& m = as_firm_a(params, firm, storage);
    return m.a1() / (m.a1() + m.b1()) * first_default_survival(m, t);
}

double marginal_density(const TwoFirmParams& params, Firm firm, double t) {
    check_time(t);
    TwoFirmParams storage = params;
    const auto& m = as_firm_a(params, firm, storage);
    const double p = m.fatality();
    const double after = m.a1() + m.a2();
    const double before = m.a1() + m.b1();
    // A defaults second: B first at rate p b1, then A at rate p (a1 + a2).
    const double second = m.b1() * after * p * exponential_difference(p, after, before, t);
    const double first = m.a1() * p * std::exp(-p * before * t);
    return second + first;
}

double marginal_survival(const TwoFirmParams& params, Firm firm, double t) {
    check_time(t);
    TwoFirmParams storage = params;
    const auto& m = as_firm_a(params, firm, storage);
    const double p = m.fatality();
    const double after = m.a1() + m.a2();
    const double before = m.a1() + m.b1();
    // Tail integral of the density: exp(-p s t) + b1 (e^{-p k t} - e^{-p s t}) / (s - k).
    return std::exp(-p * before * t) + m.b1() * exponential_difference(p, after, before, t);
}

double bond_price(const TwoFirmParams& params, Firm firm) {
    return std::exp(-params.rate() * params.maturity()) * marginal_survival(params, firm, params.maturity());
}

} // namespace trigger
