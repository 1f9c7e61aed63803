#include <trigger/errors.hpp>
#include <trigger/matexp.hpp>
#include <trigger/occupation.hpp>
#include <trigger/single_name.hpp>

#include <algorithm>
#include <cmath>

namespace trigger {

HazardSpec::HazardSpec(Vector intensity, Vector fatality)
    : intensity_(std::move(intensity)), fatality_(std::move(fatality)) {
    if (fatality_.size() != intensity_.size())
        throw ValidationError("hazard", "p", "expected " + std::to_string(intensity_.size()) + " entries, got " +
                                                 std::to_string(fatality_.size()));
    for (Eigen::Index j = 0; j < intensity_.size(); ++j) {
        if (!(intensity_[j] >= 0.0) || !std::isfinite(intensity_[j]))
            throw ValidationError("hazard", "lambda", "intensity of state " + std::to_string(j + 1) +
                                                          " must be finite and non-negative");
        if (!(fatality_[j] >= 0.0 && fatality_[j] <= 1.0))
            throw ValidationError("hazard", "p", "fatality probability of state " + std::to_string(j + 1) +
                                                     " must lie in [0, 1]");
    }
}

HazardSpec HazardSpec::from_shape(const ChainSpec& chain, double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape))
        throw ValidationError("hazard", "c", "shape parameter must be positive");
    const Vector& x = chain.values();
    Vector p(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j)
        p[j] = -std::expm1(-shape * x[j]);
    return HazardSpec(x, p);
}

void ClaimSpec::validate(std::size_t states) const {
    const auto check = [states](const Vector& v, const char* key) {
        if (static_cast<std::size_t>(v.size()) != states)
            throw ValidationError("claim", key, "expected " + std::to_string(states) + " entries, got " +
                                                    std::to_string(v.size()));
        if (!v.allFinite())
            throw ValidationError("claim", key, "entries must be finite");
    };
    check(rate, "r");
    check(terminal, "terminal");
    check(stream, "stream");
    check(recovery, "recovery");
    if ((rate.array() < 0.0).any())
        throw ValidationError("claim", "r", "short rates must be non-negative");
}

namespace {

void check_inputs(const ChainSpec& chain, const HazardSpec& hazard, std::size_t initial_state, double t) {
    if (hazard.size() != chain.size())
        throw ValidationError("hazard", "lambda", "expected " + std::to_string(chain.size()) + " entries, got " +
                                                      std::to_string(hazard.size()));
    if (initial_state >= chain.size())
        throw ValidationError("chain", "initial", "initial state out of range");
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("time must be finite and non-negative");
}

} // namespace

double survival(const ChainSpec& chain, const HazardSpec& hazard, std::size_t initial_state, double s) {
    check_inputs(chain, hazard, initial_state, s);
    const Vector psi = mgf(chain, -hazard.fatal_rate(), s);
    return std::clamp(psi[static_cast<Eigen::Index>(initial_state)], 0.0, 1.0);
}

double path_survival(const ChainPath& path, const HazardSpec& hazard, double s1, double s2) {
    if (!(s1 >= 0.0 && s1 <= s2 && s2 <= path.horizon))
        throw std::invalid_argument("path_survival: interval must satisfy 0 <= s1 <= s2 <= horizon");
    const Vector rate = hazard.fatal_rate();
    double integral = 0.0;
    double start = 0.0;
    for (const auto& segment : path.segments) {
        const double end = start + segment.duration;
        const double overlap = std::min(end, s2) - std::max(start, s1);
        if (overlap > 0.0)
            integral += rate[static_cast<Eigen::Index>(segment.state)] * overlap;
        if (end >= s2)
            break;
        start = end;
    }
    return std::exp(-integral);
}

Matrix killed_generator(const ChainSpec& chain, const HazardSpec& hazard, const Vector& rate) {
    Matrix b = generator(chain);
    b.diagonal() -= rate + hazard.fatal_rate();
    return b;
}

double price_terminal(const ChainSpec& chain, const HazardSpec& hazard, const ClaimSpec& claim,
                      std::size_t initial_state, double maturity) {
    check_inputs(chain, hazard, initial_state, maturity);
    claim.validate(chain.size());
    const Matrix b = killed_generator(chain, hazard, claim.rate);
    return exp_action(b, claim.terminal, maturity)[static_cast<Eigen::Index>(initial_state)];
}

double price_stream(const ChainSpec& chain, const HazardSpec& hazard, const ClaimSpec& claim,
                    std::size_t initial_state, double maturity) {
    check_inputs(chain, hazard, initial_state, maturity);
    claim.validate(chain.size());
    const Matrix b = killed_generator(chain, hazard, claim.rate);
    return integral_action(b, claim.stream, maturity)[static_cast<Eigen::Index>(initial_state)];
}

double price_recovery(const ChainSpec& chain, const HazardSpec& hazard, const ClaimSpec& claim,
                      std::size_t initial_state, double maturity) {
    check_inputs(chain, hazard, initial_state, maturity);
    claim.validate(chain.size());
    const Matrix b = killed_generator(chain, hazard, claim.rate);
    const Vector w = claim.recovery.cwiseProduct(hazard.fatal_rate());
    return integral_action(b, w, maturity)[static_cast<Eigen::Index>(initial_state)];
}

} // namespace trigger
