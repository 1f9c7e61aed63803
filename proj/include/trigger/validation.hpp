#pragma once

#include <trigger/config.hpp>
#include <trigger/montecarlo.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace trigger {

//! One analytic-versus-simulation line item.
struct ValidationLine {
    std::string item;
    double analytic = 0.0;
    MCEstimate mc;
    double tolerance_se = 0.0; //!< standard error the deviation is measured in
    double z = 0.0;
    bool passed = false;
};

inline constexpr double kAgreementSigmas = 3.0;

/*! Compares an analytic value with a Monte Carlo estimate at 3 standard errors.

    `null_se` is the standard error implied by the analytic value itself (for
    an indicator mean, scale * sqrt(p (1 - p) / paths)). The larger of it and
    the sample standard error is used, which keeps rare events (no hits, zero
    sample variance) from failing on a degenerate error estimate.
*/
ValidationLine compare(std::string item, double analytic, const MCEstimate& mc,
                       std::optional<double> null_se = std::nullopt);

//! Null standard error of a (scaled) indicator mean with success probability p.
inline double indicator_se(double p, std::size_t paths, double scale = 1.0) {
    return scale * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(paths));
}

struct NamedEstimate {
    std::string item;
    MCEstimate mc;
};

//! Monte Carlo estimates of every quantity the config's sections define.
std::vector<NamedEstimate> simulate_estimates(const RunConfig& config);

//! All analytic-versus-MC checks implied by the sections present in the config.
std::vector<ValidationLine> validate(const RunConfig& config);

} // namespace trigger
