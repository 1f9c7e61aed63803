#pragma once

#include <trigger/basket.hpp>
#include <trigger/chain.hpp>
#include <trigger/random.hpp>
#include <trigger/single_name.hpp>
#include <trigger/two_firm.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace trigger {

struct MCConfig {
    std::size_t paths = 100000;
    std::uint64_t seed = 20240601;
    double horizon = 5.0;
    //! Thread count; results never depend on it.
    unsigned workers = 1;

    void validate() const;
};

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0; //!< sample standard deviation / sqrt(paths)
    std::size_t paths = 0;
    std::uint64_t seed = 0;
};

//! Fills one value per output slot from a single replication.
using PathStatistic = std::function<void(RandomStream&, std::span<double>)>;

/*! Mean and standard error of a vector statistic over config.paths replications.

    Replication i draws from RandomStream(config.seed, i). Partial sums are
    formed over fixed blocks of path indices and merged in index order, so the
    result is bit-identical for any worker count.
*/
std::vector<MCEstimate> estimate(const MCConfig& config, std::size_t dimension, const PathStatistic& statistic);

MCEstimate estimate(const MCConfig& config, const std::function<double(RandomStream&)>& statistic);

struct SingleNameSample {
    ChainPath path;
    std::optional<double> default_time; //!< empty when no fatal trigger before the horizon
};

/*! Exact single-name default time.

    Samples the chain, then runs the trigger process segment by segment with
    rate lambda(state); each trigger kills with probability p(state).
*/
SingleNameSample simulate_single(const ChainSpec& chain, const HazardSpec& hazard, std::size_t initial_state,
                                 double horizon, RandomStream& rng);

struct TwoFirmSample {
    double tau_a; //!< +inf if firm A never defaults
    double tau_b;
};

TwoFirmSample simulate_two_firm(const TwoFirmParams& params, RandomStream& rng);

/*! Ordered default times tau_1 <= ... <= tau_n of a basket, +inf past the horizon.

    Uses the aggregate rate (n - m)(1 + b m) y(state) after m defaults, inverted
    against a unit exponential segment by segment.
*/
std::vector<double> simulate_basket(const BasketContract& contract, double horizon, RandomStream& rng);

/*! Name-indexed default times from n separate trigger processes.

    Distributionally equal to simulate_basket after sorting; kept as an
    independent route for cross-checks.
*/
std::vector<double> simulate_basket_per_name(const BasketContract& contract, double horizon, RandomStream& rng);

struct ClaimPayoffs {
    double terminal; //!< exp(-int_0^T r) X(X_T) 1{tau > T}
    double stream;   //!< int_0^{T ^ tau} Y exp(-int r) ds
    double recovery; //!< exp(-int_0^tau r) Z(X_tau) 1{tau <= T}
};

//! Discounted building-block payoffs along one sample; the path must cover [0, maturity].
ClaimPayoffs claim_payoffs(const SingleNameSample& sample, const ClaimSpec& claim, double maturity);

//! 1{tau <= t} - int_0^{t ^ tau} p lambda du along one sample.
double martingale_statistic(const SingleNameSample& sample, const HazardSpec& hazard, double t);

MCEstimate martingale_residual(const ChainSpec& chain, const HazardSpec& hazard, std::size_t initial_state,
                               double t, const MCConfig& config);

} // namespace trigger
