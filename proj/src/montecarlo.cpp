#include <trigger/errors.hpp>
#include <trigger/montecarlo.hpp>
#include <trigger/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace trigger {

namespace {

constexpr std::size_t kBlockSize = 2048;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        count += 1.0;
        const double delta = x - mean;
        mean += delta / count;
        m2 += delta * (x - mean);
    }

    void merge(const Moments& other) {
        if (other.count == 0.0)
            return;
        const double total = count + other.count;
        const double delta = other.mean - mean;
        mean += delta * other.count / total;
        m2 += other.m2 + delta * delta * count * other.count / total;
        count = total;
    }
};

} // namespace

void MCConfig::validate() const {
    if (paths < 1)
        throw ValidationError("mc", "paths", "at least one path is required");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw ValidationError("mc", "horizon", "horizon must be positive");
    if (workers < 1)
        throw ValidationError("mc", "workers", "at least one worker is required");
}

std::vector<MCEstimate> estimate(const MCConfig& config, std::size_t dimension, const PathStatistic& statistic) {
    config.validate();
    const std::size_t blocks = (config.paths + kBlockSize - 1) / kBlockSize;
    std::vector<std::vector<Moments>> partial(blocks, std::vector<Moments>(dimension));

    parallel_for(blocks, config.workers, [&](std::size_t block) {
        std::vector<double> values(dimension);
        const std::size_t begin = block * kBlockSize;
        const std::size_t end = std::min(config.paths, begin + kBlockSize);
        auto& moments = partial[block];
        for (std::size_t path = begin; path < end; ++path) {
            RandomStream rng(config.seed, path);
            std::fill(values.begin(), values.end(), 0.0);
            statistic(rng, values);
            for (std::size_t d = 0; d < dimension; ++d)
                moments[d].add(values[d]);
        }
    });

    std::vector<MCEstimate> out(dimension);
    for (std::size_t d = 0; d < dimension; ++d) {
        Moments total;
        for (const auto& block : partial)
            total.merge(block[d]);
        const double n = total.count;
        const double variance = n > 1.0 ? total.m2 / (n - 1.0) : 0.0;
        out[d] = {total.mean, std::sqrt(std::max(variance, 0.0) / n), config.paths, config.seed};
    }
    return out;
}

MCEstimate estimate(const MCConfig& config, const std::function<double(RandomStream&)>& statistic) {
    return estimate(config, 1, [&](RandomStream& rng, std::span<double> out) { out[0] = statistic(rng); })
        .front();
}

SingleNameSample simulate_single(const ChainSpec& chain, const HazardSpec& hazard, std::size_t initial_state,
                                 double horizon, RandomStream& rng) {
    if (hazard.size() != chain.size())
        throw ValidationError("hazard", "lambda", "dimension does not match the chain");
    SingleNameSample sample{sample_path(chain, initial_state, horizon, rng), std::nullopt};

    double start = 0.0;
    for (const auto& segment : sample.path.segments) {
        const auto s = static_cast<Eigen::Index>(segment.state);
        const double rate = hazard.intensity()[s];
        const double fatality = hazard.fatality()[s];
        const double end = start + segment.duration;
        double t = start;
        while (true) {
            t += rng.exponential(rate);
            if (t >= end)
                break;
            if (rng.uniform() < fatality) {
                sample.default_time = t;
                return sample;
            }
        }
        start = end;
    }
    return sample;
}

TwoFirmSample simulate_two_firm(const TwoFirmParams& params, RandomStream& rng) {
    const double p = params.fatality();
    const double first = rng.exponential(p * (params.a1() + params.b1()));
    const bool a_first = rng.uniform() * (params.a1() + params.b1()) < params.a1();
    if (a_first)
        return {first, first + rng.exponential(p * (params.b1() + params.b2()))};
    return {first + rng.exponential(p * (params.a1() + params.a2())), first};
}

std::vector<double> simulate_basket(const BasketContract& contract, double horizon, RandomStream& rng) {
    const std::size_t n = contract.names();
    const double b = contract.contagion();
    const Vector y = y_vector(contract.chain(), contract.shape());
    const ChainPath path = sample_path(contract.chain(), contract.initial_state(), horizon, rng);

    std::vector<double> times(n, kInfinity);
    std::size_t defaults = 0;
    double target = rng.exponential(1.0);
    double start = 0.0;
    for (const auto& segment : path.segments) {
        const double ys = y[static_cast<Eigen::Index>(segment.state)];
        const double end = start + segment.duration;
        double t = start;
        while (defaults < n) {
            const double m = static_cast<double>(defaults);
            const double rate = static_cast<double>(n - defaults) * (1.0 + b * m) * ys;
            if (rate <= 0.0 || t + target / rate >= end) {
                if (rate > 0.0)
                    target -= rate * (end - t);
                break;
            }
            t += target / rate;
            times[defaults++] = t;
            target = rng.exponential(1.0);
        }
        if (defaults == n)
            break;
        start = end;
    }
    return times;
}

std::vector<double> simulate_basket_per_name(const BasketContract& contract, double horizon, RandomStream& rng) {
    const std::size_t n = contract.names();
    const double b = contract.contagion();
    const double c = contract.shape();
    const ChainPath path = sample_path(contract.chain(), contract.initial_state(), horizon, rng);

    std::vector<double> times(n, kInfinity);
    std::size_t defaults = 0;
    double start = 0.0;
    for (const auto& segment : path.segments) {
        const double x = contract.chain().value(segment.state);
        const double fatality = -std::expm1(-c * x);
        const double end = start + segment.duration;
        double t = start;
        while (defaults < n) {
            // Every surviving name sees the same number of defaulted others.
            const double rate = x * (1.0 + b * static_cast<double>(defaults));
            double next = kInfinity;
            std::size_t who = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (times[i] != kInfinity)
                    continue;
                const double candidate = t + rng.exponential(rate);
                if (candidate < next) {
                    next = candidate;
                    who = i;
                }
            }
            if (next >= end)
                break;
            t = next;
            if (rng.uniform() < fatality) {
                times[who] = t;
                ++defaults;
            }
        }
        if (defaults == n)
            break;
        start = end;
    }
    return times;
}

ClaimPayoffs claim_payoffs(const SingleNameSample& sample, const ClaimSpec& claim, double maturity) {
    if (sample.path.horizon < maturity)
        throw std::invalid_argument("claim_payoffs: path does not cover the maturity");
    const double stop = sample.default_time ? std::min(*sample.default_time, maturity) : maturity;

    ClaimPayoffs out{0.0, 0.0, 0.0};
    double log_discount = 0.0; // -int_0^start r
    double start = 0.0;
    std::size_t state = sample.path.initial_state;
    for (const auto& segment : sample.path.segments) {
        state = segment.state;
        const auto s = static_cast<Eigen::Index>(state);
        const double end = std::min(start + segment.duration, stop);
        const double width = end - start;
        if (width > 0.0) {
            const double r = claim.rate[s];
            const double annuity = r > 0.0 ? -std::expm1(-r * width) / r : width;
            out.stream += claim.stream[s] * std::exp(log_discount) * annuity;
            log_discount -= r * width;
        }
        if (start + segment.duration >= stop)
            break;
        start += segment.duration;
    }
    const auto s = static_cast<Eigen::Index>(state);
    if (sample.default_time && *sample.default_time <= maturity)
        out.recovery = std::exp(log_discount) * claim.recovery[s];
    else
        out.terminal = std::exp(log_discount) * claim.terminal[s];
    return out;
}

double martingale_statistic(const SingleNameSample& sample, const HazardSpec& hazard, double t) {
    if (t > sample.path.horizon)
        throw std::invalid_argument("martingale_statistic: t exceeds the path horizon");
    const bool defaulted = sample.default_time && *sample.default_time <= t;
    const double stop = defaulted ? *sample.default_time : t;
    const Vector rate = hazard.fatal_rate();
    double compensator = 0.0;
    double start = 0.0;
    for (const auto& segment : sample.path.segments) {
        const double end = std::min(start + segment.duration, stop);
        if (end > start)
            compensator += rate[static_cast<Eigen::Index>(segment.state)] * (end - start);
        if (start + segment.duration >= stop)
            break;
        start += segment.duration;
    }
    return (defaulted ? 1.0 : 0.0) - compensator;
}

MCEstimate martingale_residual(const ChainSpec& chain, const HazardSpec& hazard, std::size_t initial_state,
                               double t, const MCConfig& config) {
    if (!(t > 0.0 && t <= config.horizon))
        throw std::invalid_argument("martingale_residual: t must lie in (0, horizon]");
    return estimate(config, [&](RandomStream& rng) {
        const auto sample = simulate_single(chain, hazard, initial_state, config.horizon, rng);
        return martingale_statistic(sample, hazard, t);
    });
}

} // namespace trigger
