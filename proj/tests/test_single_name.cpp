#include "support/oracles.hpp"

#include <trigger/errors.hpp>
#include <trigger/matexp.hpp>
#include <trigger/montecarlo.hpp>
#include <trigger/occupation.hpp>
#include <trigger/single_name.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace trigger;
using trigger::testing::four_state_chain;
using trigger::testing::within_three_se;

namespace {

HazardSpec constant_hazard(double lambda, double p) {
    return HazardSpec(Vector::Constant(1, lambda), Vector::Constant(1, p));
}

ClaimSpec unit_claim(std::size_t m, double r) {
    const auto n = static_cast<Eigen::Index>(m);
    return {Vector::Constant(n, r), Vector::Ones(n), Vector::Ones(n), Vector::Ones(n)};
}

HazardSpec random_hazard(std::size_t m, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(m);
    Vector lambda(n), p(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        lambda[j] = 2.0 * dist(gen);
        p[j] = dist(gen);
    }
    return HazardSpec(lambda, p);
}

} // namespace

TEST(HazardSpec, Validation) {
    EXPECT_THROW(HazardSpec(Vector::Constant(2, 0.1), Vector::Constant(3, 0.5)), ValidationError);
    EXPECT_THROW(HazardSpec(Vector::Constant(1, -0.1), Vector::Constant(1, 0.5)), ValidationError);
    EXPECT_THROW(HazardSpec(Vector::Constant(1, 0.1), Vector::Constant(1, 1.5)), ValidationError);
}

TEST(HazardSpec, FromShape) {
    const auto hazard = HazardSpec::from_shape(four_state_chain(), 1.0);
    EXPECT_DOUBLE_EQ(hazard.intensity()[0], 0.1);
    EXPECT_NEAR(hazard.fatality()[0], 1.0 - std::exp(-0.1), 1e-16);
}

TEST(Survival, ZeroTimeIsOne) {
    EXPECT_EQ(survival(four_state_chain(), HazardSpec::from_shape(four_state_chain(), 1.0), 0, 0.0), 1.0);
}

TEST(Survival, ConstantCase) {
    const double s = survival(ChainSpec::constant(1.0), constant_hazard(0.5, 0.4), 0, 2.0);
    EXPECT_NEAR(s, std::exp(-0.4), 1e-12);
    EXPECT_NEAR(s, 0.670320, 5e-7);
}

TEST(Survival, FourStateChainMatchesSimulation) {
    const auto chain = four_state_chain();
    const auto hazard = HazardSpec::from_shape(chain, 1.0);
    const double analytic = survival(chain, hazard, 0, 5.0);
    MCConfig config{1000000, 41, 5.0, 1};
    const auto mc = estimate(config, [&](RandomStream& rng) {
        return simulate_single(chain, hazard, 0, 5.0, rng).default_time ? 0.0 : 1.0;
    });
    EXPECT_TRUE(within_three_se(analytic, mc)) << analytic << " vs " << mc.mean << " +- " << mc.std_error;
}

TEST(Survival, CoxReductionWhenEveryTriggerIsFatal) {
    const auto chain = four_state_chain();
    const Vector lambda = chain.values() * 3.0;
    const HazardSpec hazard(lambda, Vector::Ones(4));
    for (double s : {0.5, 2.0, 5.0})
        EXPECT_NEAR(survival(chain, hazard, 2, s), mgf(chain, -lambda, s)[2], 1e-15);
}

TEST(Survival, MonotoneInTimeIntensityAndFatality) {
    const auto chain = four_state_chain();
    const auto base = HazardSpec::from_shape(chain, 1.0);
    double previous = 1.0;
    for (int i = 1; i <= 40; ++i) {
        const double s = survival(chain, base, 0, 0.25 * i);
        EXPECT_LE(s, previous);
        previous = s;
    }
    for (Eigen::Index j = 0; j < 4; ++j) {
        double last_lambda = 1.0, last_p = 1.0;
        for (int step = 0; step <= 10; ++step) {
            Vector lambda = base.intensity();
            lambda[j] += 0.1 * step;
            Vector p = base.fatality();
            p[j] = 0.1 * step;
            const double by_lambda = survival(chain, HazardSpec(lambda, base.fatality()), 0, 3.0);
            const double by_p = survival(chain, HazardSpec(base.intensity(), p), 0, 3.0);
            EXPECT_LE(by_lambda, last_lambda + 1e-15);
            EXPECT_LE(by_p, last_p + 1e-15);
            last_lambda = by_lambda;
            last_p = by_p;
        }
    }
}

TEST(PathSurvival, Trivial) {
    const auto hazard = HazardSpec::from_shape(four_state_chain(), 1.0);
    ChainPath path{4, 2, 4.0, {{2, 4.0}}};
    EXPECT_EQ(path_survival(path, hazard, 1.5, 1.5), 1.0);
    EXPECT_NEAR(path_survival(path, hazard, 0.5, 3.0), std::exp(-hazard.fatal_rate()[2] * 2.5), 1e-15);
    EXPECT_THROW(path_survival(path, hazard, 0.0, 5.0), std::invalid_argument);
}

TEST(PathSurvival, PiecewiseIntegral) {
    const auto hazard = HazardSpec::from_shape(four_state_chain(), 1.0);
    const Vector rate = hazard.fatal_rate();
    ChainPath path{4, 0, 3.0, {{0, 1.0}, {3, 1.5}, {1, 0.5}}};
    const double expected = rate[0] * 0.5 + rate[3] * 1.5 + rate[1] * 0.25;
    EXPECT_NEAR(path_survival(path, hazard, 0.5, 2.75), std::exp(-expected), 1e-15);
}

TEST(PathSurvival, AveragesToSurvival) {
    const auto chain = four_state_chain();
    const auto hazard = HazardSpec::from_shape(chain, 2.0);
    const double s = 4.0;
    MCConfig config{1000000, 42, s, 1};
    const auto mc = estimate(config, [&](RandomStream& rng) {
        return path_survival(sample_path(chain, 0, s, rng), hazard, 0.0, s);
    });
    EXPECT_TRUE(within_three_se(survival(chain, hazard, 0, s), mc));
}

TEST(Prices, ConstantCase) {
    const auto chain = ChainSpec::constant(1.0);
    const auto hazard = constant_hazard(0.5, 0.4);
    const auto claim = unit_claim(1, 0.05);
    const double kappa = 0.05 + 0.2;
    EXPECT_NEAR(price_terminal(chain, hazard, claim, 0, 2.0), std::exp(-0.5), 1e-12);
    EXPECT_NEAR(price_stream(chain, hazard, claim, 0, 2.0), -std::expm1(-kappa * 2.0) / kappa, 1e-12);
    EXPECT_NEAR(price_recovery(chain, hazard, claim, 0, 2.0), 0.2 * -std::expm1(-kappa * 2.0) / kappa, 1e-12);
}

TEST(Prices, ZeroPayoffsAreFree) {
    const auto chain = four_state_chain();
    const auto hazard = HazardSpec::from_shape(chain, 1.0);
    ClaimSpec claim = unit_claim(4, 0.05);
    claim.stream.setZero();
    claim.recovery.setZero();
    EXPECT_EQ(price_stream(chain, hazard, claim, 0, 5.0), 0.0);
    EXPECT_EQ(price_recovery(chain, hazard, claim, 0, 5.0), 0.0);
}

TEST(Prices, NoFatalTriggersGivesDefaultFreePrice) {
    const auto chain = four_state_chain();
    const HazardSpec hazard(chain.values(), Vector::Zero(4));
    ClaimSpec claim = unit_claim(4, 0.0);
    claim.rate << 0.01, 0.02, 0.03, 0.04;
    claim.terminal << 1.0, 0.9, 0.8, 0.7;
    Matrix b = generator(chain);
    b.diagonal() -= claim.rate;
    EXPECT_NEAR(price_terminal(chain, hazard, claim, 1, 5.0), exp_action(b, claim.terminal, 5.0)[1], 1e-15);
}

TEST(Prices, ZeroRatePartition) {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto chain = trigger::testing::random_chain(1 + trial % 8, gen);
        const auto hazard = random_hazard(chain.size(), gen);
        const auto claim = unit_claim(chain.size(), 0.0);
        const std::size_t i0 = static_cast<std::size_t>(trial) % chain.size();
        const double total = price_terminal(chain, hazard, claim, i0, 3.0) + price_recovery(chain, hazard, claim, i0, 3.0);
        EXPECT_NEAR(total, 1.0, 1e-9) << "trial " << trial;
    }
}

TEST(Prices, FourStateChainMatchesSimulation) {
    const auto chain = four_state_chain();
    const auto hazard = HazardSpec::from_shape(chain, 1.0);
    ClaimSpec claim = unit_claim(4, 0.05);
    claim.stream << 1.0, 0.8, 0.6, 0.4;
    claim.recovery << 0.5, 0.45, 0.4, 0.35;
    const double maturity = 5.0;
    MCConfig config{1000000, 43, maturity, 1};
    const auto mc = estimate(config, 3, [&](RandomStream& rng, std::span<double> out) {
        const auto payoffs = claim_payoffs(simulate_single(chain, hazard, 0, maturity, rng), claim, maturity);
        out[0] = payoffs.terminal;
        out[1] = payoffs.stream;
        out[2] = payoffs.recovery;
    });
    EXPECT_TRUE(within_three_se(price_terminal(chain, hazard, claim, 0, maturity), mc[0]));
    EXPECT_TRUE(within_three_se(price_stream(chain, hazard, claim, 0, maturity), mc[1]));
    EXPECT_TRUE(within_three_se(price_recovery(chain, hazard, claim, 0, maturity), mc[2]));
}

TEST(Prices, DimensionMismatch) {
    const auto chain = four_state_chain();
    const auto hazard = HazardSpec::from_shape(chain, 1.0);
    EXPECT_THROW(price_terminal(chain, hazard, unit_claim(3, 0.0), 0, 1.0), ValidationError);
    EXPECT_THROW(survival(chain, constant_hazard(0.1, 0.1), 0, 1.0), ValidationError);
}
