#include <trigger/validation.hpp>

#include <algorithm>
#include <cmath>

namespace trigger {

ValidationLine compare(std::string item, double analytic, const MCEstimate& mc, std::optional<double> null_se) {
    ValidationLine line;
    line.item = std::move(item);
    line.analytic = analytic;
    line.mc = mc;
    line.tolerance_se = std::max(mc.std_error, null_se.value_or(0.0));
    const double deviation = std::abs(mc.mean - analytic);
    line.z = line.tolerance_se > 0.0 ? deviation / line.tolerance_se : (deviation == 0.0 ? 0.0 : INFINITY);
    line.passed = deviation <= kAgreementSigmas * line.tolerance_se;
    return line;
}

namespace {

// Time at which single-name survival and the martingale residual are checked.
double single_name_time(const RunConfig& config) {
    if (config.query_time && *config.query_time > 0.0)
        return *config.query_time;
    if (config.claim && config.claim_maturity > 0.0)
        return config.claim_maturity;
    return config.mc.horizon;
}

std::string seniority_label(std::size_t k) { return "premium_k" + std::to_string(k); }

} // namespace

std::vector<NamedEstimate> simulate_estimates(const RunConfig& config) {
    std::vector<NamedEstimate> out;
    const MCConfig& mc = config.mc;

    if (config.chain && config.hazard) {
        const double t = single_name_time(config);
        const bool with_claim = config.claim.has_value();
        const std::size_t dimension = with_claim ? 5 : 2;
        const auto estimates = estimate(mc, dimension, [&](RandomStream& rng, std::span<double> values) {
            const auto sample = simulate_single(*config.chain, *config.hazard, config.initial_state, mc.horizon, rng);
            values[0] = sample.default_time && *sample.default_time <= t ? 0.0 : 1.0;
            values[1] = martingale_statistic(sample, *config.hazard, t);
            if (with_claim) {
                const auto payoffs = claim_payoffs(sample, *config.claim, config.claim_maturity);
                values[2] = payoffs.terminal;
                values[3] = payoffs.stream;
                values[4] = payoffs.recovery;
            }
        });
        out.push_back({"survival", estimates[0]});
        out.push_back({"martingale_residual", estimates[1]});
        if (with_claim) {
            out.push_back({"price_terminal", estimates[2]});
            out.push_back({"price_stream", estimates[3]});
            out.push_back({"price_recovery", estimates[4]});
        }
    }

    if (config.contract) {
        const auto& contract = *config.contract;
        const std::size_t n = contract.names();
        const double maturity = contract.maturity();
        const double discount = std::exp(-contract.rate() * maturity);
        const auto estimates = estimate(mc, n, [&](RandomStream& rng, std::span<double> values) {
            const auto times = simulate_basket(contract, mc.horizon, rng);
            for (std::size_t k = 0; k < n; ++k)
                values[k] = times[k] <= maturity ? discount : 0.0;
        });
        for (std::size_t k = 1; k <= n; ++k)
            out.push_back({seniority_label(k), estimates[k - 1]});
    }

    if (config.two_firm) {
        const auto& params = *config.two_firm;
        const double maturity = params.maturity();
        const double discount = std::exp(-params.rate() * maturity);
        const auto estimates = estimate(mc, 3, [&](RandomStream& rng, std::span<double> values) {
            const auto sample = simulate_two_firm(params, rng);
            values[0] = std::min(sample.tau_a, sample.tau_b) > maturity ? 1.0 : 0.0;
            values[1] = sample.tau_a > maturity ? discount : 0.0;
            values[2] = sample.tau_b > maturity ? discount : 0.0;
        });
        out.push_back({"two_firm_first_default_survival", estimates[0]});
        out.push_back({"two_firm_bond_A", estimates[1]});
        out.push_back({"two_firm_bond_B", estimates[2]});
    }
    return out;
}

std::vector<ValidationLine> validate(const RunConfig& config) {
    const auto estimates = simulate_estimates(config);
    const std::size_t paths = config.mc.paths;
    std::vector<ValidationLine> lines;
    std::size_t next = 0;
    const auto take = [&]() -> const MCEstimate& { return estimates.at(next++).mc; };

    if (config.chain && config.hazard) {
        const double t = single_name_time(config);
        const double q = survival(*config.chain, *config.hazard, config.initial_state, t);
        lines.push_back(compare("survival", q, take(), indicator_se(q, paths)));
        lines.push_back(compare("martingale_residual", 0.0, take()));
        if (config.claim) {
            const auto& chain = *config.chain;
            const auto& hazard = *config.hazard;
            const auto& claim = *config.claim;
            const auto i0 = config.initial_state;
            const double maturity = config.claim_maturity;
            lines.push_back(compare("price_terminal", price_terminal(chain, hazard, claim, i0, maturity), take()));
            lines.push_back(compare("price_stream", price_stream(chain, hazard, claim, i0, maturity), take()));
            lines.push_back(compare("price_recovery", price_recovery(chain, hazard, claim, i0, maturity), take()));
        }
    }

    if (config.contract) {
        const auto& contract = *config.contract;
        const double discount = std::exp(-contract.rate() * contract.maturity());
        const auto cdfs = default_cdfs(contract, contract.maturity());
        for (std::size_t k = 1; k <= contract.names(); ++k) {
            const double p = cdfs[k - 1].probability;
            lines.push_back(compare(seniority_label(k), discount * p, take(), indicator_se(p, paths, discount)));
        }
    }

    if (config.two_firm) {
        const auto& params = *config.two_firm;
        const double maturity = params.maturity();
        const double discount = std::exp(-params.rate() * maturity);
        const double first = first_default_survival(params, maturity);
        const double sa = marginal_survival(params, Firm::A, maturity);
        const double sb = marginal_survival(params, Firm::B, maturity);
        lines.push_back(compare("two_firm_first_default_survival", first, take(), indicator_se(first, paths)));
        lines.push_back(compare("two_firm_bond_A", discount * sa, take(), indicator_se(sa, paths, discount)));
        lines.push_back(compare("two_firm_bond_B", discount * sb, take(), indicator_se(sb, paths, discount)));
    }
    return lines;
}

} // namespace trigger
