#include <trigger/basket.hpp>
#include <trigger/errors.hpp>
#include <trigger/matexp.hpp>
#include <trigger/occupation.hpp>
#include <trigger/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace trigger {

namespace {

constexpr double kContagionTolerance = 1e-9;
constexpr double kBetaTolerance = 1e-9;
constexpr double kPrecisionRatio = 1e-6;
// Relative error assumed for each tail value; the kernel is accurate to a few
// ulps on these sub-stochastic problems with non-negative integrands.
constexpr double kMgfError = 16.0 * std::numeric_limits<double>::epsilon();

// Neumaier's compensated summation; also tracks sum |x| for the error estimate.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            compensation_ += (sum_ - t) + x;
        else
            compensation_ += (x - t) + sum_;
        sum_ = t;
        magnitude_ += std::abs(x);
    }
    double value() const { return sum_ + compensation_; }
    double magnitude() const { return magnitude_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
    double magnitude_ = 0.0;
};

std::string format_double(double x) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(12);
    os << x;
    return os.str();
}

} // namespace

void check_contagion(std::size_t names, double contagion) {
    if (!(contagion >= 0.0) || !std::isfinite(contagion))
        throw ValidationError("contract", "b", "contagion parameter must be finite and non-negative");
    for (std::size_t i = 1; i < names; ++i) {
        if (std::abs(contagion - 1.0 / static_cast<double>(i)) < kContagionTolerance)
            throw DegenerateParameterError("contagion parameter b = " + format_double(contagion) +
                                           " coincides with 1/" + std::to_string(i));
    }
}

BasketContract::BasketContract(std::size_t names, double contagion, double shape, double rate, double maturity,
                               std::size_t seniority, ChainSpec chain, std::size_t initial_state)
    : names_(names), contagion_(contagion), shape_(shape), rate_(rate), maturity_(maturity),
      seniority_(seniority), chain_(std::move(chain)), initial_state_(initial_state) {
    if (names_ < 1)
        throw ValidationError("contract", "n", "at least one name is required");
    if (seniority_ < 1 || seniority_ > names_)
        throw ValidationError("contract", "k", "seniority must lie in 1..n");
    if (!(shape_ > 0.0) || !std::isfinite(shape_))
        throw ValidationError("contract", "c", "shape parameter must be positive");
    if (!std::isfinite(rate_))
        throw ValidationError("contract", "r", "must be finite");
    if (!(maturity_ >= 0.0) || !std::isfinite(maturity_))
        throw ValidationError("contract", "T", "maturity must be finite and non-negative");
    if (initial_state_ >= chain_.size())
        throw ValidationError("chain", "initial", "initial state out of range");
    if ((chain_.values().array() < 0.0).any())
        throw ValidationError("chain", "states", "state values drive intensities and must be non-negative");
    check_contagion(names_, contagion_);
}

BasketContract BasketContract::with_contagion(double b) const {
    return {names_, b, shape_, rate_, maturity_, seniority_, chain_, initial_state_};
}

BasketContract BasketContract::with_shape(double c) const {
    return {names_, contagion_, c, rate_, maturity_, seniority_, chain_, initial_state_};
}

BasketContract BasketContract::with_seniority(std::size_t k) const {
    return {names_, contagion_, shape_, rate_, maturity_, k, chain_, initial_state_};
}

OrderedCoefficients coefficients(std::size_t names, double contagion) {
    if (names < 1)
        throw ValidationError("contract", "n", "at least one name is required");
    OrderedCoefficients out;
    out.names = names;
    out.beta.resize(names);
    for (std::size_t j = 0; j < names; ++j)
        out.beta[j] = static_cast<double>(names - j) * (1.0 + static_cast<double>(j) * contagion);

    for (std::size_t i = 0; i < names; ++i)
        for (std::size_t j = i + 1; j < names; ++j)
            if (std::abs(out.beta[i] - out.beta[j]) < kBetaTolerance)
                throw DegenerateParameterError("ordered default rates beta_" + std::to_string(i) + " and beta_" +
                                               std::to_string(j) + " coincide (" + format_double(out.beta[i]) +
                                               ")");

    // rows accumulated in long double
    std::vector<long double> prev{static_cast<long double>(names)};
    out.table.resize(names);
    out.table[0] = {static_cast<double>(names)};
    for (std::size_t k = 1; k < names; ++k) {
        std::vector<long double> row(k + 1);
        long double last = 0.0L;
        const long double bk = out.beta[k];
        for (std::size_t j = 0; j < k; ++j) {
            row[j] = prev[j] * bk / (bk - static_cast<long double>(out.beta[j]));
            last += row[j];
        }
        row[k] = -last;
        out.table[k].assign(row.begin(), row.end());
        prev = std::move(row);
    }
    return out;
}

Vector y_vector(const ChainSpec& chain, double shape) {
    if (!(shape > 0.0))
        throw ValidationError("contract", "c", "shape parameter must be positive");
    const Vector& x = chain.values();
    Vector y(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j)
        y[j] = -x[j] * std::expm1(-shape * x[j]);
    return y;
}

std::vector<CdfEvaluation> default_cdfs(const BasketContract& contract, double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("default_cdfs: time must be finite and non-negative");
    const std::size_t n = contract.names();
    const OrderedCoefficients coeffs = coefficients(n, contract.contagion());
    const Vector y = y_vector(contract.chain(), contract.shape());
    const auto i0 = static_cast<Eigen::Index>(contract.initial_state());

    // 1 - Psi(-beta_j y, t) = int_0^t e^{A s} beta_j y ds
    std::vector<double> tail(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Vector rate = coeffs.beta[j] * y;
        tail[j] = t == 0.0 ? 0.0 : integral_action(build_A(contract.chain(), -rate), rate, t)[i0];
    }

    std::vector<CdfEvaluation> out(n);
    for (std::size_t k = 1; k <= n; ++k) {
        CompensatedSum sum;
        for (std::size_t j = 0; j < k; ++j)
            sum.add(coeffs.alpha(k, j) / coeffs.beta[j] * tail[j]);
        CdfEvaluation& e = out[k - 1];
        e.probability = std::clamp(sum.value(), 0.0, 1.0);
        e.error_bound = (kMgfError + 2.0 * std::numeric_limits<double>::epsilon()) * sum.magnitude();
        e.precision_warning = e.error_bound > kPrecisionRatio * std::abs(e.probability);
    }
    return out;
}

CdfEvaluation kth_default_cdf(const BasketContract& contract, double t) {
    return default_cdfs(contract, t).at(contract.seniority() - 1);
}

double premium(const BasketContract& contract) {
    return std::exp(-contract.rate() * contract.maturity()) *
           kth_default_cdf(contract, contract.maturity()).probability;
}

SweepResult sweep(const BasketContract& contract, const std::vector<double>& contagion_grid,
                  const std::vector<double>& shape_grid, unsigned workers) {
    if (contagion_grid.empty())
        throw ValidationError("sweep", "b_grid", "grid must not be empty");
    if (shape_grid.empty())
        throw ValidationError("sweep", "c_grid", "grid must not be empty");

    SweepResult result;
    std::vector<double> usable_b;
    for (double b : contagion_grid) {
        try {
            check_contagion(contract.names(), b);
            coefficients(contract.names(), b);
            usable_b.push_back(b);
        } catch (const DegenerateParameterError& e) {
            result.warnings.push_back("skipped b = " + format_double(b) + ": " + e.what());
        }
    }

    const std::size_t n = contract.names();
    const std::size_t points = usable_b.size() * shape_grid.size();
    std::vector<std::vector<CdfEvaluation>> cdfs(points);
    parallel_for(points, workers, [&](std::size_t idx) {
        const double b = usable_b[idx / shape_grid.size()];
        const double c = shape_grid[idx % shape_grid.size()];
        const BasketContract point = contract.with_contagion(b).with_shape(c);
        cdfs[idx] = default_cdfs(point, point.maturity());
    });

    const double discount = std::exp(-contract.rate() * contract.maturity());
    result.rows.reserve(points * n);
    for (std::size_t idx = 0; idx < points; ++idx) {
        const double b = usable_b[idx / shape_grid.size()];
        const double c = shape_grid[idx % shape_grid.size()];
        for (std::size_t k = 1; k <= n; ++k) {
            const auto& e = cdfs[idx][k - 1];
            result.rows.push_back({k, b, c, discount * e.probability, e.precision_warning});
            if (e.precision_warning)
                result.warnings.push_back("precision: k = " + std::to_string(k) + ", b = " + format_double(b) +
                                          ", c = " + format_double(c) + " has rounding bound " +
                                          format_double(e.error_bound) + " relative to " +
                                          format_double(e.probability));
        }
    }
    return result;
}

} // namespace trigger
