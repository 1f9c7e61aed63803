#include <trigger/chain.hpp>
#include <trigger/errors.hpp>

#include <cmath>
#include <string>

namespace trigger {

namespace {

constexpr double kRowSumTolerance = 1e-12;

std::string row_label(Eigen::Index i) { return "row " + std::to_string(i + 1); }

} // namespace

ChainSpec::ChainSpec(Vector values, Vector exit_rates, Matrix jump_probabilities)
    : values_(std::move(values)), exit_rates_(std::move(exit_rates)),
      jump_probabilities_(std::move(jump_probabilities)) {
    const Eigen::Index m = values_.size();
    if (m < 1)
        throw ValidationError("chain", "states", "at least one state is required");
    if (exit_rates_.size() != m)
        throw ValidationError("chain", "exit_rates",
                              "expected " + std::to_string(m) + " entries, got " + std::to_string(exit_rates_.size()));
    if (jump_probabilities_.rows() != m || jump_probabilities_.cols() != m)
        throw ValidationError("chain", "transitions", "expected a " + std::to_string(m) + "x" + std::to_string(m) +
                                                          " matrix");
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!std::isfinite(values_[i]))
            throw ValidationError("chain", "states", "state " + std::to_string(i + 1) + " is not finite");
        if (!(exit_rates_[i] >= 0.0) || !std::isfinite(exit_rates_[i]))
            throw ValidationError("chain", "exit_rates", "rate of state " + std::to_string(i + 1) +
                                                             " must be finite and non-negative");
    }
    if (m == 1 && exit_rates_[0] != 0.0)
        throw ValidationError("chain", "exit_rates", "a single-state chain must have exit rate 0");

    for (Eigen::Index i = 0; i < m; ++i) {
        if (exit_rates_[i] == 0.0)
            continue;
        if (jump_probabilities_(i, i) != 0.0)
            throw ValidationError("chain", "transitions", row_label(i) + " has a non-zero diagonal entry");
        double sum = 0.0;
        for (Eigen::Index j = 0; j < m; ++j) {
            const double pij = jump_probabilities_(i, j);
            if (!(pij >= 0.0) || !std::isfinite(pij))
                throw ValidationError("chain", "transitions", row_label(i) + " has a negative or non-finite entry");
            sum += pij;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance)
            throw ValidationError("chain", "transitions",
                                  row_label(i) + " sums to " + std::to_string(sum) + " instead of 1");
    }
}

ChainSpec ChainSpec::constant(double value) {
    return ChainSpec(Vector::Constant(1, value), Vector::Zero(1), Matrix::Zero(1, 1));
}

Matrix generator(const ChainSpec& spec) {
    const auto m = static_cast<Eigen::Index>(spec.size());
    Matrix q = Matrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double v = spec.exit_rates()[i];
        if (v == 0.0)
            continue;
        for (Eigen::Index j = 0; j < m; ++j)
            if (j != i)
                q(i, j) = v * spec.jump_probabilities()(i, j);
        q(i, i) = -v;
    }
    return q;
}

namespace {

std::size_t next_state(const ChainSpec& spec, std::size_t from, RandomStream& rng) {
    const auto row = spec.jump_probabilities().row(static_cast<Eigen::Index>(from));
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t last_positive = from;
    for (Eigen::Index j = 0; j < row.size(); ++j) {
        if (row[j] <= 0.0)
            continue;
        last_positive = static_cast<std::size_t>(j);
        cumulative += row[j];
        if (u < cumulative)
            return last_positive;
    }
    // u fell in the rounding gap above the accumulated row sum
    return last_positive;
}

} // namespace

ChainPath sample_path(const ChainSpec& spec, std::size_t initial_state, double horizon, RandomStream& rng) {
    if (!(horizon > 0.0))
        throw std::invalid_argument("sample_path: horizon must be positive");
    if (initial_state >= spec.size())
        throw std::invalid_argument("sample_path: initial state out of range");

    ChainPath path;
    path.state_count = spec.size();
    path.initial_state = initial_state;
    path.horizon = horizon;

    std::size_t state = initial_state;
    double elapsed = 0.0;
    while (true) {
        const double hold = rng.exponential(spec.exit_rate(state));
        if (elapsed + hold >= horizon) {
            path.segments.push_back({state, horizon - elapsed});
            break;
        }
        path.segments.push_back({state, hold});
        elapsed += hold;
        state = next_state(spec, state, rng);
    }
    return path;
}

Vector occupation_times(const ChainPath& path) {
    Vector occupation = Vector::Zero(static_cast<Eigen::Index>(path.state_count));
    for (const auto& segment : path.segments)
        occupation[static_cast<Eigen::Index>(segment.state)] += segment.duration;
    return occupation;
}

} // namespace trigger
