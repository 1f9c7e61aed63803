#pragma once

#include <trigger/random.hpp>

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace trigger {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/*! Finite-state continuous-time Markov chain driving the economy.

    States are indexed 0..M-1 internally (the config file and CLI use 1..M).
    Each state carries a numeric value, an exit rate and a row of jump
    probabilities. A state with zero exit rate is absorbing and its jump row is
    ignored; a single-state chain must be absorbing.
*/
class ChainSpec {
public:
    ChainSpec(Vector values, Vector exit_rates, Matrix jump_probabilities);

    //! Single absorbing state with the given value.
    static ChainSpec constant(double value);

    std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
    const Vector& values() const { return values_; }
    const Vector& exit_rates() const { return exit_rates_; }
    const Matrix& jump_probabilities() const { return jump_probabilities_; }

    double value(std::size_t state) const { return values_[static_cast<Eigen::Index>(state)]; }
    double exit_rate(std::size_t state) const { return exit_rates_[static_cast<Eigen::Index>(state)]; }

private:
    Vector values_;
    Vector exit_rates_;
    Matrix jump_probabilities_;
};

//! Q with Q_ii = -v_i and Q_ij = v_i p_ij.
Matrix generator(const ChainSpec& spec);

struct Segment {
    std::size_t state;
    double duration;
};

/*! One realisation of the chain on [0, horizon].

    Segments are consecutive sojourns; the last one is truncated at the horizon.
*/
struct ChainPath {
    std::size_t state_count = 0;
    std::size_t initial_state = 0;
    double horizon = 0.0;
    std::vector<Segment> segments;
};

ChainPath sample_path(const ChainSpec& spec, std::size_t initial_state, double horizon, RandomStream& rng);

//! Time spent in each state over the path's horizon.
Vector occupation_times(const ChainPath& path);

} // namespace trigger
