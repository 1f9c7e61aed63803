#pragma once

#include <trigger/chain.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace trigger {

/*! kth-to-default basket on n exchangeable names.

    Name i has trigger intensity X_t (1 + b * #{other names defaulted}) and
    fatality probability 1 - exp(-c X_t). The contract pays 1 at T if the kth
    default happens before T.
*/
class BasketContract {
public:
    BasketContract(std::size_t names, double contagion, double shape, double rate, double maturity,
                   std::size_t seniority, ChainSpec chain, std::size_t initial_state);

    std::size_t names() const { return names_; }
    double contagion() const { return contagion_; }
    double shape() const { return shape_; }
    double rate() const { return rate_; }
    double maturity() const { return maturity_; }
    std::size_t seniority() const { return seniority_; }
    const ChainSpec& chain() const { return chain_; }
    std::size_t initial_state() const { return initial_state_; }

    BasketContract with_contagion(double b) const;
    BasketContract with_shape(double c) const;
    BasketContract with_seniority(std::size_t k) const;

private:
    std::size_t names_;
    double contagion_;
    double shape_;
    double rate_;
    double maturity_;
    std::size_t seniority_;
    ChainSpec chain_;
    std::size_t initial_state_;
};

//! Throws DegenerateParameterError when b lies within 1e-9 of 1/i for some i in 1..n-1.
void check_contagion(std::size_t names, double contagion);

/*! Coefficients of the kth-default law in terms of the integrated driver.

    Conditional on the chain, P(tau_k <= t) = sum_j alpha(k, j) / beta_j
    (1 - exp(-beta_j I_t)) with I_t the integral of y(X_s), where
    beta_j = (n - j)(1 + j b) is the ordered default rate after j defaults.
*/
struct OrderedCoefficients {
    std::size_t names = 0;
    std::vector<double> beta;               //!< beta_j, j = 0..n-1
    std::vector<std::vector<double>> table; //!< table[k-1][j] = alpha(k, j), j < k

    double alpha(std::size_t k, std::size_t j) const { return table.at(k - 1).at(j); }
};

OrderedCoefficients coefficients(std::size_t names, double contagion);

//! y_j = x_j (1 - exp(-c x_j)): per-state fatal trigger rate of a single name.
Vector y_vector(const ChainSpec& chain, double shape);

struct CdfEvaluation {
    double probability = 0.0;
    //! Rounding error bound of the alternating coefficient sum.
    double error_bound = 0.0;
    //! error_bound exceeds 1e-6 of the probability.
    bool precision_warning = false;
};

//! P(tau_k <= t) for the contract's seniority k.
CdfEvaluation kth_default_cdf(const BasketContract& contract, double t);

//! P(tau_k <= t) for k = 1..n (entry k-1), sharing the MGF evaluations.
std::vector<CdfEvaluation> default_cdfs(const BasketContract& contract, double t);

//! Upfront premium S_k = exp(-rT) P(tau_k <= T).
double premium(const BasketContract& contract);

struct SweepRow {
    std::size_t k;
    double contagion;
    double shape;
    double premium;
    bool precision_warning;
};

struct SweepResult {
    std::vector<SweepRow> rows;          //!< ordered by b, then c, then k
    std::vector<std::string> warnings;   //!< skipped grid points and precision notes
};

/*! Premiums for every seniority over a (b, c) grid.

    Grid points are evaluated concurrently; row order is deterministic. Values of
    b too close to 1/i are skipped with a warning.
*/
SweepResult sweep(const BasketContract& contract, const std::vector<double>& contagion_grid,
                  const std::vector<double>& shape_grid, unsigned workers = 0);

} // namespace trigger
