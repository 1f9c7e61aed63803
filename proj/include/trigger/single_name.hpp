#pragma once

#include <trigger/chain.hpp>

namespace trigger {

/*! Per-state trigger intensity and fatality probability.

    Triggers arrive as a Cox process with intensity lambda(X_t); each trigger is
    fatal with probability p(X_t) and survived with probability 1 - p(X_t).
*/
class HazardSpec {
public:
    HazardSpec(Vector intensity, Vector fatality);

    //! lambda_j = x_j and p_j = 1 - exp(-c x_j): the basket model's hazard on a chain.
    static HazardSpec from_shape(const ChainSpec& chain, double shape);

    const Vector& intensity() const { return intensity_; }
    const Vector& fatality() const { return fatality_; }
    std::size_t size() const { return static_cast<std::size_t>(intensity_.size()); }

    //! p_j lambda_j per state.
    Vector fatal_rate() const { return fatality_.cwiseProduct(intensity_); }

private:
    Vector intensity_;
    Vector fatality_;
};

//! Per-state short rate and the three building-block payoffs.
struct ClaimSpec {
    Vector rate;     //!< r(x_j)
    Vector terminal; //!< paid at T on survival, as a function of X_T
    Vector stream;   //!< paid continuously at rate Y(X_s) until default
    Vector recovery; //!< paid at default, Z(X_tau)

    void validate(std::size_t states) const;
};

//! P(tau > s) starting from the given state.
double survival(const ChainSpec& chain, const HazardSpec& hazard, std::size_t initial_state, double s);

//! exp(-integral of p lambda over [s1, s2]) along a realised path.
double path_survival(const ChainPath& path, const HazardSpec& hazard, double s1, double s2);

//! Q - diag(r + p lambda): generator of the discounted, default-killed chain.
Matrix killed_generator(const ChainSpec& chain, const HazardSpec& hazard, const Vector& rate);

//! E[exp(-int r) X 1{tau > T}].
double price_terminal(const ChainSpec& chain, const HazardSpec& hazard, const ClaimSpec& claim,
                      std::size_t initial_state, double maturity);

//! E[int_0^T Y_s 1{tau > s} exp(-int_0^s r) ds].
double price_stream(const ChainSpec& chain, const HazardSpec& hazard, const ClaimSpec& claim,
                    std::size_t initial_state, double maturity);

//! E[exp(-int_0^tau r) Z_tau 1{tau <= T}].
double price_recovery(const ChainSpec& chain, const HazardSpec& hazard, const ClaimSpec& claim,
                      std::size_t initial_state, double maturity);

} // namespace trigger
