#pragma once

namespace trigger {

enum class Firm { A, B };

/*! Looping-default pair with constant fatality probability.

    Trigger intensities are a1 + a2 1{t >= tau_B} for firm A and
    b1 + b2 1{t >= tau_A} for firm B; each trigger is fatal with probability p.
*/
class TwoFirmParams {
public:
    TwoFirmParams(double a1, double a2, double b1, double b2, double fatality, double rate = 0.0,
                  double maturity = 1.0);

    double a1() const { return a1_; }
    double a2() const { return a2_; }
    double b1() const { return b1_; }
    double b2() const { return b2_; }
    double fatality() const { return p_; }
    double rate() const { return r_; }
    double maturity() const { return maturity_; }

    //! Same model with the roles of A and B exchanged.
    TwoFirmParams mirrored() const;

private:
    double a1_, a2_, b1_, b2_, p_, r_, maturity_;
};

//! P(min(tau_A, tau_B) > t).
double first_default_survival(const TwoFirmParams& params, double t);

//! P(tau_firm > t and firm defaults first).
double survival_defaulting_first(const TwoFirmParams& params, Firm firm, double t);

//! Marginal density of tau_firm.
double marginal_density(const TwoFirmParams& params, Firm firm, double t);

//! P(tau_firm > t).
double marginal_survival(const TwoFirmParams& params, Firm firm, double t);

//! Zero-recovery zero-coupon bond, exp(-rT) P(tau_firm > T).
double bond_price(const TwoFirmParams& params, Firm firm);

} // namespace trigger
