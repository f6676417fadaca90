#ifndef DELAB_THERMO_HPP
#define DELAB_THERMO_HPP

#include <utility>

namespace delab {

/** Gamma-law pressure p(u) = u^(-gamma)/gamma on specific volume u > 0,
 *  together with the derived maps used throughout the lab:
 *
 *    c(u)     = sqrt(-p'(u)) = u^(-(gamma+1)/2)     sound speed
 *    eta(u)   = (2/(gamma-1)) u^(-(gamma-1)/2)      integrated sound speed
 *    theta(u) = antiderivative of sqrt(c) in u
 *
 *  and the Riemann-invariant transforms r = v - eta, s = v + eta.
 *  All maps reject u <= 0 (unphysical state, always an upstream bug).
 */
class PressureLaw {
  public:
    explicit PressureLaw(double gamma);

    double gamma() const { return gamma_; }

    double pressure(double u) const;
    /** p'(u) = -u^(-gamma-1), always negative. */
    double dpressure(double u) const;
    double sound_speed(double u) const;
    /** c as a function of eta; avoids recovering u first in hot loops. */
    double sound_speed_from_eta(double eta_val) const;
    double eta(double u) const;
    double eta_inverse(double eta_val) const;
    /** theta_gamma: (4/(3-gamma)) u^((3-gamma)/4) for gamma != 3, log u at gamma = 3. */
    double theta(double u) const;

    /** (r, s) = (v - eta(u), v + eta(u)). */
    std::pair<double, double> to_riemann(double u, double v) const;
    /** Inverse transform; requires s > r (vacuum otherwise). */
    std::pair<double, double> from_riemann(double r, double s) const;

  private:
    double gamma_;
    double eta_coeff_;      // 2/(gamma-1)
    double eta_exponent_;   // -(gamma-1)/2
    double c_exponent_;     // -(gamma+1)/2
    double c_from_eta_exp_; // (gamma+1)/(gamma-1)
};

} // namespace delab

#endif
