#include "delab/thermo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace delab {

namespace {

void require_positive(double u, const char* what) {
    if (!(u > 0.0)) {
        throw std::domain_error(std::string(what) + " requires a positive argument, got " +
                                std::to_string(u));
    }
}

// x^p with a fast path for small integer exponents (the common gamma values
// 3, 2, 5/3, 3/2 all give integer exponents in the derived maps).
double powi_or_pow(double x, double p) {
    double rp = std::round(p);
    if (rp == p && std::fabs(rp) <= 8.0) {
        double ax = 1.0;
        int n = static_cast<int>(std::fabs(rp));
        for (int i = 0; i < n; ++i) ax *= x;
        return rp < 0.0 ? 1.0 / ax : ax;
    }
    return std::pow(x, p);
}

} // namespace

PressureLaw::PressureLaw(double gamma) : gamma_(gamma) {
    if (!(gamma > 1.0)) {
        throw std::domain_error("PressureLaw requires gamma > 1, got " + std::to_string(gamma));
    }
    eta_coeff_ = 2.0 / (gamma_ - 1.0);
    eta_exponent_ = -(gamma_ - 1.0) / 2.0;
    c_exponent_ = -(gamma_ + 1.0) / 2.0;
    c_from_eta_exp_ = (gamma_ + 1.0) / (gamma_ - 1.0);
}

double PressureLaw::pressure(double u) const {
    require_positive(u, "pressure");
    return powi_or_pow(u, -gamma_) / gamma_;
}

double PressureLaw::dpressure(double u) const {
    require_positive(u, "dpressure");
    return -powi_or_pow(u, -gamma_ - 1.0);
}

double PressureLaw::sound_speed(double u) const {
    require_positive(u, "sound_speed");
    return powi_or_pow(u, c_exponent_);
}

double PressureLaw::sound_speed_from_eta(double eta_val) const {
    // c = u^{-(gamma+1)/2} and eta = (2/(gamma-1)) u^{-(gamma-1)/2}
    // combine to c = ((gamma-1) eta / 2)^{(gamma+1)/(gamma-1)}.
    return powi_or_pow(eta_val / eta_coeff_, c_from_eta_exp_);
}

double PressureLaw::eta(double u) const {
    require_positive(u, "eta");
    return eta_coeff_ * powi_or_pow(u, eta_exponent_);
}

double PressureLaw::eta_inverse(double eta_val) const {
    require_positive(eta_val, "eta_inverse");
    return powi_or_pow(eta_val / eta_coeff_, 1.0 / eta_exponent_);
}

double PressureLaw::theta(double u) const {
    require_positive(u, "theta");
    if (gamma_ == 3.0) {
        return std::log(u);
    }
    return 4.0 / (3.0 - gamma_) * powi_or_pow(u, (3.0 - gamma_) / 4.0);
}

std::pair<double, double> PressureLaw::to_riemann(double u, double v) const {
    double e = eta(u);
    return {v - e, v + e};
}

std::pair<double, double> PressureLaw::from_riemann(double r, double s) const {
    if (!(s > r)) {
        throw std::domain_error("from_riemann requires s > r (vacuum state), got s - r = " +
                                std::to_string(s - r));
    }
    return {eta_inverse(0.5 * (s - r)), 0.5 * (r + s)};
}

} // namespace delab
