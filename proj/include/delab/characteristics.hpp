#ifndef DELAB_CHARACTERISTICS_HPP
#define DELAB_CHARACTERISTICS_HPP

#include <limits>
#include <stdexcept>
#include <vector>

#include "delab/damping.hpp"
#include "delab/solver.hpp"
#include "delab/thermo.hpp"

namespace delab {

struct PathNode {
    double t, x;
    double u, r, s;
    double grad_r, grad_s;
};

/** A traced plus/minus characteristic with along-path samples and the
 *  accumulated amplification factor A_pm at each node. */
struct CharacteristicPath {
    int sign = -1; // +1 plus family, -1 minus family
    std::vector<PathNode> nodes;
    std::vector<double> amplification;
};

class PathLeftDomain : public std::runtime_error {
  public:
    PathLeftDomain(double t, double x)
        : std::runtime_error("characteristic left the grid at t = " + std::to_string(t) +
                             ", x = " + std::to_string(x)),
          t_exit(t),
          x_exit(x) {}
    double t_exit, x_exit;
};

/** Integrates dx/dt = sign * c through the stored snapshots with Heun steps
 *  synchronized to the snapshot cadence; field values by linear spatial
 *  interpolation. Throws PathLeftDomain if the curve exits the grid before
 *  t_end. */
CharacteristicPath trace(const Trajectory& run_output, const DampingModel& model,
                         double start_x, int sign,
                         double t_end = std::numeric_limits<double>::infinity());

struct PathFunctionals {
    std::vector<double> t;
    std::vector<double> y;     // A sqrt(c) r_x
    std::vector<double> q;     // A sqrt(c) s_x
    std::vector<double> theta; // theta_gamma(u)
};

PathFunctionals along_path_functionals(const CharacteristicPath& path, const PressureLaw& law,
                                       const DampingModel& model);

/** Explosion time of the comparison ODE F' = coeff * A(t)^-1 * F^2 started
 *  from F(0) = -y0: the t solving coeff * int_0^t A^-1 = 1/(-y0). Returns
 *  +inf for y0 >= 0 or when the reciprocal integral's total mass is too
 *  small (the global-existence branches). */
double riccati_blowup_time(double y0, const DampingModel& model, double coeff);

/** Remaining time to explosion for the same comparison ODE started at t0:
 *  solves coeff * (I(t0 + dt) - I(t0)) = 1/(-y0). */
double riccati_continuation_time(double t0, double y0, const DampingModel& model, double coeff);

/** Term-by-term evaluation of the along-path integral identity for the
 *  weighted gradient (trapezoid quadrature at the path resolution), in the
 *  form obtained by integrating the transport relation by parts:
 *
 *    F(t) = F(0) - 1/2 [A a theta]_0^t + 1/2 int (A a_path)' theta
 *           - 1/2 int A a_x sqrt(c) (r+s)
 *           - (gamma+1)/4 int A^-1 u^((gamma-3)/4) F^2
 *
 *  where F is y on minus paths and q on plus paths, a_path(tau) is the
 *  damping sampled along the curve, and (A a_path)' = A (a^2/2 + a_t -+ c a_x).
 *  For x-independent damping the a_x term vanishes and the theta term
 *  reduces to the time-power form whose integrand is identically zero when
 *  mu = 1 and lambda = 2. */
struct LaxIdentityTerms {
    double f_end = 0.0, f_start = 0.0;
    double boundary_term = 0.0;
    double theta_integral = 0.0;
    double ax_integral = 0.0;
    double riccati_integral = 0.0;
    double max_residual = 0.0;
};

LaxIdentityTerms lax_identity_terms(const CharacteristicPath& path, const PressureLaw& law,
                                    const DampingModel& model);

/// Max absolute discrepancy of the integral identity over the path nodes.
double lax_identity_residual(const CharacteristicPath& path, const PressureLaw& law,
                             const DampingModel& model);

} // namespace delab

#endif
