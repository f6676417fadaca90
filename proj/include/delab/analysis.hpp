#ifndef DELAB_ANALYSIS_HPP
#define DELAB_ANALYSIS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "delab/characteristics.hpp"
#include "delab/damping.hpp"
#include "delab/solver.hpp"
#include "delab/thermo.hpp"

namespace delab {

/** sup over node pairs of |r(x) + s(y)|, computed from the per-family
 *  extremes instead of the O(n^2) pairwise scan. */
double phi_norm(const FieldState& state);

/** sup over node pairs of |s(x) - r(y)|. */
double psi_norm(const FieldState& state);

struct AprioriCheck {
    bool applicable = false;
    bool pass = true;
    double worst_margin = 0.0;
    double witness_t = 0.0;
};

struct AprioriReport {
    AprioriCheck phi_monotone, psi_monotone;
    AprioriCheck u_box;    // far-field box from the initial Phi norm
    AprioriCheck v_bound;  // |v| <= Phi(0)/2
    AprioriCheck growth_envelope; // u^{(3-gamma)/4} under the damped envelope
    AprioriCheck spatial_box;     // u in [u_-/4, 4u_-] for space-decaying damping
    double delta1 = 0.0, m1 = 0.0;

    bool all_pass() const {
        for (const AprioriCheck* c :
             {&phi_monotone, &psi_monotone, &u_box, &v_bound, &growth_envelope, &spatial_box}) {
            if (c->applicable && !c->pass) return false;
        }
        return true;
    }
};

AprioriReport check_apriori(const Trajectory& traj, const PressureLaw& law,
                            const DampingModel& model, double tolerance_per_dx);

enum class BlowupClass {
    GradientBlowup,
    VacuumEvent,
    PressureDerivativeBlowup,
    HorizonReached,
    NonFiniteEvent
};

std::string blowup_class_name(BlowupClass c);

struct BoundedConfirmed {
    bool u_upper = false, u_lower = false, v_sup = false, dp_sup = false;
    double sup_u = 0.0, inv_inf_u = 0.0, sup_v = 0.0, sup_dp = 0.0;
    double sup_u0 = 0.0, inv_inf_u0 = 0.0, sup_v0 = 0.0, sup_dp0 = 0.0;

    bool all() const { return u_upper && u_lower && v_sup && dp_sup; }
};

struct BlowupReport {
    BlowupClass event = BlowupClass::HorizonReached;
    double t_star_estimate = 0.0;
    std::vector<std::pair<double, double>> extrapolation; // (dx, t_star_at_dx)
    double witness_x = 0.0;
    BoundedConfirmed bounded_confirmed;
    double m1 = 0.0, delta1 = 0.0;
    double measured_order = 0.0; // 0 when fewer than 3 meshes constrain it
};

class InconsistentClassification : public std::runtime_error {
  public:
    explicit InconsistentClassification(const std::string& what) : std::runtime_error(what) {}
};

struct DetectOptions {
    /** Add the comparison-ODE continuation time from the measured witness
     *  gradient to each threshold-crossing time. Any finite threshold leaves
     *  a mesh-independent O(1/threshold) gap to T* that Richardson cannot
     *  remove; the continuation closes it (exactly so for gamma = 3 without
     *  damping, where the weighted-gradient equation is autonomous). */
    bool riccati_tail_correction = true;
};

/** Runs the configured problem at mesh_levels dyadic refinements, estimates
 *  the lifespan per mesh, Richardson-extrapolates on the finest pair with
 *  the measured order, and classifies the terminal event. */
BlowupReport detect_blowup(const RunConfig& config, int mesh_levels,
                           const DetectOptions& options = {});

struct SweepOptions {
    int mesh_levels = 2;
    double t_max_factor = 10.0; // horizon = factor * Riccati oracle prediction
    bool auto_domain = true;    // resize the grid per epsilon, preserving dx
    int jobs = 1;
    DetectOptions detect;
};

struct SweepEntry {
    double epsilon = 0.0;
    double dx = 0.0;
    bool ok = false;
    std::string error;
    BlowupReport report;
};

/** One detect_blowup per epsilon with the horizon auto-scaled from the
 *  Riccati oracle. Per-epsilon failures are recorded inline; the sweep
 *  never aborts. Results are ordered by epsilon regardless of job count. */
std::vector<SweepEntry> estimate_lifespan_sweep(const RunConfig& base,
                                                const std::vector<double>& epsilons,
                                                const SweepOptions& options = {});

enum class FitRegime { PowerLaw, ExpLaw };

struct ScalingFit {
    FitRegime regime = FitRegime::PowerLaw;
    std::vector<std::pair<double, double>> samples; // (epsilon, t_star)
    double fitted_exponent = 0.0;        // PowerLaw: slope of log T vs log eps
    double fitted_log_coefficient = 0.0; // ExpLaw: slope of log T vs 1/eps; PowerLaw: intercept
    double r_squared = 0.0;
    int n_samples = 0;
};

class InsufficientData : public std::runtime_error {
  public:
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

ScalingFit fit_scaling_samples(const std::vector<std::pair<double, double>>& samples,
                               FitRegime regime);
ScalingFit fit_scaling(const std::vector<SweepEntry>& sweep, FitRegime regime);

enum class HypothesisVariant {
    KThreshold,    // steep-gradient threshold plus far-field smallness, time-power damping
    WeightedSlope, // sqrt(c0) {r,s}_x < -(lambda/2) theta_gamma(u0), 1 < gamma < 3
    SpaceTimeK     // steep-gradient threshold under mu > 1 space-time decay
};

struct AnalysisThresholds {
    /** Gradient scale K: default calibrated so the weighted-slope inequality
     *  is tight for the reference gaussian family at epsilon = 0.1. */
    double k_threshold = 0.0857763884961;
    /** Smallness bound on Phi(0); nonpositive selects the far-field scale
     *  (1/(gamma-1)) u_-^{-(gamma-1)/2}. */
    double phi_smallness = -1.0;
    /** Comparison-ODE coefficient; nonpositive measures (gamma+1)/4 u^{(gamma-3)/4}
     *  from the data. */
    double riccati_coeff = -1.0;
};

struct HypothesisVerdict {
    enum class Kind { PredictsBlowup, NoPrediction, HypothesisViolated };
    Kind kind = Kind::NoPrediction;
    double witness_x = 0.0;
    std::vector<double> witness_set;
    double measured = 0.0;  // most negative gradient quantity found
    double threshold = 0.0; // value it was compared against
    std::string reason;
};

HypothesisVerdict check_blowup_hypothesis(const FieldState& state0, const Grid1D& grid,
                                          const PressureLaw& law, const DampingModel& model,
                                          double u_minus, HypothesisVariant variant,
                                          const AnalysisThresholds& thresholds = {});

/// Convenience overload building the initial state from a run config.
HypothesisVerdict check_blowup_hypothesis(const RunConfig& config, HypothesisVariant variant,
                                          const AnalysisThresholds& thresholds = {});

/** Most negative initial weighted gradient sqrt(c0) min(r_x, s_x) of the
 *  family, minimized over a dense sample of the support; the Riccati oracle
 *  seed. Returns the minimizing x through witness_x when nonnull. */
double initial_min_weighted_gradient(const InitialDataFamily& family, const PressureLaw& law,
                                     double* witness_x = nullptr);

} // namespace delab

#endif
