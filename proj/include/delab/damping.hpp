#ifndef DELAB_DAMPING_HPP
#define DELAB_DAMPING_HPP

#include <span>
#include <string>
#include <vector>

namespace delab {

/// Pointwise damping coefficient and its analytic first derivatives.
struct DampingValue {
    double a;
    double a_t;
    double a_x;
};

/** Family of nonnegative damping coefficients a(t,x).
 *
 *  Variants:
 *    None        a = 0
 *    PowerTime   a = lambda (1+t)^(-mu), x-independent
 *    SpacePower  a = amplitude (1+|x|)^(-mu)
 *    Tabulated   bilinear interpolation of a sample table, clamped outside
 *
 *  Values are immutable after construction; evaluation is pure.
 */
class DampingModel {
  public:
    enum class Kind { None, PowerTime, SpacePower, Tabulated };

    static DampingModel none();
    static DampingModel power_time(double lambda, double mu);
    static DampingModel space_power(double amplitude, double mu);
    static DampingModel tabulated(std::vector<double> t_grid, std::vector<double> x_grid,
                                  std::vector<double> values);
    /// Plain-text table: header "t-count x-count", t grid, x grid, row-major values.
    static DampingModel tabulated_from_file(const std::string& path);

    Kind kind() const { return kind_; }
    bool x_independent() const { return kind_ == Kind::None || kind_ == Kind::PowerTime; }
    double lambda() const { return lambda_; }
    double mu() const { return mu_; }

    DampingValue eval(double t, double x) const;

    /** A(t) = exp(int_0^t a(tau)/2 dtau) in closed form.
     *  Only defined for x-independent variants. */
    double amplification(double t) const;

    /** int_0^t A(tau)^(-1) dtau; closed form for mu = 1, adaptive quadrature
     *  otherwise. */
    double amplification_reciprocal_integral(double t) const;

    /** Total mass int_0^inf A^(-1); +inf when divergent. */
    double reciprocal_integral_total() const;

    /** Cumulative trapezoid of a(tau, x(tau))/2 along a sampled path,
     *  exponentiated at every node: A_pm(t_i). Single node gives {1}. */
    std::vector<double> path_amplification(std::span<const double> times,
                                           std::span<const double> xs) const;

  private:
    DampingModel() = default;

    Kind kind_ = Kind::None;
    double lambda_ = 0.0;
    double mu_ = 1.0;
    // tabulated data
    std::vector<double> t_grid_, x_grid_, table_;

    DampingValue eval_tabulated(double t, double x) const;
};

/// Which decay hypothesis of the space-time damping theory to test.
enum class DecayHypothesis { TimeDecay, SpaceDecay };

struct HypothesisSpec {
    DecayHypothesis kind;
    double amp_bound;   // A1 or A3
    double deriv_bound; // A2 or A4
    double mu;          // must exceed 1
};

struct LatticeSpec {
    double t_min = 0.0, t_max = 100.0;
    double x_min = -200.0, x_max = 200.0;
    int nt = 401, nx = 401;
};

struct ValidationReport {
    bool pass = false;
    bool nonneg_ok = false;
    bool amp_ok = false;
    bool deriv_ok = false;
    double min_a = 0.0;
    double worst_amp_ratio = 0.0;   // max over lattice of a / bound
    double worst_deriv_ratio = 0.0; // max of (|a_t|+|a_x|) / bound
    double amp_witness_t = 0.0, amp_witness_x = 0.0;
    double deriv_witness_t = 0.0, deriv_witness_x = 0.0;
};

/** Samples a, a_t, a_x on a lattice and reports the worst-case ratios
 *  against the decay-hypothesis bounds. Dense sampling with a reported
 *  margin is the testable surrogate for the continuum inequalities. */
ValidationReport validate_bounds(const DampingModel& model, const HypothesisSpec& hypothesis,
                                 const LatticeSpec& lattice = {});

} // namespace delab

#endif
