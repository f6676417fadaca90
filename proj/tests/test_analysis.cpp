#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "delab/analysis.hpp"
#include "delab/solver.hpp"

using namespace delab;

namespace {

FieldState state_from_rs(const std::vector<double>& r, const std::vector<double>& s) {
    FieldState f;
    f.r = r;
    f.s = s;
    f.u.assign(r.size(), 1.0);
    f.v.assign(r.size(), 0.0);
    f.c.assign(r.size(), 1.0);
    return f;
}

double phi_brute(const FieldState& f) {
    double best = 0.0;
    for (double rv : f.r)
        for (double sv : f.s) best = std::max(best, std::fabs(rv + sv));
    return best;
}

double psi_brute(const FieldState& f) {
    double best = 0.0;
    for (double sv : f.s)
        for (double rv : f.r) best = std::max(best, std::fabs(sv - rv));
    return best;
}

} // namespace

TEST_CASE("phi and psi norms at hand-checked states") {
    // r in [-1, -0.8], s in [0.9, 1.2]
    auto f = state_from_rs({-1.0, -0.9, -0.8}, {0.9, 1.05, 1.2});
    CHECK(phi_norm(f) == doctest::Approx(0.4));
    CHECK(phi_norm(f) == phi_brute(f));
    CHECK(psi_norm(f) == doctest::Approx(2.2));
    CHECK(psi_norm(f) == psi_brute(f));

    auto g = state_from_rs({-1.0, -1.0}, {1.0, 1.0});
    CHECK(phi_norm(g) == 0.0);
    CHECK(psi_norm(g) == 2.0);

    auto h = state_from_rs({0.0, 0.0}, {0.5, 0.5});
    CHECK(phi_norm(h) == doctest::Approx(0.5));

    auto single = state_from_rs({-1.0}, {1.0});
    CHECK(psi_norm(single) == 2.0);
}

TEST_CASE("norms equal the pairwise brute force on random grids") {
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<int> size_dist(1, 64);
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        int n = size_dist(rng);
        std::vector<double> r(n), s(n);
        for (int i = 0; i < n; ++i) {
            r[i] = val(rng);
            s[i] = r[i] + std::fabs(val(rng)) + 1e-3; // keep s > r
        }
        auto f = state_from_rs(r, s);
        CHECK(phi_norm(f) == phi_brute(f));
        CHECK(psi_norm(f) == psi_brute(f));
    }
}

TEST_CASE("fit_scaling recovers synthetic laws exactly") {
    std::vector<std::pair<double, double>> power;
    std::vector<std::pair<double, double>> expo;
    for (double eps : {0.05, 0.1, 0.2, 0.4}) {
        power.emplace_back(eps, std::pow(eps, -2.0));
        expo.emplace_back(eps, std::exp(3.0 / eps));
    }
    auto pfit = fit_scaling_samples(power, FitRegime::PowerLaw);
    CHECK(pfit.fitted_exponent == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(pfit.r_squared == doctest::Approx(1.0));
    auto efit = fit_scaling_samples(expo, FitRegime::ExpLaw);
    CHECK(efit.fitted_log_coefficient == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(efit.r_squared == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_scaling_samples({{0.1, 5.0}, {0.2, 2.0}}, FitRegime::PowerLaw),
                    InsufficientData);
}

TEST_CASE("initial_min_weighted_gradient matches the reference family") {
    InitialDataFamily fam;
    fam.epsilon = 0.1;
    fam.psi = Shape::gaussian();
    double witness = 0.0;
    double w = initial_min_weighted_gradient(fam, PressureLaw(3.0), &witness);
    CHECK(w == doctest::Approx(-0.1 * std::sqrt(2.0) * std::exp(-0.5)).epsilon(1e-6));
    CHECK(std::fabs(witness) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("detect_blowup classifies a constant state as horizon") {
    RunConfig cfg;
    cfg.gamma = 2.0;
    cfg.model = DampingModel::none();
    cfg.family.epsilon = 0.0;
    cfg.grid = Grid1D{-8.0, 8.0, 64};
    cfg.t_max = 5.0;
    auto rep = detect_blowup(cfg, 2);
    CHECK(rep.event == BlowupClass::HorizonReached);
    CHECK(rep.t_star_estimate == doctest::Approx(5.0));
    CHECK(rep.extrapolation.size() == 2);
}

TEST_CASE("detect_blowup tracks the exact Riccati lifespan") {
    RunConfig cfg;
    cfg.gamma = 3.0;
    cfg.model = DampingModel::none();
    cfg.family.epsilon = 0.1;
    cfg.family.psi = Shape::gaussian();
    cfg.grid = Grid1D{-20.0, 20.0, 1000};
    cfg.t_max = 13.0;
    cfg.gradient_threshold = 0.25;
    auto rep = detect_blowup(cfg, 2);
    CHECK(rep.event == BlowupClass::GradientBlowup);
    double exact = 10.0 * std::exp(0.5) / std::sqrt(2.0);
    CHECK(rep.t_star_estimate == doctest::Approx(exact).epsilon(0.02));
    CHECK(rep.bounded_confirmed.all());
    CHECK(rep.delta1 > 0.9);
    CHECK(rep.m1 < 2.0);
}

TEST_CASE("check_apriori passes on a damped smooth run") {
    RunConfig cfg;
    cfg.gamma = 2.0;
    cfg.model = DampingModel::power_time(1.0, 1.0);
    cfg.family.epsilon = 0.1;
    cfg.family.psi = Shape::gaussian();
    cfg.grid = Grid1D{-12.0, 12.0, 500};
    cfg.t_max = 4.0;
    auto traj = run(cfg);
    auto rep = check_apriori(traj, PressureLaw(2.0), cfg.model, 5.0);
    CHECK(rep.phi_monotone.applicable);
    CHECK(rep.phi_monotone.pass);
    CHECK(rep.psi_monotone.pass);
    CHECK(rep.u_box.applicable);
    CHECK(rep.u_box.pass);
    CHECK(rep.v_bound.pass);
    CHECK(rep.growth_envelope.applicable);
    CHECK(rep.growth_envelope.pass);
    CHECK(!rep.spatial_box.applicable);
    CHECK(rep.all_pass());
    CHECK(rep.delta1 < 1.0);
    CHECK(rep.m1 > 1.0);
}

TEST_CASE("check_apriori covers the spatial damping box") {
    RunConfig cfg;
    cfg.gamma = 2.0;
    cfg.model = DampingModel::space_power(1.0, 2.0);
    cfg.family.epsilon = 0.05;
    cfg.family.psi = Shape::gaussian();
    cfg.grid = Grid1D{-16.0, 16.0, 500};
    cfg.t_max = 6.0;
    auto traj = run(cfg);
    auto rep = check_apriori(traj, PressureLaw(2.0), cfg.model, 5.0);
    CHECK(rep.spatial_box.applicable);
    CHECK(rep.spatial_box.pass);
}

TEST_CASE("weighted-slope hypothesis thresholds") {
    PressureLaw law(2.0);
    Grid1D grid{-24.0, 24.0, 4000};

    SUBCASE("lambda = 0 predicts blow-up from any negative slope") {
        RunConfig cfg;
        cfg.gamma = 2.0;
        cfg.model = DampingModel::none();
        cfg.family.epsilon = 0.05;
        cfg.family.psi = Shape::gaussian();
        cfg.grid = grid;
        auto verdict = check_blowup_hypothesis(cfg, HypothesisVariant::WeightedSlope);
        CHECK(verdict.kind == HypothesisVerdict::Kind::PredictsBlowup);
        CHECK(!verdict.witness_set.empty());
    }

    SUBCASE("lambda = 2 at unit state needs slope below -4") {
        // theta_2(1) = 4 and c0 = 1, so the bound is r_x < -4.
        RunConfig cfg;
        cfg.gamma = 2.0;
        cfg.model = DampingModel::power_time(2.0, 1.0);
        cfg.family.epsilon = 1.0;
        cfg.family.delta0 = 0.5;
        cfg.grid = grid;

        cfg.family.psi = Shape::parse("gaussian*6"); // min slope -5.15
        auto steep = check_blowup_hypothesis(cfg, HypothesisVariant::WeightedSlope);
        CHECK(steep.kind == HypothesisVerdict::Kind::PredictsBlowup);
        CHECK(steep.threshold == doctest::Approx(-4.0).epsilon(1e-6));

        cfg.family.psi = Shape::parse("gaussian*4"); // min slope -3.43
        auto gentle = check_blowup_hypothesis(cfg, HypothesisVariant::WeightedSlope);
        CHECK(gentle.kind == HypothesisVerdict::Kind::NoPrediction);
    }

    SUBCASE("nonnegative slopes predict nothing") {
        RunConfig cfg;
        cfg.gamma = 2.0;
        cfg.model = DampingModel::none();
        cfg.family.epsilon = 0.1;
        cfg.family.psi = Shape::tanh_step();
        cfg.family.phi = Shape::zero();
        cfg.grid = grid;
        auto verdict = check_blowup_hypothesis(cfg, HypothesisVariant::WeightedSlope);
        CHECK(verdict.kind == HypothesisVerdict::Kind::NoPrediction);
        CHECK(verdict.witness_set.empty());
    }

    SUBCASE("range guards") {
        RunConfig cfg;
        cfg.gamma = 3.5;
        cfg.model = DampingModel::none();
        cfg.family.epsilon = 0.1;
        cfg.grid = grid;
        CHECK_THROWS_AS(check_blowup_hypothesis(cfg, HypothesisVariant::WeightedSlope),
                        std::domain_error);
        cfg.gamma = 2.0;
        cfg.model = DampingModel::power_time(1.0, 0.5);
        CHECK_THROWS_AS(check_blowup_hypothesis(cfg, HypothesisVariant::WeightedSlope),
                        std::domain_error);
        cfg.model = DampingModel::power_time(3.0, 1.0);
        CHECK_THROWS_AS(check_blowup_hypothesis(cfg, HypothesisVariant::WeightedSlope),
                        std::domain_error);
    }
}

TEST_CASE("K-threshold hypothesis") {
    Grid1D grid{-24.0, 24.0, 4000};
    RunConfig cfg;
    cfg.gamma = 2.0;
    cfg.model = DampingModel::power_time(1.0, 1.0);
    cfg.family.epsilon = 0.15;
    cfg.family.psi = Shape::gaussian();
    cfg.grid = grid;

    auto verdict = check_blowup_hypothesis(cfg, HypothesisVariant::KThreshold);
    CHECK(verdict.kind == HypothesisVerdict::Kind::PredictsBlowup);

    // Gradient above the default K: no prediction.
    cfg.family.epsilon = 0.01;
    auto gentle = check_blowup_hypothesis(cfg, HypothesisVariant::KThreshold);
    CHECK(gentle.kind == HypothesisVerdict::Kind::NoPrediction);

    // Smallness condition violated by large data.
    cfg.family.epsilon = 2.0;
    cfg.family.delta0 = 0.01;
    auto big = check_blowup_hypothesis(cfg, HypothesisVariant::KThreshold);
    CHECK(big.kind == HypothesisVerdict::Kind::HypothesisViolated);

    // Decay regime violated: mu = 1 with lambda > 2 is the global branch.
    cfg.family.epsilon = 0.1;
    cfg.family.delta0 = 0.05;
    cfg.model = DampingModel::power_time(3.0, 1.0);
    auto global_branch = check_blowup_hypothesis(cfg, HypothesisVariant::KThreshold);
    CHECK(global_branch.kind == HypothesisVerdict::Kind::HypothesisViolated);
}

TEST_CASE("space-time hypothesis") {
    Grid1D grid{-24.0, 24.0, 4000};
    RunConfig cfg;
    cfg.gamma = 2.0;
    cfg.model = DampingModel::space_power(1.0, 2.0);
    cfg.family.epsilon = 0.2;
    cfg.family.psi = Shape::gaussian();
    cfg.grid = grid;
    auto verdict = check_blowup_hypothesis(cfg, HypothesisVariant::SpaceTimeK);
    CHECK(verdict.kind == HypothesisVerdict::Kind::PredictsBlowup);

    cfg.model = DampingModel::space_power(1.0, 0.5);
    auto slow = check_blowup_hypothesis(cfg, HypothesisVariant::SpaceTimeK);
    CHECK(slow.kind == HypothesisVerdict::Kind::HypothesisViolated);
}

TEST_CASE("lifespan sweep reproduces the lambda = 0 scaling") {
    RunConfig base;
    base.gamma = 3.0;
    base.model = DampingModel::none();
    base.family.epsilon = 0.1;
    base.family.psi = Shape::gaussian();
    base.grid = Grid1D{-24.0, 24.0, 1200}; // dx = 0.04 preserved per epsilon
    base.t_max = 13.0;
    base.gradient_threshold = 0.25;
    SweepOptions opts;
    opts.mesh_levels = 2;
    opts.t_max_factor = 1.5;
    std::vector<double> epsilons{0.1, 0.2, 0.4};
    auto sweep = estimate_lifespan_sweep(base, epsilons, opts);
    REQUIRE(sweep.size() == 3);
    double scale = std::sqrt(2.0) * std::exp(-0.5);
    for (const auto& entry : sweep) {
        REQUIRE(entry.ok);
        CHECK(entry.report.event == BlowupClass::GradientBlowup);
        double exact = 1.0 / (entry.epsilon * scale);
        CHECK(entry.report.t_star_estimate == doctest::Approx(exact).epsilon(0.03));
    }
    auto fit = fit_scaling(sweep, FitRegime::PowerLaw);
    CHECK(fit.fitted_exponent == doctest::Approx(-1.0).epsilon(0.03));
    CHECK(fit.r_squared > 0.999);

    CHECK(estimate_lifespan_sweep(base, {}, opts).empty());
    CHECK_THROWS_AS(estimate_lifespan_sweep(base, {0.2, 0.1}, opts), std::invalid_argument);
}
