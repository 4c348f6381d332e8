#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nehari/nehari_solver.hpp"
#include "support.hpp"

using namespace nehari;
using Catch::Approx;
using testing_support::make_toy;
using testing_support::random_field;

namespace {

struct Coarse {
    ProblemData pd;
    EmbeddingConstants K;
    ExtremalResult ext;
};

// n = 33 version of the reference problem with its extremal pair.
const Coarse& coarse() {
    static const Coarse c = [] {
        Coarse c;
        c.pd = testing_support::reference_problem(GrowthLaw::power(2.0), 1.0, 0.0, 33);
        c.K = estimate_constants(c.pd, 2);
        c.ext = extremal_pair(c.pd, c.K.S_p, testing_support::extremal_options(2, 1));
        return c;
    }();
    return c;
}

SolveOptions solve_opts(const Coarse& c) {
    SolveOptions o;
    o.threads = 2;
    o.constants = c.K;
    return o;
}

}

// ℐ(tu) = t² - (μ/3)t³ + t⁴/8 on the toy ray
TEST_CASE("toy reports") {
    const auto toy = make_toy();
    const auto pd = toy.pd.with_mu(2.5);
    const auto probes = coordinate_norms(pd);
    const auto minus = finish_report(toy.u, 1.0, Branch::Minus, pd, probes, {});
    const auto plus = finish_report(toy.u, 4.0, Branch::Plus, pd, probes, {});
    CHECK(minus.energy == Approx(1.0 - 2.5 / 3.0 + 0.125).epsilon(1e-10));
    CHECK(plus.energy == Approx(16.0 - 2.5 * 64.0 / 3.0 + 32.0).epsilon(1e-10));
    CHECK(minus.branch == Branch::Minus);
    CHECK(plus.branch == Branch::Plus);
    CHECK(plus.energy < minus.energy);
    CHECK(minus.qa_norm == Approx(1.0).epsilon(1e-12));
    CHECK(plus.qa_norm == Approx(4.0).epsilon(1e-12));
    CHECK(minus.t_projection == 1.0);
}

TEST_CASE("residual") {
    const auto& c = coarse();
    const auto pd = c.pd.with_mu(3.0);
    CHECK(residual(Field(pd.grid), pd) == 0.0);
    const auto u = random_field(pd.grid, 5);
    const double r = residual(u, pd);
    CHECK(r > 0.0);
    // brute force through directional derivatives along e_i
    double brute = 0.0;
    Field e(pd.grid);
    for (std::size_t i = 0; i < e.size(); ++i) {
        e[i] = 1.0;
        brute = std::max(brute, std::abs(energy_derivative(u, e, pd)) / luxemburg_norm(e, pd));
        e[i] = 0.0;
    }
    CHECK(r == Approx(brute).epsilon(1e-12));
}

TEST_CASE("closed-form bounds for the quadratic law") {
    const auto& c = coarse();
    const auto pd = c.pd.with_mu(6.0);
    const double X = 2.0 / (6.0 * std::pow(c.K.S_q, 3) * pd.pots.a_inf_norm);
    CHECK(c_mu(pd, c.K.S_q) == Approx(X).epsilon(1e-14));
    CHECK(D_mu(pd, c.K.S_q) == Approx(X * X / 6.0).epsilon(1e-14));
    CHECK(lambda_star(pd, c.K.S_p, 0.7, 10.0) == Approx(1.0 / (6.0 * 0.7 * std::pow(c.K.S_p, 4))).epsilon(1e-14));
    CHECK(lambda_star(pd, c.K.S_p, 0.7, 1e-9) == 1e-9);
    CHECK(v_lower_bound(pd, c.K.S_p) == Approx(1.0 / (c.K.S_p * c.K.S_p)).epsilon(1e-14));
    CHECK(v_lower_bound(pd.with_lambda(0.25), c.K.S_p) == Approx(2.0 * v_lower_bound(pd, c.K.S_p)).epsilon(1e-14));
}

TEST_CASE("both branches at 1.25 mu_n") {
    const auto& c = coarse();
    const auto pd = c.pd.with_mu(1.25 * c.ext.mu_n);
    const auto seeds = default_seeds(pd.grid, c.ext.minimizer_n, 1);
    const auto opt = solve_opts(c);
    const auto minus = minimize_branch(pd, Branch::Minus, seeds, opt, c.ext.minimizer_n);
    const auto plus = minimize_branch(pd, Branch::Plus, seeds, opt, c.ext.minimizer_n);
    CHECK(minus.converged);
    CHECK(plus.converged);
    CHECK(minus.branch == Branch::Minus);
    CHECK(plus.branch == Branch::Plus);
    CHECK(minus.residual <= minus.resid_tol);
    CHECK(plus.energy < minus.energy);
    CHECK(minus.energy >= minus.certificates.D_mu_bound);
    CHECK(minus.norm >= minus.certificates.c_mu_bound);
    CHECK(plus.norm >= v_lower_bound(pd, c.K.S_p));
    CHECK(minus.seed_energies.size() == seeds.size());
    // the reported field sits on the Nehari set
    CHECK(std::abs(Ray(minus.field, pd).nehari(1.0)) <= 1e-9 * energy_scale(minus.field, pd));
    // μ̂_e ≈ 1.06 μ̂_n here, so μ > μ̂_e and the Plus level is negative
    REQUIRE(pd.mu > c.ext.mu_e);
    CHECK(plus.energy < 0.0);
    // every seed ends on the same branch and no seed beats the reported level
    for (double e : minus.seed_energies) CHECK(e >= minus.energy);

    SolveOptions o1 = opt;
    o1.threads = 1;
    const auto again = minimize_branch(pd, Branch::Minus, seeds, o1, c.ext.minimizer_n);
    CHECK(again.energy == minus.energy);
    CHECK(again.field.values == minus.field.values);
}

TEST_CASE("sign diagnostics on the toy ray") {
    const auto toy = make_toy();
    const double mu_e = 3.0 / std::sqrt(2.0);
    auto plus_report = [&](double mu) {
        const auto pd = toy.pd.with_mu(mu);
        const auto roots = nehari_roots(Ray(toy.u, pd));
        return std::make_pair(pd, finish_report(toy.u, *roots.t_plus, Branch::Plus, pd, coordinate_norms(pd), {}));
    };
    {
        const auto [pd, rep] = plus_report(2.1);
        const auto d = sign_diagnostics(pd, rep, mu_e);
        CHECK(d.expected == EnergySign::Positive);
        CHECK(d.observed == EnergySign::Positive);
        CHECK(d.agrees);
    }
    {
        const auto [pd, rep] = plus_report(2.5);
        const auto d = sign_diagnostics(pd, rep, mu_e);
        CHECK(d.expected == EnergySign::Negative);
        CHECK(d.agrees);
    }
    {
        const auto [pd, rep] = plus_report(mu_e);
        CHECK(std::abs(rep.energy) < 1e-10);
        const auto d = sign_diagnostics(pd, rep, mu_e);
        CHECK(d.expected == EnergySign::Zero);
        CHECK(d.observed == EnergySign::Zero);
    }
    {
        // a wrong μ̂_e is reported as disagreement, not thrown
        const auto [pd, rep] = plus_report(2.5);
        CHECK_FALSE(sign_diagnostics(pd, rep, 3.0).agrees);
        auto minus = rep;
        minus.requested = Branch::Minus;
        CHECK_THROWS_AS(sign_diagnostics(pd, minus, mu_e), InvalidRegime);
    }
}

TEST_CASE("nonexistence certificate") {
    const auto toy = make_toy();
    const auto pd = toy.pd.with_mu(1.5);
    const auto cert = nonexistence_check(pd, 2.0, 1, toy.u);
    CHECK(cert.min_margin == Approx(0.5).epsilon(1e-9));
    CHECK(cert.positive);
    CHECK(cert.argmin == 0);
    CHECK_THROWS_AS(nonexistence_check(toy.pd.with_mu(2.0), 2.0, 10, toy.u), InvalidRegime);

    const auto& c = coarse();
    const auto below = c.pd.with_mu(0.9 * c.ext.mu_n);
    const auto cc = nonexistence_check(below, c.ext.mu_n, 300, c.ext.minimizer_n, 1, 2);
    CHECK(cc.positive);
    CHECK(cc.samples == 300);
    CHECK(cc.min_margin == Approx(0.1 * c.ext.mu_n).epsilon(1e-6));
    // same answer on one thread
    CHECK(nonexistence_check(below, c.ext.mu_n, 300, c.ext.minimizer_n, 1, 1).min_margin == cc.min_margin);
}

TEST_CASE("no admissible seed below mu_n") {
    const auto& c = coarse();
    const auto pd = c.pd.with_mu(0.5 * c.ext.mu_n);
    CHECK_THROWS_AS(minimize_branch(pd, Branch::Minus, default_seeds(pd.grid, c.ext.minimizer_n), {}, c.ext.minimizer_n),
                    NoAdmissibleSeed);
    CHECK_THROWS_AS(minimize_branch(pd, Branch::Zero, {c.ext.minimizer_n}), InvalidRegime);
}

TEST_CASE("admissible seed rescue") {
    const auto& c = coarse();
    const auto pd = c.pd.with_mu(1.05 * c.ext.mu_n);
    const Field bad = standard_seed(pd.grid, 1, 1);
    REQUIRE(lambda_n(bad, pd) > pd.mu);
    const auto z = admissible_seed(bad, pd, c.ext.minimizer_n);
    REQUIRE(z.has_value());
    CHECK(lambda_n(*z, pd) < pd.mu);
    CHECK_FALSE(admissible_seed(bad, pd, Field{}).has_value());
}

TEST_CASE("continuation toward mu_n") {
    const auto& c = coarse();
    const auto pd = c.pd;
    const auto res = degenerate_continuation(pd, ContinuationTarget::MuToMuN, c.ext.mu_n, c.ext.minimizer_n, 4, solve_opts(c));
    REQUIRE(res.steps.size() == 4);
    for (std::size_t k = 1; k < res.steps.size(); ++k) {
        CHECK(res.steps[k].mu < res.steps[k - 1].mu);
        CHECK(res.steps[k].gap < res.steps[k - 1].gap);
    }
    for (const auto& st : res.steps) CHECK(st.branch == Branch::Minus);
    CHECK(res.mu_final == Approx(c.ext.mu_n).epsilon(1e-6));
    CHECK(res.final_report.branch == Branch::Zero);
    CHECK_THROWS_AS(degenerate_continuation(pd, ContinuationTarget::MuToMuN, c.ext.mu_n, c.ext.minimizer_n, 2), NonPositiveInput);
}

TEST_CASE("Minus solutions stay off the degenerate set for lambda below lambda_star") {
    const auto& c = coarse();
    const double mu = 1.25 * c.ext.mu_n;
    const auto pd = c.pd.with_mu(mu);
    const auto opt = solve_opts(c);
    const auto ref = minimize_branch(pd, Branch::Minus, default_seeds(pd.grid, c.ext.minimizer_n), opt, c.ext.minimizer_n);
    const double ls = lambda_star(pd, c.K.S_p, ref.energy, 1.0);
    REQUIRE(ls > 0.0);
    REQUIRE(ls <= 1.0);
    for (double f : {0.5, 0.9}) {
        const auto pl = pd.with_lambda(f * ls);
        if (!(lambda_n(c.ext.minimizer_n, pl) < mu)) continue;   // μ must stay above μ̂_n(λ)
        const auto rep = minimize_branch(pl, Branch::Minus, {c.ext.minimizer_n}, opt, c.ext.minimizer_n);
        CHECK(rep.branch == Branch::Minus);
        CHECK(rep.classification_margin > 1e-8);
    }
}

TEST_CASE("sweep trends") {
    const auto& c = coarse();
    SolveOptions opt = solve_opts(c);
    const auto rows = asymptotic_sweep(c.pd, SweepDirection::MuToInfinity, {2.0, 5.0, 10.0}, 0.0, c.K, opt, testing_support::extremal_options(1, 1));
    REQUIRE(rows.size() == 3);
    for (const auto& t : sweep_trends(rows, SweepDirection::MuToInfinity)) {
        INFO(t.name << ": " << t.detail);
        CHECK(t.passed);
    }
}
