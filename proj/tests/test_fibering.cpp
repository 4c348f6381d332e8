#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "support.hpp"

using namespace nehari;
using Catch::Approx;
using testing_support::make_toy;
using testing_support::random_field;

// On the toy ray Q_n(t) = 2/t + t/2 and Q_e(t) = 3/t + 3t/8.
TEST_CASE("toy calibration") {
    const auto toy = make_toy();
    const auto b = breakdown(toy.u, toy.pd);
    CHECK(b.mod_diag == Approx(2.0).epsilon(1e-12));
    CHECK(b.modular == Approx(1.0).epsilon(1e-12));
    CHECK(b.p_term == Approx(0.5).epsilon(1e-12));
    CHECK(b.q_term == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("toy Rayleigh quotients and critical points") {
    const auto toy = make_toy();
    const Ray ray(toy.u, toy.pd);
    CHECK(ray.Qn(1.0) == Approx(2.5).epsilon(1e-12));
    CHECK(ray.Qe(1.0) == Approx(3.375).epsilon(1e-12));
    CHECK(ray.t_crit() == Approx(2.0).epsilon(1e-9));
    CHECK(lambda_n(toy.u, toy.pd) == Approx(2.0).epsilon(1e-12));
    CHECK(ray.s_crit() == Approx(std::sqrt(8.0)).epsilon(1e-9));
    CHECK(lambda_e(toy.u, toy.pd) == Approx(3.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(fibering_t(toy.u.scaled(2.0), toy.pd) == Approx(1.0).epsilon(1e-9));
    CHECK(ray.Qn_second(2.0) == Approx(0.5).epsilon(1e-9));
    CHECK(ray.Qn_prime(2.0) == Approx(0.0).margin(1e-12));
    CHECK(ray.Qn_prime(1.0) == Approx(-1.5).epsilon(1e-12));

    const auto doubled = toy.pd.with_lambda(2.0);
    CHECK(fibering_t(toy.u, doubled) == Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(lambda_n(toy.u, doubled) == Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("toy Nehari roots and classification") {
    const auto toy = make_toy();
    const auto pd = toy.pd.with_mu(2.5);
    const Ray ray(toy.u, pd);
    const auto r = nehari_roots(ray);
    REQUIRE(r.status == RootStatus::TwoRoots);
    CHECK(*r.t_minus == Approx(1.0).epsilon(1e-9));
    CHECK(*r.t_plus == Approx(4.0).epsilon(1e-9));
    CHECK(classify(ray, *r.t_minus).branch == Branch::Minus);
    CHECK(classify(ray, *r.t_plus).branch == Branch::Plus);
    CHECK(classify(ray, *r.t_minus).consistent);
    CHECK(classify(ray, *r.t_plus).consistent);
    // ℐ″(tu)(tu,tu) = 2t² - 5t³ + 1.5t⁴
    CHECK(ray.second(1.0) == Approx(-1.5).epsilon(1e-10));
    CHECK(ray.second(4.0) == Approx(96.0).epsilon(1e-10));
    CHECK(ray.nehari(1.0) == Approx(0.0).margin(1e-12));
    CHECK_THROWS_AS(classify(ray, 2.0), NotOnNehari);

    const auto pd2 = toy.pd.with_mu(2.0);
    const Ray ray2(toy.u, pd2);
    const auto r2 = nehari_roots(ray2);
    CHECK(r2.status == RootStatus::Degenerate);
    CHECK(*r2.t_minus == Approx(2.0).epsilon(1e-9));
    CHECK(classify(ray2, 2.0).branch == Branch::Zero);

    const auto pd3 = toy.pd.with_mu(1.5);
    CHECK(nehari_roots(Ray(toy.u, pd3)).status == RootStatus::Empty);
}

TEST_CASE("R_n - R_e identity") {
    const auto pd = testing_support::reference_problem(GrowthLaw::power_sum(2.0, 2.5));
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto u = random_field(pd.grid, 400 + k, k % 2 == 0, 0.2 + 0.2 * static_cast<double>(k));
        const auto b = breakdown(u, pd);
        const double expect = (b.mod_diag - pd.q * b.modular + pd.lambda * (1.0 - pd.q / pd.p) * b.p_term) / b.q_term;
        CHECK(rayleigh_n(u, pd) - rayleigh_e(u, pd) == Approx(expect).epsilon(1e-10).margin(1e-12));
    }
}

TEST_CASE("K and L are increasing along rays") {
    for (const auto& law : {GrowthLaw::power(2.0), GrowthLaw::power_sum(2.0, 2.5), GrowthLaw::power_log(2.0)}) {
        const auto pd = testing_support::reference_problem(law);
        for (std::uint64_t k = 0; k < 5; ++k) {
            const Ray ray(random_field(pd.grid, 500 + k), pd);
            double pk = -INFINITY, pl = -INFINITY;
            for (double t : log_samples(1e-3, 1e3, 80)) {
                const double K = ray.K(t), L = ray.L(t);
                CHECK(K >= pk - 1e-12 * std::abs(pk));
                CHECK(L >= pl - 1e-12 * std::abs(pl));
                pk = K;
                pl = L;
            }
        }
    }
}

TEST_CASE("Rayleigh quotients are 0-homogeneous in the extremal sense") {
    const auto pd = testing_support::reference_problem(GrowthLaw::power_sum(2.0, 2.5));
    const auto u = random_field(pd.grid, 9);
    for (double c : {0.01, 0.5, 3.0, 70.0}) {
        CHECK(lambda_n(u.scaled(c), pd) == Approx(lambda_n(u, pd)).epsilon(1e-9));
        CHECK(lambda_e(u.scaled(c), pd) == Approx(lambda_e(u, pd)).epsilon(1e-9));
        CHECK(fibering_t(u.scaled(c), pd) * c == Approx(fibering_t(u, pd)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(Ray(Field(pd.grid), pd), ZeroDenominator);
}

TEST_CASE("analytic Q_n'' against finite differences") {
    const auto pd = testing_support::reference_problem(GrowthLaw::power_sum(2.0, 2.5));
    for (std::uint64_t k = 0; k < 5; ++k) {
        const Ray ray(random_field(pd.grid, 600 + k), pd);
        const double tc = ray.t_crit();
        for (double t : {0.3 * tc, tc, 4.0 * tc}) CHECK(ray.Qn_second(t) == Approx(ray.Qn_second_fd(t)).epsilon(1e-6));
        const double h = 1e-5 * tc;
        CHECK(ray.Qn_prime(tc) == Approx(0.0).margin(1e-8 * ray.Qn(tc) / tc));
        CHECK(ray.Qn_prime(2 * tc) == Approx((ray.Qn(2 * tc + h) - ray.Qn(2 * tc - h)) / (2 * h)).epsilon(1e-6));
        const double sc = ray.s_crit();
        CHECK(ray.Qe_prime(sc) == Approx(0.0).margin(1e-8 * ray.Qe(sc) / sc));
    }
}

TEST_CASE("roots close in on the critical point") {
    const auto base = testing_support::reference_problem();
    const auto u = random_field(base.grid, 77, true);
    const Ray r0(u, base);
    const double tc = r0.t_crit(), L = r0.Qn(tc);
    double prev_gap = INFINITY;
    for (double d : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const auto pd = base.with_mu(L * (1 + d));
        const auto r = nehari_roots(Ray(u, pd));
        REQUIRE(r.status == RootStatus::TwoRoots);
        CHECK(*r.t_minus < tc);
        CHECK(*r.t_plus > tc);
        const double gap = *r.t_plus - *r.t_minus;
        CHECK(gap < prev_gap);
        prev_gap = gap;
        CHECK(nehari_roots(u, base.with_mu(L * (1 - d))).status == RootStatus::Empty);
    }
    CHECK(prev_gap < 0.05 * tc);
    CHECK(nehari_roots(u, base.with_mu(L * (1 + 1e-12))).status == RootStatus::Degenerate);
}

TEST_CASE("fibering profile") {
    const auto pd = testing_support::reference_problem();
    const auto fp = fibering_profile(random_field(pd.grid, 3, true), pd, 50);
    CHECK(luxemburg_norm(fp.u, pd) == Approx(1.0).epsilon(1e-12));
    CHECK(fp.samples.size() == 50);
    CHECK(fp.lambda_n < fp.lambda_e);
    for (const auto& s : fp.samples) {
        CHECK(s.Qn >= fp.lambda_n * (1 - 1e-12));
        CHECK(s.Qe >= fp.lambda_e * (1 - 1e-12));
        CHECK((s.t < fp.t_crit ? s.Qn_prime <= 0.0 : s.Qn_prime >= -1e-12));
    }
}
