#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "support.hpp"

using namespace nehari;
using Catch::Approx;
using testing_support::random_field;

namespace {

ProblemData small_problem(const GrowthLaw& law, double mu = 1.0, int padding = 3) {
    const BoxGrid g(1, 4.0, 9);
    const auto pots = make_potentials(g, {PotentialKind::Constant, 1.0, 1.0, {}}, {PotentialKind::Constant, 1.0, 1.0, {}});
    return make_problem(law, 0.4, g, pots, 3.0, 4.0, 1.0, mu, padding);
}

// Brute force over ordered pairs of the padded lattice.
double modular_oracle(const Field& u, const ProblemData& pd) {
    const auto& g = pd.grid;
    const int P = pd.padding();
    const double h = g.spacing();
    double sum = 0.0;
    for (int i = -P; i < g.n + P; ++i)
        for (int j = -P; j < g.n + P; ++j) {
            if (i == j) continue;
            const bool ii = i >= 0 && i < g.n, jj = j >= 0 && j < g.n;
            if (!ii && !jj) continue;
            const double d = std::abs(i - j) * h;
            const double D = (u.at({i, 0}) - u.at({j, 0})) / std::pow(d, pd.s);
            sum += h * h / d * pd.law.Phi(std::abs(D));
        }
    for (std::size_t i = 0; i < u.size(); ++i) sum += h * pd.pots.V[i] * pd.law.Phi(std::abs(u[i]));
    return sum;
}

Field direction(const BoxGrid& g, std::uint64_t seed) { return random_field(g, seed); }

double fd_directional(const std::function<double(const Field&)>& f, const Field& u, const Field& v, double h) {
    Field a = u, b = u;
    for (std::size_t i = 0; i < u.size(); ++i) {
        a[i] += h * v[i];
        b[i] -= h * v[i];
    }
    return (f(a) - f(b)) / (2 * h);
}

double dot(const std::vector<double>& g, const Field& v) {
    double s = 0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g[i] * v[i];
    return s;
}

}

TEST_CASE("modular matches the double-loop oracle") {
    for (const auto& law : {GrowthLaw::power(2.0), GrowthLaw::power_sum(2.0, 3.0)}) {
        const auto pd = small_problem(law);
        for (std::uint64_t k = 0; k < 5; ++k) {
            const auto u = random_field(pd.grid, k);
            CHECK(modular(u, pd) == Approx(modular_oracle(u, pd)).epsilon(1e-12));
        }
    }
    // hand value: single spike, power 2, no padding
    const auto pd = small_problem(GrowthLaw::power(2.0), 1.0, 0);
    Field e(pd.grid);
    e[4] = 1.0;
    double pairs = 0;
    for (int j = 0; j < 9; ++j)
        if (j != 4) pairs += 2.0 * 0.5 / std::pow(std::abs(j - 4), 1.0 + 0.8);
    CHECK(modular(e, pd) == Approx(pairs + 0.5).epsilon(1e-13));
}

TEST_CASE("modular growth and homogeneity") {
    const auto pd = small_problem(GrowthLaw::power_sum(2.0, 3.0));
    const auto p2 = small_problem(GrowthLaw::power(2.0));
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto u = random_field(pd.grid, 30 + k);
        CHECK(modular(u.scaled(2.0), pd) <= std::pow(2.0, pd.m_idx()) * modular(u, pd) * (1 + 1e-12));
        CHECK(modular(u.scaled(2.0), pd) >= std::pow(2.0, pd.ell()) * modular(u, pd) * (1 - 1e-12));
        CHECK(modular(u.scaled(3.0), p2) == Approx(9.0 * modular(u, p2)).epsilon(1e-13));
        // 𝒥′(u)u = 2𝒥(u) for the quadratic law
        CHECK(modular_derivative(u, u, p2) == Approx(2.0 * modular(u, p2)).epsilon(1e-13));
        // ℓ𝒥 <= 𝒥′(u)u <= m𝒥 and 𝒥″ between (ℓ-1) and (m-1) times 𝒥′u
        const double J = modular(u, pd), dJ = modular_derivative(u, u, pd), d2 = modular_second_diag(u, pd);
        CHECK(dJ >= pd.ell() * J * (1 - 1e-12));
        CHECK(dJ <= pd.m_idx() * J * (1 + 1e-12));
        CHECK(d2 >= (pd.ell() - 1) * dJ * (1 - 1e-12));
        CHECK(d2 <= (pd.m_idx() - 1) * dJ * (1 + 1e-12));
    }
}

TEST_CASE("modular derivative matches finite differences") {
    for (const auto& law : {GrowthLaw::power(2.0), GrowthLaw::power_sum(2.0, 3.0), GrowthLaw::power_log(2.0)}) {
        const auto pd = small_problem(law);
        for (std::uint64_t k = 0; k < 5; ++k) {
            const auto u = random_field(pd.grid, k), v = direction(pd.grid, 100 + k);
            const double fd = fd_directional([&](const Field& w) { return modular(w, pd); }, u, v, 1e-5);
            CHECK(modular_derivative(u, v, pd) == Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("second derivative along the ray") {
    const auto pd = small_problem(GrowthLaw::power_sum(2.0, 3.0), 2.0);
    for (std::uint64_t k = 0; k < 5; ++k) {
        const auto u = random_field(pd.grid, 50 + k);
        const double h = 1e-4;
        const double fd = (energy(u.scaled(1 + h), pd) - 2 * energy(u, pd) + energy(u.scaled(1 - h), pd)) / (h * h);
        CHECK(energy_second_diag(u, pd) == Approx(fd).epsilon(1e-4));
        const double fd1 = (energy(u.scaled(1 + h), pd) - energy(u.scaled(1 - h), pd)) / (2 * h);
        CHECK(energy_derivative(u, u, pd) == Approx(fd1).epsilon(1e-6));
    }
}

TEST_CASE("energy at zero and with mu = 0") {
    const auto pd = small_problem(GrowthLaw::power(2.0), 0.0);
    CHECK(energy(Field(pd.grid), pd) == 0.0);
    for (std::uint64_t k = 0; k < 20; ++k) CHECK(energy(random_field(pd.grid, k), pd) >= 0.0);
    const auto b = breakdown(random_field(pd.grid, 3), pd.with_mu(2.0));
    CHECK(energy_from(b, pd.with_mu(2.0)) == Approx(energy(random_field(pd.grid, 3), pd.with_mu(2.0))));
    const auto j = to_json(b);
    CHECK(j.size() == 5);
    CHECK(j["q_term"].get<double>() == b.q_term);
}

TEST_CASE("Luxemburg norm oracles") {
    const auto pd = small_problem(GrowthLaw::power(2.0));
    CHECK(luxemburg_norm(Field(pd.grid), pd) == 0.0);
    const auto u = random_field(pd.grid, 7);
    // for Φ = t²/2 the norm is √𝒥(u)
    const auto u4 = u.scaled(2.0 / std::sqrt(modular(u, pd)));
    CHECK(modular(u4, pd) == Approx(4.0).epsilon(1e-13));
    CHECK(luxemburg_norm(u4, pd) == Approx(2.0).epsilon(1e-13));
    const auto u1 = u.scaled(1.0 / std::sqrt(modular(u, pd)));
    CHECK(luxemburg_norm(u1, pd) == Approx(1.0).epsilon(1e-13));
    CHECK(luxemburg_norm(u.scaled(-3.0), pd) == Approx(3.0 * luxemburg_norm(u, pd)).epsilon(1e-13));
}

TEST_CASE("Luxemburg sandwich on random fields") {
    const auto pd = small_problem(GrowthLaw::power_sum(2.0, 3.0));
    for (std::uint64_t k = 0; k < 100; ++k) {
        const auto u = random_field(pd.grid, 1000 + k, false, 0.05 + 0.1 * static_cast<double>(k));
        const double J = modular(u, pd), n = luxemburg_norm(u, pd);
        CHECK(modular(u.scaled(1.0 / n), pd) == Approx(1.0).epsilon(1e-10));
        const double lo = std::min(std::pow(n, pd.ell()), std::pow(n, pd.m_idx()));
        const double hi = std::max(std::pow(n, pd.ell()), std::pow(n, pd.m_idx()));
        CHECK(J >= lo * (1 - 1e-10));
        CHECK(J <= hi * (1 + 1e-10));
    }
}

TEST_CASE("second-derivative identities on the Nehari set") {
    for (const auto& law : {GrowthLaw::power(2.0), GrowthLaw::power_sum(2.0, 2.5)}) {
        auto pd = small_problem(law, 0.0);
        for (std::uint64_t k = 0; k < 10; ++k) {
            const auto u = random_field(pd.grid, 200 + k, true);
            pd.mu = 1.5 * lambda_n(u, pd);
            const auto roots = nehari_roots(Ray(u, pd));
            REQUIRE(roots.status == RootStatus::TwoRoots);
            for (double t : {*roots.t_minus, *roots.t_plus}) {
                const auto w = u.scaled(t);
                const double ref = energy_second_diag(w, pd);
                const double scale = Ray(w, pd).second_scale(1.0);
                CHECK(std::abs(second_diag_q_form(w, pd) - ref) <= 1e-9 * scale);
                CHECK(std::abs(second_diag_p_form(w, pd) - ref) <= 1e-9 * scale);
            }
        }
    }
}

TEST_CASE("analytic gradients match finite differences") {
    auto pd = small_problem(GrowthLaw::power_sum(2.0, 3.0), 1.3);
    const auto u = random_field(pd.grid, 11);
    const double n = luxemburg_norm(u, pd);
    for (std::uint64_t k = 0; k < 4; ++k) {
        const auto v = direction(pd.grid, 300 + k);
        auto fd = [&](auto f) { return fd_directional(f, u, v, 1e-6); };
        CHECK(dot(modular_gradient(u, pd), v) == Approx(fd([&](const Field& w) { return modular(w, pd); })).epsilon(1e-6));
        CHECK(dot(mod_diag_gradient(u, pd), v) ==
              Approx(fd([&](const Field& w) { return ray_mod_diag(make_ray(w, pd), pd.law, 1.0); })).epsilon(1e-6));
        CHECK(dot(energy_gradient(u, pd), v) == Approx(fd([&](const Field& w) { return energy(w, pd); })).epsilon(1e-6));
        CHECK(dot(energy_gradient(u, pd), v) == Approx(energy_derivative(u, v, pd)).epsilon(1e-12));
        CHECK(dot(lp_power_gradient(u, pd.p), v) == Approx(fd([&](const Field& w) { return lp_power(w, pd.p); })).epsilon(1e-6));
        CHECK(dot(weighted_q_power_gradient(u, pd.pots.a, pd.q), v) ==
              Approx(fd([&](const Field& w) { return weighted_q_power(w, pd.pots.a, pd.q); })).epsilon(1e-6));
        CHECK(dot(luxemburg_gradient(u, pd, n), v) ==
              Approx(fd([&](const Field& w) { return luxemburg_norm(w, pd); })).epsilon(1e-5));
    }
}

TEST_CASE("coordinate norms") {
    const auto pd = small_problem(GrowthLaw::power(2.0));
    const auto cn = coordinate_norms(pd);
    REQUIRE(cn.size() == pd.grid.size());
    Field e(pd.grid);
    e[0] = 1.0;
    CHECK(cn[0] == Approx(std::sqrt(modular(e, pd))).epsilon(1e-13));
    // mirror symmetry of the box
    CHECK(cn[3] == Approx(cn[5]).epsilon(1e-12));
}
