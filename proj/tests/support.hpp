#ifndef NEHARI_TEST_SUPPORT_HPP
#define NEHARI_TEST_SUPPORT_HPP

// Shared fixtures: the calibrated single-ray problem and the 65-node
// reference problem.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "nehari/extremal.hpp"

namespace testing_support {

using namespace nehari;

// Power 2, q=3, p=4, λ=1, constant V and a chosen so that the returned
// field has 𝒥′(u)u = 2, ‖u‖_p^p = 0.5, ‖u‖_{q,a}^q = 1.
struct Toy {
    ProblemData pd;
    Field u;
    double kappa = 0, a = 0;
};

inline Toy make_toy(double lambda = 1.0, double mu = 0.0) {
    const BoxGrid g(1, 8.0, 65);
    const double s = 0.4;
    const auto pairs = build_pair_list(g, s, default_padding(g));
    for (double width = 1.0; width <= 4.0; width *= 1.25) {
        const Field u0 = Field::from_function(g, [&](double x, double) { return std::exp(-x * x / (2 * width * width)); });
        double B0 = 0, W = 0, T = 0, S = 0;
        for (std::size_t i = 0; i < u0.size(); ++i) {
            B0 += g.cell() * std::pow(u0[i], 4);
            W += g.cell() * u0[i] * u0[i];
            T += g.cell() * std::pow(u0[i], 3);
        }
        for (const auto& e : pairs.entries) {
            const double d = (u0[static_cast<std::size_t>(e.a)] - (e.b < 0 ? 0.0 : u0[static_cast<std::size_t>(e.b)])) * e.inv_ds;
            S += e.w * d * d;
        }
        const double c = std::pow(0.5 / B0, 0.25);
        const double kappa = (2.0 / (c * c) - S) / W;
        if (!(kappa > 0.05)) continue;
        const double a = 1.0 / (c * c * c * T);
        Toy toy;
        toy.kappa = kappa;
        toy.a = a;
        const auto pots = make_potentials(g, {PotentialKind::Constant, kappa, 1.0, {}}, {PotentialKind::Constant, a, 1.0, {}});
        toy.pd = make_problem(GrowthLaw::power(2.0), s, g, pots, 3.0, 4.0, lambda, mu);
        toy.u = u0.scaled(c);
        return toy;
    }
    throw std::runtime_error("toy calibration failed");
}

// 1D, n=65, L=3, s=0.4, V = 1 + x², a = gaussian σ=1, q=3, p=4.
inline ProblemData reference_problem(const GrowthLaw& law = GrowthLaw::power(2.0), double lambda = 1.0,
                                     double mu = 0.0, int n = 65) {
    const BoxGrid g(1, 3.0, n);
    const auto pots = make_potentials(g, {PotentialKind::Quadratic, 1.0, 1.0, {}}, {PotentialKind::Gaussian, 1.0, 1.0, {}});
    return make_problem(law, 0.4, g, pots, 3.0, 4.0, lambda, mu);
}

// Uniform nodal values in [-amp, amp] (or [0, amp] when positive).
inline Field random_field(const BoxGrid& g, std::uint64_t seed, bool positive = false, double amp = 1.0) {
    std::mt19937_64 rng(seed);
    Field u(g);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double r = unit_uniform(rng);
        u[i] = positive ? amp * (0.05 + 0.95 * r) : amp * (2.0 * r - 1.0);
    }
    return u;
}

inline ExtremalOptions extremal_options(int threads, std::uint64_t seed) {
    ExtremalOptions o;
    o.threads = threads;
    o.seed = seed;
    return o;
}

inline bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}

#endif
