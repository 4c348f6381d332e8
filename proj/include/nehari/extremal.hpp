#ifndef NEHARI_EXTREMAL_HPP
#define NEHARI_EXTREMAL_HPP

// μ_n(λ) = inf Λ_n, μ_e(λ) = inf Λ_e, estimated by multistart descent.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "embedding.hpp"
#include "fibering.hpp"
#include "optimize.hpp"
#include "parallel.hpp"

namespace nehari {

enum class Which { N, E };

inline double lambda_n(const Field& u, const ProblemData& pd) {
    Ray ray(u, pd);
    return ray.Qn(ray.t_crit());
}
inline double lambda_e(const Field& u, const ProblemData& pd) {
    Ray ray(u, pd);
    return ray.Qe(ray.s_crit());
}

// ∇Λ at u, through the envelope identity ∇Λ(u) = t ∇R(tu) with t the
// minimizing point of the fiber.
inline std::vector<double> lambda_gradient(const Field& u, const ProblemData& pd, Which which, double t) {
    const Field w = u.scaled(t);
    const double Cw = weighted_q_power(w, pd.pots.a, pd.q);
    const auto gP = lp_power_gradient(w, pd.p);
    const auto gC = weighted_q_power_gradient(w, pd.pots.a, pd.q);
    std::vector<double> out(u.size());
    if (which == Which::N) {
        const auto gd = mod_diag_gradient(w, pd);
        const double R = (ray_mod_diag(make_ray(w, pd), pd.law, 1.0) + pd.lambda * lp_power(w, pd.p)) / Cw;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = t * (gd[i] + pd.lambda * gP[i] - R * gC[i]) / Cw;
    } else {
        const auto gJ = modular_gradient(w, pd);
        const double R = pd.q * (modular(w, pd) + pd.lambda / pd.p * lp_power(w, pd.p)) / Cw;
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = t * (pd.q * (gJ[i] + pd.lambda / pd.p * gP[i]) - R * gC[i]) / Cw;
    }
    return out;
}

// Deterministic uniform [0,1) from a 64-bit engine, independent of the
// standard library's distribution implementations.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline Field gaussian_bump(const BoxGrid& g, double cx, double cy, double width, double amp = 1.0) {
    return Field::from_function(g, [&](double x, double y) {
        const double dx = x - cx, dy = g.dim == 2 ? y - cy : 0.0;
        return amp * std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
    });
}

inline Field random_bumps(const BoxGrid& g, std::uint64_t seed, bool allow_negative) {
    std::mt19937_64 rng(seed);
    Field u(g);
    const double L = g.half_width;
    for (int k = 0; k < 6; ++k) {
        const double cx = (unit_uniform(rng) - 0.5) * L;
        const double cy = (unit_uniform(rng) - 0.5) * L;
        const double w = L * (0.08 + 0.25 * unit_uniform(rng));
        double amp = 0.2 + unit_uniform(rng);
        if (allow_negative && k % 3 == 2) amp = -0.6 * amp;
        const Field b = gaussian_bump(g, cx, cy, w, amp);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += b[i];
    }
    return u;
}

// Restart k: 0 gaussian bump, 1 two-bump, 2 random positive, 3 sign-changing,
// then further random positive draws.
inline Field standard_seed(const BoxGrid& g, int k, std::uint64_t seed) {
    const double L = g.half_width;
    switch (k) {
        case 0: return gaussian_bump(g, 0.0, 0.0, L / 4.0);
        case 1: {
            Field a = gaussian_bump(g, -L / 3.0, 0.0, L / 8.0);
            const Field b = gaussian_bump(g, L / 3.0, 0.0, L / 8.0);
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
            return a;
        }
        case 3: {
            Field a = gaussian_bump(g, 0.0, 0.0, L / 4.0);
            const Field b = gaussian_bump(g, L / 2.5, 0.0, L / 10.0, 0.7);
            for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
            return a;
        }
        default: return random_bumps(g, seed + static_cast<std::uint64_t>(k) * 0x9E3779B97F4A7C15ull, false);
    }
}

struct ExtremalOptions {
    int restarts = 4;
    int threads = 1;
    std::uint64_t seed = 1;
    DescentOptions descent{500, 1e-10, 3, 8, 1e-2, 1e-4, 40};
    std::vector<Field> warm;   // tried before the standard seeds
};

struct ExtremalBranch {
    double value = 0;
    Field minimizer;           // ‖·‖ = 1
    double spread = 0;
    std::vector<double> per_start;
};

inline HomogeneousObjective lambda_objective(const ProblemData& pd, Which which, std::shared_ptr<double> t_hint) {
    HomogeneousObjective obj;
    obj.value = [&pd, which, t_hint](const Field& z) -> std::optional<double> {
        Ray ray(z, pd);
        const double t = which == Which::N ? ray.t_crit({}, *t_hint) : ray.s_crit({}, *t_hint);
        const double v = which == Which::N ? ray.Qn(t) : ray.Qe(t);
        if (!std::isfinite(v)) return std::nullopt;
        return v;
    };
    obj.gradient = [&pd, which, t_hint](const Field& z) {
        Ray ray(z, pd);
        const double t = which == Which::N ? ray.t_crit({}, *t_hint) : ray.s_crit({}, *t_hint);
        *t_hint = t;
        return lambda_gradient(z, pd, which, t);
    };
    return obj;
}

inline ExtremalBranch minimize_extremal(const ProblemData& pd, Which which, const ExtremalOptions& opt = {}) {
    if (opt.restarts < 3) throw NonPositiveInput("minimize_extremal needs at least 3 restarts");
    std::vector<Field> seeds = opt.warm;
    for (int k = 0; k < opt.restarts; ++k) seeds.push_back(standard_seed(pd.grid, k, opt.seed));
    std::vector<DescentResult> runs(seeds.size());
    parallel_for(seeds.size(), opt.threads, [&](std::size_t k) {
        auto hint = std::make_shared<double>(1.0);
        {   // start the hint at the seed's own critical point
            Field z = seeds[k];
            const double n = detail::norm2(z.values);
            for (auto& x : z.values) x /= n;
            Ray ray(z, pd);
            *hint = which == Which::N ? ray.t_crit() : ray.s_crit();
        }
        runs[k] = minimize_homogeneous(lambda_objective(pd, which, hint), seeds[k], opt.descent);
    });
    ExtremalBranch out;
    std::size_t best = 0;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        out.per_start.push_back(runs[k].value);
        if (runs[k].value < runs[best].value) best = k;
    }
    out.value = runs[best].value;
    out.minimizer = runs[best].z.scaled(1.0 / luxemburg_norm(runs[best].z, pd));
    const auto [lo, hi] = std::minmax_element(out.per_start.begin(), out.per_start.end());
    out.spread = *hi - *lo;
    return out;
}

// Positive floor for Λ_n: min of the bounds for ‖𝗍(u)u‖ <= 1 and > 1.
inline double lower_floor(const ProblemData& pd, double S_p) {
    const double ell = pd.ell(), m = pd.m_idx(), q = pd.q, p = pd.p;
    const double ar = pd.a_r_norm();
    const double c1 = ell / (std::pow(S_p, q) * ar);
    const double C = (p - ell) / (q - ell) * std::pow((q - m) / (p - q), (p - q) / (p - ell));
    const double c2 = C * std::pow(pd.lambda, (q - ell) / (p - ell)) * std::pow(S_p, -ell * (p - q) / (p - ell)) / ar;
    return std::min(c1, c2);
}

struct ExtremalResult {
    double lambda = 0;
    double mu_n = 0, mu_e = 0;
    Field minimizer_n, minimizer_e;
    double spread_n = 0, spread_e = 0;
    double lower_floor = 0;
};

inline ExtremalResult extremal_pair(const ProblemData& pd, double S_p, const ExtremalOptions& opt = {}) {
    ExtremalResult r;
    r.lambda = pd.lambda;
    const auto n = minimize_extremal(pd, Which::N, opt);
    ExtremalOptions oe = opt;
    oe.warm.insert(oe.warm.begin(), n.minimizer);
    const auto e = minimize_extremal(pd, Which::E, oe);
    r.mu_n = n.value;
    r.mu_e = e.value;
    r.minimizer_n = n.minimizer;
    r.minimizer_e = e.minimizer;
    r.spread_n = n.spread;
    r.spread_e = e.spread;
    r.lower_floor = lower_floor(pd, S_p);
    return r;
}

// One result per λ (ascending), each warm-started from its predecessor.
inline std::vector<ExtremalResult> extremal_curve(const ProblemData& base, std::vector<double> lambdas, double S_p,
                                                  const ExtremalOptions& opt = {}) {
    std::sort(lambdas.begin(), lambdas.end());
    std::vector<ExtremalResult> out;
    for (double l : lambdas) {
        ExtremalOptions o = opt;
        if (!out.empty()) {
            o.warm.push_back(out.back().minimizer_n);
            o.warm.push_back(out.back().minimizer_e);
        }
        const ProblemData pd = base.with_lambda(l);
        out.push_back(extremal_pair(pd, S_p, o));
    }
    return out;
}

}

#endif
