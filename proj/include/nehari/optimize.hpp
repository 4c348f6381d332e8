#ifndef NEHARI_OPTIMIZE_HPP
#define NEHARI_OPTIMIZE_HPP

// Descent for objectives that are constant along rays (F(cz) = F(z)).
// Iterates stay on the Euclidean unit sphere; the step direction is
// limited-memory BFGS, falling back to the projected gradient, with Armijo
// backtracking. Objectives may reject a point (inadmissible) by returning
// nullopt, which the line search treats as a failed trial.

#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "grid.hpp"
#include "numerics.hpp"

namespace nehari {

struct DescentOptions {
    int max_iter = 500;
    double rel_tol = 1e-10;      // relative decrease counted as "no progress"
    int patience = 3;            // consecutive no-progress iterations before stopping
    int memory = 8;
    double first_step = 1e-2;    // initial η = first_step·‖z‖/‖∇F‖
    double armijo = 1e-4;
    int max_backtrack = 40;
};

struct DescentResult {
    Field z;
    double value = 0;
    std::vector<double> gradient;
    int iterations = 0;
    bool stalled = false;        // line search could not make progress
    bool hit_max_iter = false;
};

struct HomogeneousObjective {
    std::function<std::optional<double>(const Field&)> value;
    // gradient at a point previously accepted by value()
    std::function<std::vector<double>(const Field&)> gradient;
    // optional extra stopping test, called after each accepted step
    std::function<bool(const Field&, double, const std::vector<double>&, bool small_decrease)> done;
};

namespace detail {
inline double norm2(const std::vector<double>& x) { return std::sqrt(compensated_dot(x, x)); }
inline void project_tangent(std::vector<double>& g, const std::vector<double>& z) {
    const double c = compensated_dot(g, z);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= c * z[i];
}
}

inline DescentResult minimize_homogeneous(const HomogeneousObjective& obj, const Field& z0,
                                          const DescentOptions& opt = {}) {
    using detail::norm2;
    DescentResult res;
    Field z = z0;
    {
        const double n = norm2(z.values);
        if (!(n > 0.0)) throw NonPositiveInput("descent needs a nonzero start");
        for (auto& x : z.values) x /= n;
    }
    auto f0 = obj.value(z);
    if (!f0) throw NonPositiveInput("descent start is not admissible");
    double f = *f0;
    std::vector<double> g = obj.gradient(z);
    detail::project_tangent(g, z.values);

    struct Pair { std::vector<double> s, y; double rho; };
    std::deque<Pair> mem;
    int quiet = 0;
    const std::size_t n = z.size();

    for (int it = 0; it < opt.max_iter; ++it) {
        res.iterations = it + 1;
        // two-loop recursion
        std::vector<double> d(g);
        std::vector<double> alpha(mem.size());
        for (std::size_t k = mem.size(); k-- > 0;) {
            alpha[k] = mem[k].rho * compensated_dot(mem[k].s, d);
            for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[k] * mem[k].y[i];
        }
        if (!mem.empty()) {
            const auto& last = mem.back();
            const double gamma = compensated_dot(last.s, last.y) / compensated_dot(last.y, last.y);
            for (auto& x : d) x *= gamma;
        }
        for (std::size_t k = 0; k < mem.size(); ++k) {
            const double beta = mem[k].rho * compensated_dot(mem[k].y, d);
            for (std::size_t i = 0; i < n; ++i) d[i] += (alpha[k] - beta) * mem[k].s[i];
        }
        for (auto& x : d) x = -x;
        detail::project_tangent(d, z.values);
        double slope = compensated_dot(g, d);
        const double gn = norm2(g);
        if (!(gn > 0.0)) break;
        if (!(slope < 0.0)) {
            mem.clear();
            d = g;
            for (auto& x : d) x = -x;
            slope = -gn * gn;
        }
        double step = mem.empty() ? opt.first_step / norm2(d) : 1.0;

        bool accepted = false;
        Field trial(z.grid);
        double ft = f;
        for (int b = 0; b < opt.max_backtrack; ++b) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = z[i] + step * d[i];
            const double tn = norm2(trial.values);
            for (auto& x : trial.values) x /= tn;
            auto v = obj.value(trial);
            if (v && std::isfinite(*v) && *v <= f + opt.armijo * step * slope) {
                ft = *v;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (!mem.empty()) { mem.clear(); continue; }
            res.stalled = true;
            break;
        }
        std::vector<double> gt = obj.gradient(trial);
        detail::project_tangent(gt, trial.values);
        Pair pr;
        pr.s.resize(n);
        pr.y.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            pr.s[i] = trial[i] - z[i];
            pr.y[i] = gt[i] - g[i];
        }
        const double sy = compensated_dot(pr.s, pr.y);
        if (sy > 1e-12 * norm2(pr.s) * norm2(pr.y)) {
            pr.rho = 1.0 / sy;
            mem.push_back(std::move(pr));
            if (static_cast<int>(mem.size()) > opt.memory) mem.pop_front();
        }
        const double decrease = (f - ft) / std::max(std::abs(f), 1e-300);
        z = std::move(trial);
        f = ft;
        g = std::move(gt);
        const bool small = decrease < opt.rel_tol;
        quiet = small ? quiet + 1 : 0;
        if (obj.done && obj.done(z, f, g, small)) break;
        if (quiet >= opt.patience) break;
        if (it + 1 == opt.max_iter) res.hit_max_iter = true;
    }
    res.z = std::move(z);
    res.value = f;
    res.gradient = std::move(g);
    return res;
}

}

#endif
