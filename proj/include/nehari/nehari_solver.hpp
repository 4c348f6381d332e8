#ifndef NEHARI_NEHARI_SOLVER_HPP
#define NEHARI_NEHARI_SOLVER_HPP

// Minimization of ℐ over 𝒩⁻ and 𝒩⁺ through the fibering projection
// z ↦ t^±(z)z, plus the analytic bounds and the sampled certificates
// built around it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "extremal.hpp"

namespace nehari {

struct EmbeddingConstants {
    double S_p = 0;   // sup ‖u‖_p/‖u‖
    double S_q = 0;   // sup ‖u‖_q/‖u‖
};

inline EmbeddingConstants estimate_constants(const ProblemData& pd, int threads = 1) {
    return {embedding_constant(pd, pd.p, threads).value, embedding_constant(pd, pd.q, threads).value};
}

// c_μ: every u ∈ 𝒩⁻ has ‖u‖ >= c_μ.
inline double c_mu(const ProblemData& pd, double S_q) {
    const double ell = pd.ell(), m = pd.m_idx(), q = pd.q;
    const double X = ell / (pd.mu * std::pow(S_q, q) * pd.pots.a_inf_norm);
    return std::min(std::pow(X, 1.0 / (q - ell)), std::pow(X, 1.0 / (q - m)));
}

// D_μ: ℰ⁻ >= D_μ > 0.
inline double D_mu(const ProblemData& pd, double S_q) {
    const double ell = pd.ell(), m = pd.m_idx(), q = pd.q, p = pd.p;
    const double c = c_mu(pd, S_q);
    return (p * (q - m) - m * (q - ell)) / (p * q) * std::min(std::pow(c, ell), std::pow(c, m));
}

// λ_* from a reference level ℰ⁻_{λ0,μ0}.
inline double lambda_star(const ProblemData& pd, double S_p, double E_minus_ref, double lambda0) {
    const double ell = pd.ell(), m = pd.m_idx(), q = pd.q, p = pd.p;
    const double base = (p * (q - m) - m * (q - ell)) / (p * q * E_minus_ref);
    const double tail = (q - m) / ((p - q) * std::pow(S_p, p));
    return std::min({std::pow(base, (p - ell) / ell) * tail, std::pow(base, (p - m) / m) * tail, lambda0});
}

// Lower bound for ‖v‖ on 𝒩⁺; grows like λ^{-1/(p-m)} as λ → 0.
inline double v_lower_bound(const ProblemData& pd, double S_p) {
    const double X = (pd.q - pd.m_idx()) / (pd.lambda * (pd.p - pd.q) * std::pow(S_p, pd.p));
    return std::min(std::pow(X, 1.0 / (pd.p - pd.ell())), std::pow(X, 1.0 / (pd.p - pd.m_idx())));
}

// max_i |ℐ′(u)e_i| / ‖e_i‖ over the coordinate basis.
inline double residual(const Field& u, const ProblemData& pd, const std::vector<double>& probe_norms) {
    if (u.is_zero()) return 0.0;
    const auto g = energy_gradient(u, pd);
    double r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) r = std::max(r, std::abs(g[i]) / probe_norms[i]);
    return std::isfinite(r) ? r : 0.0;
}
inline double residual(const Field& u, const ProblemData& pd) {
    if (u.is_zero()) return 0.0;
    return residual(u, pd, coordinate_norms(pd));
}

// 𝒥(u) + (μ/q)‖u‖_{q,a}^q + (λ/p)‖u‖_p^p, the size of the terms in ℐ(u).
inline double energy_scale(const Field& u, const ProblemData& pd) {
    const auto r = make_ray(u, pd);
    return ray_modular(r, pd.law, 1.0) + std::abs(pd.mu) / pd.q * r.C + pd.lambda / pd.p * r.B;
}

struct SolveOptions {
    int max_iter = 2000;
    double decrease_tol = 1e-11;
    double resid_rel = 1e-6;        // resid_tol = resid_rel·(1 + |ℰ|)
    double norm_guard = 1e6;
    int patience = 25;
    int threads = 1;
    std::optional<EmbeddingConstants> constants;
};

struct SolutionReport {
    Branch requested = Branch::Minus;
    Field field;
    Branch branch = Branch::Zero;
    double energy = 0;
    double residual = 0;
    double resid_tol = 0;
    double t_projection = 0;
    double classification_margin = 0;   // |ℐ″(u)(u,u)| / scale
    double norm = 0;                    // Luxemburg
    double qa_norm = 0;                 // ‖u‖_{q,a}
    int iterations = 0;
    int seed_index = -1;
    bool converged = false;
    std::vector<double> seed_energies;
    struct {
        double D_mu_bound = std::numeric_limits<double>::quiet_NaN();
        double c_mu_bound = std::numeric_limits<double>::quiet_NaN();
        std::string sign_vs_mu_e;
    } certificates;
};

namespace detail {

inline std::optional<double> branch_root(const Ray& ray, Branch b, double hint) {
    const auto roots = nehari_roots(ray, {}, hint);
    if (roots.status != RootStatus::TwoRoots) return std::nullopt;
    return b == Branch::Minus ? roots.t_minus : roots.t_plus;
}

inline bool admissible(const Field& z, const ProblemData& pd) {
    if (z.is_zero()) return false;
    try {
        Ray ray(z, pd);
        return ray.Qn(ray.t_crit()) < pd.mu && !degenerate_band(pd.mu, ray.Qn(ray.t_crit()));
    } catch (const Error&) {
        return false;
    }
}

}

// Seeds with Λ_n >= μ are blended toward `rescue` (the extremal minimizer).
inline std::optional<Field> admissible_seed(const Field& seed, const ProblemData& pd, const Field& rescue) {
    if (detail::admissible(seed, pd)) return seed;
    if (rescue.size() != seed.size()) return std::nullopt;
    const double ns = detail::norm2(seed.values), nr = detail::norm2(rescue.values);
    for (double th : {0.25, 0.5, 0.75, 0.9, 1.0}) {
        Field z(seed.grid);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = (1.0 - th) * seed[i] / ns + th * rescue[i] / nr;
        if (detail::admissible(z, pd)) return z;
    }
    return std::nullopt;
}

inline SolutionReport finish_report(const Field& z, double t, Branch requested, const ProblemData& pd,
                                    const std::vector<double>& probe_norms, const SolveOptions& opt) {
    SolutionReport rep;
    rep.requested = requested;
    rep.field = z.scaled(t);
    Ray ray(rep.field, pd);
    rep.t_projection = t;
    rep.energy = ray.energy(1.0);
    rep.residual = residual(rep.field, pd, probe_norms);
    rep.resid_tol = opt.resid_rel * (1.0 + std::abs(rep.energy));
    rep.converged = rep.residual <= rep.resid_tol;
    const auto cls = classify(ray, 1.0, 1e-7);
    rep.branch = cls.branch;
    rep.classification_margin = std::abs(cls.second) / ray.second_scale(1.0);
    rep.norm = luxemburg_norm(ray.data(), pd.law);
    rep.qa_norm = std::pow(ray.C(), 1.0 / pd.q);
    if (opt.constants) {
        rep.certificates.D_mu_bound = D_mu(pd, opt.constants->S_q);
        rep.certificates.c_mu_bound = c_mu(pd, opt.constants->S_q);
    }
    return rep;
}

inline SolutionReport minimize_branch(const ProblemData& pd, Branch branch, const std::vector<Field>& seeds,
                                      const SolveOptions& opt = {}, const Field& rescue = {}) {
    if (branch == Branch::Zero) throw InvalidRegime("minimize_branch needs Minus or Plus");
    std::vector<Field> starts;
    std::vector<int> origin;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        if (seeds[k].is_zero()) continue;
        if (auto z = admissible_seed(seeds[k], pd, rescue)) {
            starts.push_back(*z);
            origin.push_back(static_cast<int>(k));
        }
    }
    if (starts.empty()) throw NoAdmissibleSeed("every seed has Lambda_n >= mu and the rescue blend failed");
    const auto probe_norms = coordinate_norms(pd);

    struct Run { Field z; double t = 0; int iterations = 0; };
    std::vector<Run> runs(starts.size());
    parallel_for(starts.size(), opt.threads, [&](std::size_t k) {
        double hint = 1.0;
        HomogeneousObjective obj;
        obj.value = [&](const Field& z) -> std::optional<double> {
            try {
                Ray ray(z, pd);
                const auto t = detail::branch_root(ray, branch, hint);
                if (!t) return std::nullopt;
                return ray.energy(*t);
            } catch (const Error&) {
                return std::nullopt;
            }
        };
        obj.gradient = [&](const Field& z) {
            Ray ray(z, pd);
            const double t = *detail::branch_root(ray, branch, hint);
            hint = ray.t_crit({}, hint);
            auto g = energy_gradient(z.scaled(t), pd);
            for (auto& x : g) x *= t;
            return g;
        };
        obj.done = [&](const Field& z, double f, const std::vector<double>&, bool small) {
            Ray ray(z, pd);
            const double t = *detail::branch_root(ray, branch, hint);
            const Field u = z.scaled(t);
            if (luxemburg_norm(ray.data(), pd.law) * t > opt.norm_guard)
                throw ContinuationStall("branch iterate exceeded the norm guard");
            return small && residual(u, pd, probe_norms) <= opt.resid_rel * (1.0 + std::abs(f));
        };
        DescentOptions d;
        d.max_iter = opt.max_iter;
        d.rel_tol = opt.decrease_tol;
        d.patience = opt.patience;
        const auto res = minimize_homogeneous(obj, starts[k], d);
        Ray ray(res.z, pd);
        runs[k] = {res.z, *detail::branch_root(ray, branch, 1.0), res.iterations};
    });

    std::vector<SolutionReport> reps;
    for (const auto& r : runs) reps.push_back(finish_report(r.z, r.t, branch, pd, probe_norms, opt));
    std::size_t best = 0;
    for (std::size_t k = 1; k < reps.size(); ++k)
        if (reps[k].energy < reps[best].energy) best = k;
    SolutionReport out = reps[best];
    out.iterations = runs[best].iterations;
    out.seed_index = origin[best];
    for (const auto& r : reps) out.seed_energies.push_back(r.energy);
    return out;
}

// Seeds: the extremal minimizer first, then the standard bumps.
inline std::vector<Field> default_seeds(const BoxGrid& g, const Field& ustar, std::uint64_t seed = 1) {
    std::vector<Field> out;
    if (ustar.size() == g.size()) out.push_back(ustar);
    for (int k : {0, 1, 3}) out.push_back(standard_seed(g, k, seed));
    return out;
}

enum class EnergySign { Positive, Zero, Negative };

inline const char* to_string(EnergySign s) {
    switch (s) {
        case EnergySign::Positive: return "positive";
        case EnergySign::Zero: return "zero";
        case EnergySign::Negative: return "negative";
    }
    return "?";
}

struct SignDiagnostic {
    EnergySign expected = EnergySign::Zero;
    EnergySign observed = EnergySign::Zero;
    bool agrees = false;
    double mu_band = 0;       // |μ - μ̂_e| below this counts as μ = μ̂_e
    double energy_band = 0;   // |ℰ⁺| below this counts as zero
};

// Sign of ℰ⁺ against the position of μ relative to μ̂_e. Disagreement is a
// flag, not an error.
inline SignDiagnostic sign_diagnostics(const ProblemData& pd, const SolutionReport& rep, double mu_e_hat,
                                       double mu_band_rel = 1e-6, double energy_band_rel = 1e-5) {
    if (rep.requested != Branch::Plus) throw InvalidRegime("sign diagnostics apply to the Plus branch");
    SignDiagnostic d;
    d.mu_band = mu_band_rel * mu_e_hat;
    d.energy_band = energy_band_rel * energy_scale(rep.field, pd);
    if (std::abs(pd.mu - mu_e_hat) <= d.mu_band)
        d.expected = EnergySign::Zero;
    else
        d.expected = pd.mu < mu_e_hat ? EnergySign::Positive : EnergySign::Negative;
    if (std::abs(rep.energy) <= d.energy_band)
        d.observed = EnergySign::Zero;
    else
        d.observed = rep.energy > 0.0 ? EnergySign::Positive : EnergySign::Negative;
    d.agrees = d.expected == d.observed;
    return d;
}

struct NonexistenceCertificate {
    double mu = 0, mu_n_hat = 0;
    int samples = 0;
    double min_margin = 0;        // min over samples of Λ_n(u) - μ
    int argmin = -1;
    bool positive = false;
    std::string label = "sampled certificate, not a proof";
};

// Sample k: 0 is the extremal minimizer, 1..n/4 are perturbations of it,
// the rest are random bump fields (every third one sign-changing).
inline Field certificate_sample(const BoxGrid& g, const Field& ustar, int k, int count, std::uint64_t seed) {
    const std::uint64_t s = seed * 0x2545F4914F6CDD1Dull + static_cast<std::uint64_t>(k);
    const bool have = ustar.size() == g.size();
    if (have && k == 0) return ustar;
    if (have && k <= count / 4) {
        Field b = random_bumps(g, s, true);
        const double amp = 0.02 * (1 + k % 10) * detail::norm2(ustar.values) / detail::norm2(b.values);
        Field u = ustar;
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += amp * b[i];
        return u;
    }
    return random_bumps(g, s, k % 3 == 0);
}

inline NonexistenceCertificate nonexistence_check(const ProblemData& pd, double mu_n_hat, int samples,
                                                  const Field& ustar = {}, std::uint64_t seed = 1, int threads = 1) {
    if (pd.mu >= mu_n_hat) throw InvalidRegime("nonexistence check needs mu < mu_n");
    NonexistenceCertificate c;
    c.mu = pd.mu;
    c.mu_n_hat = mu_n_hat;
    c.samples = samples;
    std::vector<double> margin(static_cast<std::size_t>(samples), std::numeric_limits<double>::infinity());
    parallel_for(margin.size(), threads, [&](std::size_t k) {
        const Field u = certificate_sample(pd.grid, ustar, static_cast<int>(k), samples, seed);
        if (u.is_zero()) return;
        Ray ray(u, pd);
        const double tc = ray.t_crit();
        double lo = ray.Qn(tc);
        // the log grid can only confirm the minimum, never undercut it
        for (double t : log_samples(tc * 1e-3, tc * 1e3, 61)) lo = std::min(lo, ray.Qn(t));
        margin[k] = lo - pd.mu;
    });
    const auto it = std::min_element(margin.begin(), margin.end());
    c.min_margin = *it;
    c.argmin = static_cast<int>(it - margin.begin());
    c.positive = c.min_margin > 0.0;
    return c;
}

struct ContinuationStep {
    double mu = 0;
    double energy = 0;
    double t_minus = 0, t_plus = 0;   // roots on the ray of the Minus solution
    double gap = 0;
    double norm = 0;
    double residual = 0;
    Branch branch = Branch::Zero;
};

struct ContinuationResult {
    std::vector<ContinuationStep> steps;
    SolutionReport final_report;
    double mu_final = 0;
};

enum class ContinuationTarget { MuToMuN, LambdaToLambdaStar };

// MuToMuN: μ_k = μ̂_n(1 + 2^{-k}), k = 1..steps, Minus-branch solves
// warm-started from the previous one; the end point refines the Λ_n
// minimizer from the last direction and reports 𝗍u at μ = Λ_n(u).
// LambdaToLambdaStar: λ_k = λ_*(1 - 2^{-k}) at fixed μ.
inline ContinuationResult degenerate_continuation(const ProblemData& pd, ContinuationTarget target, double anchor,
                                                  const Field& ustar, int steps, const SolveOptions& opt = {}) {
    if (steps < 3) throw NonPositiveInput("continuation needs at least 3 steps");
    ContinuationResult out;
    Field warm = ustar;
    double prev_norm = 0.0;
    const auto probe_norms = coordinate_norms(pd);
    for (int k = 1; k <= steps; ++k) {
        const double f = std::ldexp(1.0, -k);
        const ProblemData pk =
            target == ContinuationTarget::MuToMuN ? pd.with_mu(anchor * (1.0 + f)) : pd.with_lambda(anchor * (1.0 - f));
        const auto rep = minimize_branch(pk, Branch::Minus, {warm}, opt, ustar);
        ContinuationStep st;
        st.mu = pk.mu;
        st.energy = rep.energy;
        st.norm = rep.norm;
        st.residual = rep.residual;
        st.branch = rep.branch;
        const auto roots = nehari_roots(Ray(rep.field, pk));
        if (roots.status == RootStatus::TwoRoots) {
            st.t_minus = *roots.t_minus;
            st.t_plus = *roots.t_plus;
        } else {
            st.t_minus = st.t_plus = roots.t_crit;
        }
        st.gap = std::abs(st.t_plus - st.t_minus);
        if (!std::isfinite(rep.norm) || rep.norm > opt.norm_guard || (prev_norm > 0.0 && rep.norm > 4.0 * prev_norm))
            throw ContinuationStall("Minus solutions diverge in norm along the continuation");
        prev_norm = rep.norm;
        out.steps.push_back(st);
        warm = rep.field;
        out.final_report = rep;
        out.mu_final = pk.mu;
    }
    if (target == ContinuationTarget::MuToMuN) {
        auto hint = std::make_shared<double>(fibering_t(warm, pd));
        DescentOptions d;
        d.max_iter = opt.max_iter;
        d.patience = 5;
        const auto res = minimize_homogeneous(lambda_objective(pd, Which::N, hint), warm, d);
        const ProblemData pf = pd.with_mu(res.value);
        Ray ray(res.z, pf);
        out.mu_final = res.value;
        out.final_report = finish_report(res.z, ray.t_crit(), Branch::Minus, pf, probe_norms, opt);
    }
    return out;
}

struct SweepRow {
    double lambda = 0, mu = 0;
    double mu_n_hat = 0, mu_e_hat = 0;
    SolutionReport minus, plus;
    double v_lower = std::numeric_limits<double>::quiet_NaN();
};

struct TrendCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

enum class SweepDirection { LambdaToZero, MuToInfinity };

// LambdaToZero: `values` are λ's and μ = mult·μ̂_n(λ).
// MuToInfinity: `values` are multipliers of μ̂_n(λ) at the base λ.
// Every cell uses the same seed list (the extremal minimizer plus the
// standard bumps), so cells are independent and run concurrently.
inline std::vector<SweepRow> asymptotic_sweep(const ProblemData& base, SweepDirection dir, const std::vector<double>& values,
                                              double mult, const EmbeddingConstants& K, const SolveOptions& opt = {},
                                              const ExtremalOptions& xopt = {}) {
    std::vector<SweepRow> rows(values.size());
    std::vector<ExtremalResult> ext(values.size());
    if (dir == SweepDirection::LambdaToZero) {
        std::vector<double> lambdas(values);
        const auto curve = extremal_curve(base, lambdas, K.S_p, xopt);
        for (std::size_t i = 0; i < values.size(); ++i)
            for (const auto& r : curve)
                if (r.lambda == values[i]) ext[i] = r;
    } else {
        const auto r = extremal_pair(base, K.S_p, xopt);
        std::fill(ext.begin(), ext.end(), r);
    }
    SolveOptions inner = opt;
    inner.threads = 1;
    inner.constants = K;
    parallel_for(values.size(), opt.threads, [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.lambda = dir == SweepDirection::LambdaToZero ? values[i] : base.lambda;
        row.mu_n_hat = ext[i].mu_n;
        row.mu_e_hat = ext[i].mu_e;
        row.mu = (dir == SweepDirection::LambdaToZero ? mult : values[i]) * ext[i].mu_n;
        const ProblemData pd = base.with_lambda(row.lambda).with_mu(row.mu);
        const auto seeds = default_seeds(pd.grid, ext[i].minimizer_n, xopt.seed);
        row.minus = minimize_branch(pd, Branch::Minus, seeds, inner, ext[i].minimizer_n);
        row.plus = minimize_branch(pd, Branch::Plus, seeds, inner, ext[i].minimizer_n);
        row.v_lower = v_lower_bound(pd, K.S_p);
    });
    return rows;
}

namespace detail {
inline std::string join_values(const std::vector<SweepRow>& rows, double (*get)(const SweepRow&)) {
    std::string s;
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s%.10g", s.empty() ? "" : ", ", get(r));
        s += buf;
    }
    return s;
}
}

inline std::vector<TrendCheck> sweep_trends(const std::vector<SweepRow>& rows, SweepDirection dir) {
    std::vector<TrendCheck> out;
    auto monotone = [&](const char* name, double (*get)(const SweepRow&), bool increasing) {
        bool ok = true;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double a = get(rows[i - 1]), b = get(rows[i]);
            ok = ok && (increasing ? b > a : b < a);
        }
        out.push_back({name, ok, detail::join_values(rows, get)});
    };
    if (dir == SweepDirection::LambdaToZero) {
        monotone("v_norm_increasing", [](const SweepRow& r) { return r.plus.norm; }, true);
        bool ok = true;
        std::string d;
        char buf[96];
        for (const auto& r : rows) {
            ok = ok && r.plus.norm >= r.v_lower;
            std::snprintf(buf, sizeof buf, "%s%.6g>=%.6g", d.empty() ? "" : ", ", r.plus.norm, r.v_lower);
            d += buf;
        }
        out.push_back({"v_norm_above_bound", ok, d});
    } else {
        monotone("E_minus_decreasing", [](const SweepRow& r) { return r.minus.energy; }, false);
        bool pos = std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.minus.energy > 0.0; });
        out.push_back({"E_minus_positive", pos, detail::join_values(rows, [](const SweepRow& r) { return r.minus.energy; })});
        monotone("u_norm_decreasing", [](const SweepRow& r) { return r.minus.norm; }, false);
        monotone("E_plus_decreasing", [](const SweepRow& r) { return r.plus.energy; }, false);
    }
    return out;
}

}

#endif
