#ifndef NEHARI_FUNCTIONALS_HPP
#define NEHARI_FUNCTIONALS_HPP

#include <cmath>
#include <memory>
#include <vector>

#include <json.hpp>

#include "grid.hpp"
#include "nfunction.hpp"

namespace nehari {

struct ProblemData {
    GrowthLaw law;
    double s = 0.5;
    BoxGrid grid;
    PotentialPair pots;
    double q = 3.0, p = 4.0;
    double lambda = 1.0, mu = 0.0;
    std::shared_ptr<const PairList> pairs;
    HypothesisReport hypotheses;

    ProblemData with_lambda(double l) const { ProblemData r(*this); r.lambda = l; return r; }
    ProblemData with_mu(double m) const { ProblemData r(*this); r.mu = m; return r; }
    double a_r_norm() const { return pots.a_r_norm(grid, q, p); }
    double ell() const { return law.ell(); }
    double m_idx() const { return law.m_idx(); }
    int padding() const { return pairs->padding; }
    bool validated() const { return hypotheses.all_passed(); }
};

// Law and potential hypotheses in one report: (φ1)-(φ4), Δ₂, (H1), (H2), (V0).
inline HypothesisReport full_check(const GrowthLaw& law, double s, int N, double q, double p,
                                   const PotentialPair& pots) {
    auto rep = check_hypotheses(law, s, N, q, p);
    const auto pc = check_potentials(pots);
    rep.items.push_back({"H2", pc.a_ok && p > q, "a > 0 on nodes, r = p/(p-q); " + pc.detail});
    rep.items.push_back({"V0", pc.V0_ok, pc.detail});
    return rep;
}

inline ProblemData make_problem(const GrowthLaw& law, double s, const BoxGrid& grid, const PotentialPair& pots,
                                double q, double p, double lambda, double mu, int padding = -1) {
    if (!(s > 0.0 && s <= 1.0)) throw NonPositiveInput("s must lie in (0, 1]");
    if (!(lambda > 0.0)) throw NonPositiveInput("lambda must be positive");
    if (pots.V.size() != grid.size() || pots.a.size() != grid.size())
        throw NonPositiveInput("potential arrays do not match grid");
    ProblemData pd;
    pd.law = law;
    pd.s = s;
    pd.grid = grid;
    pd.pots = pots;
    pd.q = q;
    pd.p = p;
    pd.lambda = lambda;
    pd.mu = mu;
    pd.pairs = std::make_shared<const PairList>(build_pair_list(grid, s, padding < 0 ? default_padding(grid) : padding));
    pd.hypotheses = full_check(law, s, grid.dim, q, p, pots);
    return pd;
}

// Every modular quantity along the ray t ↦ tu is a weighted sum over
// "atoms": |D_s u| on pairs (weight = folded pair weight) and |u_i| on
// nodes (weight = h^N V_i). Zero atoms are dropped.
struct RayData {
    std::vector<double> w, v;
    double B = 0;   // ‖u‖_p^p
    double C = 0;   // ‖u‖_{q,a}^q
};

inline RayData make_ray(const Field& u, const ProblemData& pd) {
    RayData r;
    const auto& E = pd.pairs->entries;
    r.w.reserve(E.size() + u.size());
    r.v.reserve(E.size() + u.size());
    for (const auto& e : E) {
        const double d = std::abs((u[e.a] - (e.b >= 0 ? u[e.b] : 0.0)) * e.inv_ds);
        if (d != 0.0) { r.w.push_back(e.w); r.v.push_back(d); }
    }
    const double c = pd.grid.cell();
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = std::abs(u[i]);
        if (a != 0.0) { r.w.push_back(c * pd.pots.V[i]); r.v.push_back(a); }
    }
    r.B = lp_power(u, pd.p);
    r.C = weighted_q_power(u, pd.pots.a, pd.q);
    return r;
}

template <class F>
inline double atom_sum(const RayData& r, F&& f) {
    CompensatedSum s;
    for (std::size_t k = 0; k < r.v.size(); ++k) s.add(r.w[k] * f(r.v[k]));
    return s.value();
}

// 𝒥(tu)
inline double ray_modular(const RayData& r, const GrowthLaw& law, double t) {
    return atom_sum(r, [&](double v) { return law.Phi(t * v); });
}
// 𝒥′(tu)(tu)
inline double ray_mod_diag(const RayData& r, const GrowthLaw& law, double t) {
    return atom_sum(r, [&](double v) { const double x = t * v; return law.phi(x) * x * x; });
}
// 𝒥″(tu)(tu, tu)
inline double ray_mod_second(const RayData& r, const GrowthLaw& law, double t) {
    return atom_sum(r, [&](double v) {
        const double x = t * v;
        return (law.phi_prime(x) * x + law.phi(x)) * x * x;
    });
}

inline double modular(const Field& u, const ProblemData& pd) { return ray_modular(make_ray(u, pd), pd.law, 1.0); }

inline double modular_derivative(const Field& u, const Field& v, const ProblemData& pd) {
    CompensatedSum s;
    for (const auto& e : pd.pairs->entries) {
        const double du = (u[e.a] - (e.b >= 0 ? u[e.b] : 0.0)) * e.inv_ds;
        if (du == 0.0) continue;
        const double dv = (v[e.a] - (e.b >= 0 ? v[e.b] : 0.0)) * e.inv_ds;
        s.add(e.w * pd.law.phi(std::abs(du)) * du * dv);
    }
    const double c = pd.grid.cell();
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != 0.0) s.add(c * pd.pots.V[i] * pd.law.phi(std::abs(u[i])) * u[i] * v[i]);
    return s.value();
}

inline double modular_second_diag(const Field& u, const ProblemData& pd) {
    return ray_mod_second(make_ray(u, pd), pd.law, 1.0);
}

// Gradient of Σ_atoms w G(|D|) where G′(τ) = ψ(τ) τ, i.e. every atom
// contributes w ψ(|D|) D ∂D/∂u_i.
template <class Psi>
inline std::vector<double> atom_gradient(const Field& u, const ProblemData& pd, Psi&& psi) {
    std::vector<CompensatedSum> acc(u.size());
    for (const auto& e : pd.pairs->entries) {
        const double du = (u[e.a] - (e.b >= 0 ? u[e.b] : 0.0)) * e.inv_ds;
        if (du == 0.0) continue;
        const double c = e.w * psi(std::abs(du)) * du * e.inv_ds;
        acc[static_cast<std::size_t>(e.a)].add(c);
        if (e.b >= 0) acc[static_cast<std::size_t>(e.b)].add(-c);
    }
    const double h = pd.grid.cell();
    std::vector<double> g(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] != 0.0) acc[i].add(h * pd.pots.V[i] * psi(std::abs(u[i])) * u[i]);
        g[i] = acc[i].value();
    }
    return g;
}

// ∂𝒥/∂u_i, i.e. 𝒥′(u)e_i
inline std::vector<double> modular_gradient(const Field& u, const ProblemData& pd) {
    return atom_gradient(u, pd, [&](double x) { return pd.law.phi(x); });
}
// ∂/∂u_i of 𝒥′(u)u
inline std::vector<double> mod_diag_gradient(const Field& u, const ProblemData& pd) {
    return atom_gradient(u, pd, [&](double x) { return pd.law.phi_prime(x) * x + 2.0 * pd.law.phi(x); });
}
// ∂/∂u_i of ‖u‖_p^p and ‖u‖_{q,a}^q
inline std::vector<double> lp_power_gradient(const Field& u, double p) {
    std::vector<double> g(u.size(), 0.0);
    const double h = u.grid.cell();
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != 0.0) g[i] = h * p * std::pow(std::abs(u[i]), p - 2.0) * u[i];
    return g;
}
inline std::vector<double> weighted_q_power_gradient(const Field& u, const std::vector<double>& a, double q) {
    std::vector<double> g(u.size(), 0.0);
    const double h = u.grid.cell();
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != 0.0) g[i] = h * q * a[i] * std::pow(std::abs(u[i]), q - 2.0) * u[i];
    return g;
}

struct EnergyBreakdown {
    double modular = 0, mod_diag = 0, mod_second_diag = 0, q_term = 0, p_term = 0;
};

inline EnergyBreakdown breakdown(const Field& u, const ProblemData& pd) {
    const auto r = make_ray(u, pd);
    return {ray_modular(r, pd.law, 1.0), ray_mod_diag(r, pd.law, 1.0), ray_mod_second(r, pd.law, 1.0), r.C, r.B};
}

inline nlohmann::ordered_json to_json(const EnergyBreakdown& b) {
    nlohmann::ordered_json j;
    j["modular"] = b.modular;
    j["mod_diag"] = b.mod_diag;
    j["mod_second_diag"] = b.mod_second_diag;
    j["q_term"] = b.q_term;
    j["p_term"] = b.p_term;
    return j;
}

inline double energy_from(const EnergyBreakdown& b, const ProblemData& pd) {
    return b.modular - pd.mu / pd.q * b.q_term + pd.lambda / pd.p * b.p_term;
}

inline double energy(const Field& u, const ProblemData& pd) {
    const auto r = make_ray(u, pd);
    return ray_modular(r, pd.law, 1.0) - pd.mu / pd.q * r.C + pd.lambda / pd.p * r.B;
}

inline double energy_derivative(const Field& u, const Field& v, const ProblemData& pd) {
    CompensatedSum s;
    s.add(modular_derivative(u, v, pd));
    const double h = pd.grid.cell();
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0.0) continue;
        const double au = std::abs(u[i]);
        s.add(-pd.mu * h * pd.pots.a[i] * std::pow(au, pd.q - 2.0) * u[i] * v[i]);
        s.add(pd.lambda * h * std::pow(au, pd.p - 2.0) * u[i] * v[i]);
    }
    return s.value();
}

// ℐ′(u)e_i for every node
inline std::vector<double> energy_gradient(const Field& u, const ProblemData& pd) {
    auto g = modular_gradient(u, pd);
    const double h = pd.grid.cell();
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0.0) continue;
        const double au = std::abs(u[i]);
        CompensatedSum s;
        s.add(g[i]);
        s.add(-pd.mu * h * pd.pots.a[i] * std::pow(au, pd.q - 2.0) * u[i]);
        s.add(pd.lambda * h * std::pow(au, pd.p - 2.0) * u[i]);
        g[i] = s.value();
    }
    return g;
}

inline double energy_second_diag(const EnergyBreakdown& b, const ProblemData& pd) {
    CompensatedSum s;
    s.add(b.mod_second_diag);
    s.add(-pd.mu * (pd.q - 1.0) * b.q_term);
    s.add(pd.lambda * (pd.p - 1.0) * b.p_term);
    return s.value();
}
inline double energy_second_diag(const Field& u, const ProblemData& pd) {
    return energy_second_diag(breakdown(u, pd), pd);
}

// Nehari-reduced forms of ℐ″(u)(u,u); equal to energy_second_diag on 𝒩.
inline double second_diag_q_form(const Field& u, const ProblemData& pd) {
    const auto r = make_ray(u, pd);
    CompensatedSum s;
    s.add(atom_sum(r, [&](double x) { return (pd.law.phi_prime(x) * x + (2.0 - pd.q) * pd.law.phi(x)) * x * x; }));
    s.add(pd.lambda * (pd.p - pd.q) * r.B);
    return s.value();
}
inline double second_diag_p_form(const Field& u, const ProblemData& pd) {
    const auto r = make_ray(u, pd);
    CompensatedSum s;
    s.add(atom_sum(r, [&](double x) { return (pd.law.phi_prime(x) * x + (2.0 - pd.p) * pd.law.phi(x)) * x * x; }));
    s.add(pd.mu * (pd.p - pd.q) * r.C);
    return s.value();
}

// σ with 𝒥(u/σ) = 1, bisection in log σ. The index sandwich gives a tight
// starting bracket; [1e-12, 1e12] is the fallback.
inline double luxemburg_norm(const RayData& r, const GrowthLaw& law) {
    if (r.v.empty()) return 0.0;
    auto f = [&](double sigma) { return ray_modular(r, law, 1.0 / sigma) - 1.0; };
    const double M = ray_modular(r, law, 1.0);
    double a = std::pow(M, 1.0 / law.ell()), b = std::pow(M, 1.0 / law.m_idx());
    double lo = std::min(a, b) * (1.0 - 1e-9), hi = std::max(a, b) * (1.0 + 1e-9);
    if (!(f(lo) >= 0.0 && f(hi) <= 0.0)) {
        lo = 1e-12;
        hi = 1e12;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = std::sqrt(lo * hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}
inline double luxemburg_norm(const Field& u, const ProblemData& pd) { return luxemburg_norm(make_ray(u, pd), pd.law); }

// ∂‖u‖/∂u_i = (∇𝒥)(w)_i / 𝒥′(w)w with w = u/‖u‖
inline std::vector<double> luxemburg_gradient(const Field& u, const ProblemData& pd, double norm) {
    const Field w = u.scaled(1.0 / norm);
    auto g = modular_gradient(w, pd);
    const double d = ray_mod_diag(make_ray(w, pd), pd.law, 1.0);
    for (auto& x : g) x /= d;
    return g;
}

// ‖e_i‖ for every coordinate field
inline std::vector<double> coordinate_norms(const ProblemData& pd) {
    std::vector<double> out(pd.grid.size());
    Field e(pd.grid);
    for (std::size_t i = 0; i < out.size(); ++i) {
        e[i] = 1.0;
        out[i] = luxemburg_norm(e, pd);
        e[i] = 0.0;
    }
    return out;
}

}

#endif
