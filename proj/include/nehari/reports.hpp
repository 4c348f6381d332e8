#ifndef NEHARI_REPORTS_HPP
#define NEHARI_REPORTS_HPP

// JSON views of the result types (stable key order).

#include <json.hpp>

#include "nehari_solver.hpp"

namespace nehari {

using ojson = nlohmann::ordered_json;

inline ojson to_json(const HypothesisReport& r) {
    ojson j;
    j["all_passed"] = r.all_passed();
    j["ell_hat"] = r.ell_hat;
    j["m_hat"] = r.m_hat;
    j["ell_star"] = r.ell_star;
    j["items"] = ojson::array();
    for (const auto& it : r.items) j["items"].push_back({{"name", it.name}, {"passed", it.passed}, {"detail", it.detail}});
    return j;
}

inline ojson to_json(const SolutionReport& r) {
    ojson j;
    j["requested"] = to_string(r.requested);
    j["branch"] = to_string(r.branch);
    j["energy"] = r.energy;
    j["residual"] = r.residual;
    j["resid_tol"] = r.resid_tol;
    j["converged"] = r.converged;
    j["t_projection"] = r.t_projection;
    j["classification_margin"] = r.classification_margin;
    j["norm"] = r.norm;
    j["qa_norm"] = r.qa_norm;
    j["iterations"] = r.iterations;
    j["seed_index"] = r.seed_index;
    j["seed_energies"] = r.seed_energies;
    auto num = [](double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); };
    j["certificates"]["D_mu_bound"] = num(r.certificates.D_mu_bound);
    j["certificates"]["c_mu_bound"] = num(r.certificates.c_mu_bound);
    j["certificates"]["sign_vs_mu_e"] = r.certificates.sign_vs_mu_e;
    return j;
}

inline ojson to_json(const SignDiagnostic& d) {
    return {{"expected", to_string(d.expected)},
            {"observed", to_string(d.observed)},
            {"agrees", d.agrees},
            {"mu_band", d.mu_band},
            {"energy_band", d.energy_band}};
}

inline ojson to_json(const NonexistenceCertificate& c) {
    return {{"mu", c.mu},         {"mu_n_hat", c.mu_n_hat}, {"samples", c.samples}, {"min_margin", c.min_margin},
            {"argmin", c.argmin}, {"positive", c.positive}, {"label", c.label}};
}

inline ojson to_json(const ExtremalResult& r) {
    return {{"lambda", r.lambda},     {"mu_n", r.mu_n},         {"mu_e", r.mu_e},
            {"spread_n", r.spread_n}, {"spread_e", r.spread_e}, {"lower_floor", r.lower_floor}};
}

inline ojson to_json(const ContinuationResult& c) {
    ojson j;
    j["steps"] = ojson::array();
    for (const auto& s : c.steps)
        j["steps"].push_back({{"mu", s.mu},
                              {"energy", s.energy},
                              {"t_minus", s.t_minus},
                              {"t_plus", s.t_plus},
                              {"gap", s.gap},
                              {"norm", s.norm},
                              {"residual", s.residual},
                              {"branch", to_string(s.branch)}});
    j["mu_final"] = c.mu_final;
    j["final"] = to_json(c.final_report);
    return j;
}

}

#endif
