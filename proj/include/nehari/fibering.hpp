#ifndef NEHARI_FIBERING_HPP
#define NEHARI_FIBERING_HPP

// Fibering maps Q_n(t) = R_n(tu), Q_e(t) = R_e(tu) and the critical points
// 𝗍(u), 𝗌(u), t_μ^±(u). All quantities are evaluated on a RayData so one
// pass over the pairs serves a whole one-dimensional solve.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "functionals.hpp"

namespace nehari {

enum class Branch { Minus, Plus, Zero };

inline const char* to_string(Branch b) {
    switch (b) {
        case Branch::Minus: return "minus";
        case Branch::Plus: return "plus";
        case Branch::Zero: return "zero";
    }
    return "?";
}

class Ray {
public:
    Ray(const Field& u, const ProblemData& pd) : pd_(&pd), r_(make_ray(u, pd)) {
        if (!(r_.C > 0.0)) throw ZeroDenominator("weighted q-norm of the field vanishes");
    }
    Ray(const Field&, ProblemData&&) = delete;   // keeps a pointer to the problem
    const RayData& data() const { return r_; }
    const ProblemData& problem() const { return *pd_; }
    double A(double t = 1.0) const { return ray_mod_diag(r_, pd_->law, t); }
    double B() const { return r_.B; }
    double C() const { return r_.C; }

    double Qn(double t) const {
        const auto& pd = *pd_;
        return (ray_mod_diag(r_, pd.law, t) + pd.lambda * std::pow(t, pd.p) * r_.B) / (std::pow(t, pd.q) * r_.C);
    }
    double Qe(double t) const {
        const auto& pd = *pd_;
        return pd.q * (ray_modular(r_, pd.law, t) + pd.lambda / pd.p * std::pow(t, pd.p) * r_.B) /
               (std::pow(t, pd.q) * r_.C);
    }
    // 𝒦_u(t) = t^{2-p} Σ w v² [(2-q)φ(tv) + φ′(tv) tv]
    double K(double t) const {
        const auto& law = pd_->law;
        const double q = pd_->q;
        const double S = atom_sum(r_, [&](double v) {
            const double x = t * v;
            return v * v * ((2.0 - q) * law.phi(x) + law.phi_prime(x) * x);
        });
        return std::pow(t, 2.0 - pd_->p) * S;
    }
    double K_prime(double t) const {
        const auto& law = pd_->law;
        const double q = pd_->q, p = pd_->p;
        CompensatedSum S, dS;
        for (std::size_t k = 0; k < r_.v.size(); ++k) {
            const double v = r_.v[k], x = t * v;
            const double f = law.phi(x), f1 = law.phi_prime(x), f2 = law.phi_second_or_fd(x);
            S.add(r_.w[k] * v * v * ((2.0 - q) * f + f1 * x));
            dS.add(r_.w[k] * v * v * v * ((3.0 - q) * f1 + f2 * x));
        }
        return (2.0 - p) * std::pow(t, 1.0 - p) * S.value() + std::pow(t, 2.0 - p) * dS.value();
    }
    // ℒ_u(t) = t^{-p} Σ w [φ(tv)(tv)² - qΦ(tv)]
    double L(double t) const {
        const auto& law = pd_->law;
        const double q = pd_->q;
        const double S = atom_sum(r_, [&](double v) {
            const double x = t * v;
            return law.phi(x) * x * x - q * law.Phi(x);
        });
        return std::pow(t, -pd_->p) * S;
    }
    double Qn_prime(double t) const {
        const auto& pd = *pd_;
        return std::pow(t, pd.p - pd.q - 1.0) * (K(t) + pd.lambda * (pd.p - pd.q) * r_.B) / r_.C;
    }
    double Qe_prime(double t) const {
        const auto& pd = *pd_;
        return pd.q * std::pow(t, pd.p - pd.q - 1.0) * (L(t) + pd.lambda * (pd.p - pd.q) / pd.p * r_.B) / r_.C;
    }
    // Analytic when φ″ is known, else Richardson on central differences of Q_n′.
    double Qn_second(double t) const {
        const auto& pd = *pd_;
        if (pd.law.has_phi_second()) {
            const double e = pd.p - pd.q;
            return ((e - 1.0) * std::pow(t, e - 2.0) * (K(t) + pd.lambda * e * r_.B) +
                    std::pow(t, e - 1.0) * K_prime(t)) / r_.C;
        }
        return Qn_second_fd(t);
    }
    double Qn_second_fd(double t) const {
        const double h = 1e-3 * t;
        auto D = [&](double hh) { return (Qn_prime(t + hh) - Qn_prime(t - hh)) / (2.0 * hh); };
        return (4.0 * D(0.5 * h) - D(h)) / 3.0;
    }
    // ℐ(tu), ℐ′(tu)(tu), ℐ″(tu)(tu,tu) along the ray
    double energy(double t) const {
        const auto& pd = *pd_;
        return ray_modular(r_, pd.law, t) - pd.mu / pd.q * std::pow(t, pd.q) * r_.C +
               pd.lambda / pd.p * std::pow(t, pd.p) * r_.B;
    }
    double nehari(double t) const {
        const auto& pd = *pd_;
        return ray_mod_diag(r_, pd.law, t) - pd.mu * std::pow(t, pd.q) * r_.C + pd.lambda * std::pow(t, pd.p) * r_.B;
    }
    double second(double t) const {
        const auto& pd = *pd_;
        return ray_mod_second(r_, pd.law, t) - pd.mu * (pd.q - 1.0) * std::pow(t, pd.q) * r_.C +
               pd.lambda * (pd.p - 1.0) * std::pow(t, pd.p) * r_.B;
    }
    double second_scale(double t) const {
        const auto& pd = *pd_;
        return std::abs(ray_mod_second(r_, pd.law, t)) + std::abs(pd.mu) * (pd.q - 1.0) * std::pow(t, pd.q) * r_.C +
               pd.lambda * (pd.p - 1.0) * std::pow(t, pd.p) * r_.B;
    }

    // t0 is where the bracket expansion starts (1 unless a warm start is known)
    double t_crit(const RootOptions& opt = {}, double t0 = 1.0) const {
        const double target = pd_->lambda * (pd_->p - pd_->q) * r_.B;
        return solve_increasing([&](double t) { return K(t) + target; }, t0, opt);
    }
    double s_crit(const RootOptions& opt = {}, double t0 = 1.0) const {
        const double target = pd_->lambda * (pd_->p - pd_->q) / pd_->p * r_.B;
        return solve_increasing([&](double t) { return L(t) + target; }, t0, opt);
    }

private:
    const ProblemData* pd_;
    RayData r_;
};

inline double rayleigh_n(const Field& u, const ProblemData& pd) { return Ray(u, pd).Qn(1.0); }
inline double rayleigh_e(const Field& u, const ProblemData& pd) { return Ray(u, pd).Qe(1.0); }
inline double fibering_t(const Field& u, const ProblemData& pd) { return Ray(u, pd).t_crit(); }
inline double fibering_s(const Field& u, const ProblemData& pd) { return Ray(u, pd).s_crit(); }

enum class RootStatus { Empty, Degenerate, TwoRoots };

inline const char* to_string(RootStatus s) {
    switch (s) {
        case RootStatus::Empty: return "empty";
        case RootStatus::Degenerate: return "degenerate";
        case RootStatus::TwoRoots: return "two_roots";
    }
    return "?";
}

struct NehariRoots {
    RootStatus status = RootStatus::Empty;
    std::optional<double> t_minus, t_plus;
    double t_crit = 0;
    double lambda_n = 0;
};

inline bool degenerate_band(double mu, double lambda_n) {
    return std::abs(mu - lambda_n) <= 1e-9 * std::max(1.0, std::abs(mu));
}

inline NehariRoots nehari_roots(const Ray& ray, const RootOptions& opt = {}, double t0 = 1.0) {
    const double mu = ray.problem().mu;
    NehariRoots out;
    out.t_crit = ray.t_crit(opt, t0);
    out.lambda_n = ray.Qn(out.t_crit);
    if (degenerate_band(mu, out.lambda_n)) {
        out.status = RootStatus::Degenerate;
        out.t_minus = out.t_plus = out.t_crit;
        return out;
    }
    if (mu < out.lambda_n) return out;
    out.status = RootStatus::TwoRoots;
    auto f = [&](double t) { return ray.Qn(t) - mu; };
    double lo = out.t_crit, hi = out.t_crit;
    for (int k = 0; f(lo) <= 0.0; ++k) {
        if (k > opt.max_expand) throw BracketFailure("Q_n does not exceed mu near 0");
        lo /= opt.expand;
    }
    for (int k = 0; f(hi) <= 0.0; ++k) {
        if (k > opt.max_expand) throw BracketFailure("Q_n does not exceed mu near infinity");
        hi *= opt.expand;
    }
    out.t_minus = solve_bracketed(f, lo, out.t_crit, opt);
    out.t_plus = solve_bracketed(f, out.t_crit, hi, opt);
    return out;
}
inline NehariRoots nehari_roots(const Field& u, const ProblemData& pd) { return nehari_roots(Ray(u, pd)); }

struct Classification {
    Branch branch = Branch::Zero;
    double second = 0;     // ℐ″(tu)(tu,tu)
    double eps = 0;        // dead band ε_cls
    double qn_prime = 0;   // dQ_n/dt at t
    bool consistent = true;
};

inline Classification classify(const Ray& ray, double t, double nehari_tol = 1e-8) {
    const auto& pd = ray.problem();
    const double Qn = ray.Qn(t);
    if (std::abs(Qn - pd.mu) > nehari_tol * std::max(1.0, std::abs(pd.mu)))
        throw NotOnNehari("R_n(tu) = " + std::to_string(Qn) + " differs from mu = " + std::to_string(pd.mu));
    Classification c;
    c.second = ray.second(t);
    c.eps = 1e-8 * ray.second_scale(t);
    c.qn_prime = ray.Qn_prime(t);
    if (std::abs(c.second) <= c.eps)
        c.branch = Branch::Zero;
    else
        c.branch = c.second > 0.0 ? Branch::Plus : Branch::Minus;
    // sign(Q_n′) must agree with sign(ℐ″) outside the dead band
    if (c.branch != Branch::Zero) {
        const double scale = std::abs(ray.Qn(t)) / t;
        if (std::abs(c.qn_prime) > 1e-7 * scale) c.consistent = (c.qn_prime > 0.0) == (c.branch == Branch::Plus);
    }
    return c;
}
inline Branch classify(const Field& u, double t, const ProblemData& pd) { return classify(Ray(u, pd), t).branch; }

inline double fibering_second(const Field& u, double t, const ProblemData& pd) { return Ray(u, pd).Qn_second(t); }

struct FiberingSample {
    double t, Qn, Qe, Qn_prime;
};

struct FiberingProfile {
    Field u;
    double t_crit = 0, s_crit = 0;
    double lambda_n = 0, lambda_e = 0;
    std::vector<FiberingSample> samples;
};

// Profile of u/‖u‖ with `count` log-spaced samples spanning [𝗍/20, 20𝗌].
inline FiberingProfile fibering_profile(const Field& u, const ProblemData& pd, int count = 200) {
    FiberingProfile fp;
    fp.u = u.scaled(1.0 / luxemburg_norm(u, pd));
    Ray ray(fp.u, pd);
    fp.t_crit = ray.t_crit();
    fp.s_crit = ray.s_crit();
    fp.lambda_n = ray.Qn(fp.t_crit);
    fp.lambda_e = ray.Qe(fp.s_crit);
    if (count > 1) {
        for (double t : log_samples(fp.t_crit / 20.0, fp.s_crit * 20.0, count))
            fp.samples.push_back({t, ray.Qn(t), ray.Qe(t), ray.Qn_prime(t)});
    }
    return fp;
}

}

#endif
