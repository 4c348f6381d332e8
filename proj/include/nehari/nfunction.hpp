#ifndef NEHARI_NFUNCTION_HPP
#define NEHARI_NFUNCTION_HPP

// N-functions Φ(t) = ∫₀ᵗ φ(s) s ds together with the index and hypothesis
// checks the rest of the library relies on.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace nehari {

enum class LawKind { Power, PowerSum, PowerLog, Custom };

inline const char* to_string(LawKind k) {
    switch (k) {
        case LawKind::Power: return "power";
        case LawKind::PowerSum: return "power_sum";
        case LawKind::PowerLog: return "power_log";
        case LawKind::Custom: return "custom";
    }
    return "?";
}

namespace detail {

// Piecewise cubic Hermite interpolant with Fritsch-Carlson limited slopes.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        d_.assign(n, 0.0);
        if (n < 2) return;
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        d_[0] = delta[0];
        d_[n - 1] = delta[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i)
            d_[i] = (delta[i - 1] * delta[i] <= 0.0) ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (delta[i] == 0.0) { d_[i] = d_[i + 1] = 0.0; continue; }
            const double a = d_[i] / delta[i], b = d_[i + 1] / delta[i];
            const double r = a * a + b * b;
            if (r > 9.0) {
                const double tau = 3.0 / std::sqrt(r);
                d_[i] = tau * a * delta[i];
                d_[i + 1] = tau * b * delta[i];
            }
        }
    }
    double operator()(double x) const {
        const std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double s = (x - x_[i]) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
        return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
    }
    double derivative(double x) const {
        const std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double s = (x - x_[i]) / h;
        const double d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1;
        const double d01 = -6 * s * s + 6 * s, d11 = 3 * s * s - 2 * s;
        return (d00 * y_[i] + d01 * y_[i + 1]) / h + d10 * d_[i] + d11 * d_[i + 1];
    }
    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& y() const { return y_; }

private:
    std::size_t segment(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        return std::min(i, x_.size() - 2);
    }
    std::vector<double> x_, y_, d_;
};

struct CustomTable {
    MonotoneCubic phi, dphi;
    double t_lo = 0, t_hi = 0;
    double k_lo = 0, k_hi = 0;   // local power exponents of φ at the table ends
    std::vector<double> Phi_knots;
};

}

class GrowthLaw {
public:
    static GrowthLaw power(double p) {
        if (!(p > 1.0)) throw NonPositiveInput("power law needs p > 1");
        GrowthLaw g;
        g.kind_ = LawKind::Power;
        g.e1_ = p;
        g.ell_ = g.m_ = p;
        return g;
    }
    static GrowthLaw power_sum(double low, double high) {
        if (!(low > 1.0) || !(high >= low)) throw NonPositiveInput("power_sum needs 1 < low <= high");
        GrowthLaw g;
        g.kind_ = LawKind::PowerSum;
        g.e1_ = low;
        g.e2_ = high;
        g.ell_ = low;
        g.m_ = high;
        return g;
    }
    static GrowthLaw power_log(double p) {
        if (!(p > 1.0)) throw NonPositiveInput("power_log needs p > 1");
        GrowthLaw g;
        g.kind_ = LawKind::PowerLog;
        g.e1_ = p;
        g.ell_ = p;
        g.m_ = p + 1.0;
        return g;
    }
    // Tabulated (t, φ, φ′) with t strictly increasing and positive.
    static GrowthLaw custom(std::vector<double> t, std::vector<double> phi, std::vector<double> dphi,
                            double ell, double m) {
        if (t.size() < 4 || phi.size() != t.size() || dphi.size() != t.size())
            throw NonPositiveInput("custom law needs at least 4 rows of (t, phi, phi')");
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (!(t[i] > 0.0) || !(phi[i] > 0.0)) throw NonPositiveInput("custom law needs t > 0 and phi > 0");
            if (i > 0 && !(t[i] > t[i - 1])) throw NonPositiveInput("custom law t column must increase");
        }
        auto tab = std::make_shared<detail::CustomTable>();
        tab->t_lo = t.front();
        tab->t_hi = t.back();
        tab->k_lo = t.front() * dphi.front() / phi.front();
        tab->k_hi = t.back() * dphi.back() / phi.back();
        tab->phi = detail::MonotoneCubic(t, phi);
        tab->dphi = detail::MonotoneCubic(t, dphi);
        GrowthLaw g;
        g.kind_ = LawKind::Custom;
        g.ell_ = ell;
        g.m_ = m;
        g.table_ = tab;
        // Φ at the knots: analytic power tail below the table, Simpson between knots.
        tab->Phi_knots.resize(t.size());
        tab->Phi_knots[0] = phi.front() * t.front() * t.front() / (tab->k_lo + 2.0);
        for (std::size_t i = 1; i < t.size(); ++i) {
            auto integrand = [&](double s) { return s * g.phi(s); };
            tab->Phi_knots[i] = tab->Phi_knots[i - 1] + adaptive_simpson(integrand, t[i - 1], t[i], 1e-10);
        }
        return g;
    }
    static GrowthLaw custom_csv(const std::string& path, double ell, double m) {
        std::ifstream in(path);
        if (!in) throw NonPositiveInput("cannot open custom law table " + path);
        std::vector<double> t, phi, dphi;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ss(line);
            double a, b, c;
            if (!(ss >> a >> b >> c)) continue;  // header row
            t.push_back(a);
            phi.push_back(b);
            dphi.push_back(c);
        }
        auto g = custom(std::move(t), std::move(phi), std::move(dphi), ell, m);
        g.source_ = path;
        return g;
    }

    LawKind kind() const { return kind_; }
    double ell() const { return ell_; }
    double m_idx() const { return m_; }
    double exponent() const { return e1_; }
    double exponent_high() const { return e2_; }
    const std::string& source() const { return source_; }
    bool has_phi_second() const { return kind_ != LawKind::Custom; }

    double Phi(double t) const {
        t = std::abs(t);
        if (t == 0.0) return 0.0;
        switch (kind_) {
            case LawKind::Power: return std::pow(t, e1_) / e1_;
            case LawKind::PowerSum: return std::pow(t, e1_) / e1_ + std::pow(t, e2_) / e2_;
            case LawKind::PowerLog: return std::pow(t, e1_) * std::log1p(t);
            case LawKind::Custom: return custom_Phi(t);
        }
        return 0.0;
    }
    double phi(double t) const {
        switch (kind_) {
            case LawKind::Power: return std::pow(t, e1_ - 2.0);
            case LawKind::PowerSum: return std::pow(t, e1_ - 2.0) + std::pow(t, e2_ - 2.0);
            case LawKind::PowerLog: {
                const double tp2 = std::pow(t, e1_ - 2.0);
                return tp2 * (e1_ * std::log1p(t) + t / (1.0 + t));
            }
            case LawKind::Custom: {
                const auto& tb = *table_;
                if (t < tb.t_lo) return tb.phi.y().front() * std::pow(t / tb.t_lo, tb.k_lo);
                if (t > tb.t_hi) return tb.phi.y().back() * std::pow(t / tb.t_hi, tb.k_hi);
                return tb.phi(t);
            }
        }
        return 0.0;
    }
    double phi_prime(double t) const {
        switch (kind_) {
            case LawKind::Power: return (e1_ - 2.0) * std::pow(t, e1_ - 3.0);
            case LawKind::PowerSum:
                return (e1_ - 2.0) * std::pow(t, e1_ - 3.0) + (e2_ - 2.0) * std::pow(t, e2_ - 3.0);
            case LawKind::PowerLog: {
                // φ = p t^{p-2} L + t^{p-1}/(1+t), L = ln(1+t)
                const double p = e1_, L = std::log1p(t), u = 1.0 + t;
                return p * (p - 2.0) * std::pow(t, p - 3.0) * L + p * std::pow(t, p - 2.0) / u +
                       (p - 1.0) * std::pow(t, p - 2.0) / u - std::pow(t, p - 1.0) / (u * u);
            }
            case LawKind::Custom: {
                const auto& tb = *table_;
                if (t < tb.t_lo) return tb.k_lo * phi(t) / t;
                if (t > tb.t_hi) return tb.k_hi * phi(t) / t;
                return tb.dphi(t);
            }
        }
        return 0.0;
    }
    std::optional<double> phi_second(double t) const {
        switch (kind_) {
            case LawKind::Power: return (e1_ - 2.0) * (e1_ - 3.0) * std::pow(t, e1_ - 4.0);
            case LawKind::PowerSum:
                return (e1_ - 2.0) * (e1_ - 3.0) * std::pow(t, e1_ - 4.0) +
                       (e2_ - 2.0) * (e2_ - 3.0) * std::pow(t, e2_ - 4.0);
            case LawKind::PowerLog: {
                const double p = e1_, L = std::log1p(t), u = 1.0 + t;
                return p * (p - 2.0) * (p - 3.0) * std::pow(t, p - 4.0) * L +
                       p * (p - 2.0) * std::pow(t, p - 3.0) / u +
                       (p * (p - 2.0) + (p - 1.0) * (p - 2.0)) * std::pow(t, p - 3.0) / u -
                       (p + (p - 1.0)) * std::pow(t, p - 2.0) / (u * u) -
                       (p - 1.0) * std::pow(t, p - 2.0) / (u * u) + 2.0 * std::pow(t, p - 1.0) / (u * u * u);
            }
            case LawKind::Custom: return std::nullopt;
        }
        return std::nullopt;
    }
    // φ″ when available, else a central difference of φ′.
    double phi_second_or_fd(double t) const {
        if (auto v = phi_second(t)) return *v;
        const double h = 1e-5 * std::max(1.0, t);
        const double lo = std::max(t - h, 0.5 * t);
        return (phi_prime(t + h) - phi_prime(lo)) / (t + h - lo);
    }

    std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        switch (kind_) {
            case LawKind::Power: os << "power(p=" << e1_ << ")"; break;
            case LawKind::PowerSum: os << "power_sum(low=" << e1_ << ", high=" << e2_ << ")"; break;
            case LawKind::PowerLog: os << "power_log(p=" << e1_ << ")"; break;
            case LawKind::Custom: os << "custom(" << source_ << ", ell=" << ell_ << ", m=" << m_ << ")"; break;
        }
        return os.str();
    }

private:
    double custom_Phi(double t) const {
        const auto& tb = *table_;
        if (t <= tb.t_lo) return phi(t) * t * t / (tb.k_lo + 2.0);
        const auto& xs = tb.phi.x();
        auto integrand = [&](double s) { return s * phi(s); };
        if (t >= tb.t_hi) {
            // tail: ∫ s φ_hi (s/t_hi)^k ds in closed form
            const double k2 = tb.k_hi + 2.0;
            return tb.Phi_knots.back() + (phi(t) * t * t - phi(tb.t_hi) * tb.t_hi * tb.t_hi) / k2;
        }
        auto it = std::upper_bound(xs.begin(), xs.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
        return tb.Phi_knots[i] + adaptive_simpson(integrand, xs[i], t, 1e-10);
    }

    LawKind kind_ = LawKind::Power;
    double e1_ = 2.0, e2_ = 0.0;
    double ell_ = 2.0, m_ = 2.0;
    std::shared_ptr<const detail::CustomTable> table_;
    std::string source_;
};

struct LawValues {
    double Phi, phi, phi_prime;
};

inline LawValues eval_law(const GrowthLaw& law, double t) {
    if (!(t > 0.0)) throw NonPositiveInput("eval_law needs t > 0");
    return {law.Phi(t), law.phi(t), law.phi_prime(t)};
}

inline std::vector<double> log_samples(double lo, double hi, int count) {
    std::vector<double> t(static_cast<std::size_t>(count));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (count - 1));
    return t;
}

// Index ratio φ(t)t²/Φ(t).
inline double delta2_ratio(const GrowthLaw& law, double t) { return law.phi(t) * t * t / law.Phi(t); }

inline std::pair<double, double> growth_indices(const GrowthLaw& law, const std::vector<double>& samples,
                                                double tol = 1e-9) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double t : samples) {
        const double r = delta2_ratio(law, t);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    if (lo < law.ell() - tol * law.ell() || hi > law.m_idx() + tol * law.m_idx()) {
        std::ostringstream os;
        os.precision(12);
        os << "sampled ratio range [" << lo << ", " << hi << "] outside declared [" << law.ell() << ", "
           << law.m_idx() << "]";
        throw IndexViolation(os.str());
    }
    return {lo, hi};
}

inline std::pair<double, double> xi_bounds(double t, double ell, double m) {
    const double a = std::pow(t, ell), b = std::pow(t, m);
    return {std::min(a, b), std::max(a, b)};
}

// Sobolev critical exponent N e/(N - s e); +inf when N <= s e.
inline double critical_exponent(double e, double s, int N) {
    const double d = N - s * e;
    return d > 0.0 ? N * e / d : std::numeric_limits<double>::infinity();
}

struct HypothesisItem {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct HypothesisReport {
    std::vector<HypothesisItem> items;
    double ell_hat = 0, m_hat = 0;
    double ell_star = 0;
    bool all_passed() const {
        return std::all_of(items.begin(), items.end(), [](const HypothesisItem& i) { return i.passed; });
    }
    const HypothesisItem* find(const std::string& name) const {
        for (const auto& i : items)
            if (i.name == name) return &i;
        return nullptr;
    }
};

namespace detail {

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

// ∫ over (0,1) of (t/Φ)^e by dyadic pieces; returns nullopt when the piece
// ratio does not settle below one.
inline std::optional<double> phi4_near_zero(const GrowthLaw& law, double e) {
    auto f = [&](double t) { return std::exp(e * (std::log(t) - std::log(law.Phi(t)))); };
    CompensatedSum total;
    double prev = 0.0, ratio = 1.0;
    for (int k = 0; k < 120; ++k) {
        const double b = std::ldexp(1.0, -k), a = 0.5 * b;
        const double piece = adaptive_simpson(f, a, b, 1e-10, 30);
        if (!std::isfinite(piece)) return std::nullopt;
        total.add(piece);
        if (k > 0 && prev > 0.0) ratio = piece / prev;
        prev = piece;
        if (k >= 10 && piece < 1e-14 * total.value()) return total.value();
    }
    if (ratio < 1.0 - 1e-6) return total.value() + prev * ratio / (1.0 - ratio);
    return std::nullopt;
}

inline double phi4_tail(const GrowthLaw& law, double e, double T) {
    auto f = [&](double t) { return std::exp(e * (std::log(t) - std::log(law.Phi(t)))); };
    CompensatedSum total;
    for (double a = 1.0; a < T; a *= 2.0) total.add(adaptive_simpson(f, a, std::min(2.0 * a, T), 1e-8, 30));
    return total.value();
}

}

inline HypothesisReport check_hypotheses(const GrowthLaw& law, double s, int N, double q, double p) {
    HypothesisReport rep;
    const double slack = 1e-12;
    const double ell = law.ell(), m = law.m_idx();
    const auto ts = log_samples(1e-4, 1e4, 200);

    {   // (φ1)
        HypothesisItem it{"phi1", true, "phi > 0, t phi(t) -> 0 at 0+ and -> inf at inf"};
        for (double t : ts) {
            const double v = law.phi(t);
            if (!(v > 0.0) || !std::isfinite(v) || !std::isfinite(law.phi_prime(t))) {
                it.passed = false;
                it.detail = "phi not positive/finite at t=" + detail::fmt(t);
                break;
            }
        }
        const double g1 = law.phi(1.0);
        const double g0 = 1e-30 * law.phi(1e-30), ginf = 1e30 * law.phi(1e30);
        if (it.passed && !(g0 < 0.5 * g1 && ginf > 2.0 * g1)) {
            it.passed = false;
            it.detail = "t phi(t) limits not observed: at 1e-30 " + detail::fmt(g0) + ", at 1e30 " + detail::fmt(ginf);
        }
        rep.items.push_back(it);
    }
    {   // (φ2)
        HypothesisItem it{"phi2", true, "t phi(t) strictly increasing"};
        double prev = -1.0;
        for (double t : ts) {
            const double g = t * law.phi(t);
            if (!(g > prev - slack * std::abs(prev)) || g == prev) {
                it.passed = false;
                it.detail = "t phi(t) not increasing at t=" + detail::fmt(t);
                break;
            }
            prev = g;
        }
        rep.items.push_back(it);
    }
    {   // (φ3)
        HypothesisItem it{"phi3", true, ""};
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        double tlo = 0, thi = 0;
        for (double t : ts) {
            const double f = law.phi(t), f1 = law.phi_prime(t), f2 = law.phi_second_or_fd(t);
            const double r = t * (2.0 * f1 + t * f2) / (f + t * f1);
            if (r < lo) { lo = r; tlo = t; }
            if (r > hi) { hi = r; thi = t; }
        }
        const double tol = 1e-6;
        it.passed = ell > 1.0 && lo >= ell - 2.0 - tol && hi <= m - 2.0 + tol;
        it.detail = "(phi t)''t/(phi t)' in [" + detail::fmt(lo) + " @t=" + detail::fmt(tlo) + ", " +
                    detail::fmt(hi) + " @t=" + detail::fmt(thi) + "], declared [" + detail::fmt(ell - 2) + ", " +
                    detail::fmt(m - 2) + "]";
        rep.items.push_back(it);
    }
    {   // (φ4)
        HypothesisItem it{"phi4", false, ""};
        if (!(s > 0.0) || !(s < N)) {
            it.detail = "s/(N-s) undefined for s=" + detail::fmt(s) + ", N=" + std::to_string(N);
        } else {
            const double e = s / (N - s);
            const auto near0 = detail::phi4_near_zero(law, e);
            const double tail = detail::phi4_tail(law, e, 1e8);
            it.passed = near0.has_value() && tail > 1e3;
            it.detail = "int_0^1 = " + (near0 ? detail::fmt(*near0) : std::string("diverges")) +
                        ", int_1^1e8 = " + detail::fmt(tail) + " (needs > 1e3)";
        }
        rep.items.push_back(it);
    }
    {   // Δ₂ through the index ratio
        HypothesisItem it{"delta2", true, ""};
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (double t : ts) {
            const double r = delta2_ratio(law, t);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        rep.ell_hat = lo;
        rep.m_hat = hi;
        it.passed = lo >= ell - 1e-9 * ell && hi <= m + 1e-9 * m;
        it.detail = "phi t^2/Phi in [" + detail::fmt(lo) + ", " + detail::fmt(hi) + "], declared [" + detail::fmt(ell) +
                    ", " + detail::fmt(m) + "]";
        rep.items.push_back(it);
    }
    rep.ell_star = critical_exponent(ell, s, N);
    {   // (H1) ordering
        HypothesisItem it{"H1_order", false, ""};
        it.passed = ell <= m && m < q && q < p && p < rep.ell_star;
        it.detail = "need ell <= m < q < p < ell_s^*: ell=" + detail::fmt(ell) + " m=" + detail::fmt(m) +
                    " q=" + detail::fmt(q) + " p=" + detail::fmt(p) + " ell_s^*=" + detail::fmt(rep.ell_star);
        rep.items.push_back(it);
    }
    {   // (H1) balance
        HypothesisItem it{"H1_balance", false, ""};
        const double lhs = m * (q - ell), rhs = p * (q - m);
        it.passed = lhs < rhs;
        it.detail = "m(q-ell)=" + detail::fmt(lhs) + " < p(q-m)=" + detail::fmt(rhs);
        rep.items.push_back(it);
    }
    return rep;
}

// Legendre transform through the monotone inverse of sφ(s).
inline double conjugate(const GrowthLaw& law, double t) {
    if (t < 0.0) throw NonPositiveInput("conjugate needs t >= 0");
    if (t == 0.0) return 0.0;
    const double s = solve_increasing([&](double x) { return x * law.phi(x) - t; }, 1.0, {1e-14, 400, 4.0, 200});
    return t * s - law.Phi(s);
}

class ConjugateLaw {
public:
    explicit ConjugateLaw(GrowthLaw base) : base_(std::move(base)) {}
    double operator()(double t) const { return conjugate(base_, std::abs(t)); }
    const GrowthLaw& base() const { return base_; }

private:
    GrowthLaw base_;
};

class SobolevConjugate {
public:
    SobolevConjugate(GrowthLaw law, double s, int N) : law_(std::move(law)), s_(s), N_(N) {
        if (!(N - s * law_.m_idx() > 0.0))
            throw CriticalExponentUndefined("N - s m = " + detail::fmt(N - s * law_.m_idx()) + " <= 0");
        e_ = s / (N - s);
        auto near0 = detail::phi4_near_zero(law_, e_);
        if (!near0) throw CriticalExponentUndefined("integral defining H diverges at 0");
        I1_ = *near0;
    }
    double ell_star() const { return critical_exponent(law_.ell(), s_, N_); }
    double m_star() const { return critical_exponent(law_.m_idx(), s_, N_); }

    double integrand(double t) const { return std::exp(e_ * (std::log(t) - std::log(law_.Phi(t)))); }
    // I(τ) = ∫₀^τ (t/Φ(t))^{s/(N-s)} dt
    double I(double tau) const {
        if (tau <= 0.0) return 0.0;
        auto f = [&](double t) { return integrand(t); };
        if (tau >= 1.0) {
            CompensatedSum total;
            total.add(I1_);
            for (double a = 1.0; a < tau; a *= 2.0) total.add(adaptive_simpson(f, a, std::min(2.0 * a, tau), 1e-12, 40));
            return total.value();
        }
        // below one: subtract dyadic pieces from I(1)
        CompensatedSum total;
        total.add(I1_);
        double b = 1.0;
        while (b > tau) {
            const double a = std::max(0.5 * b, tau);
            total.add(-adaptive_simpson(f, a, b, 1e-12, 40));
            b = a;
        }
        return total.value();
    }
    double H(double tau) const { return std::pow(I(tau), (N_ - s_) / N_); }
    double H_prime(double tau) const {
        return (N_ - s_) / N_ * std::pow(I(tau), -s_ / N_) * integrand(tau);
    }
    double H_inverse(double t) const {
        if (t <= 0.0) return 0.0;
        return solve_increasing([&](double x) { return H(x) - t; }, 1.0, {1e-13, 400, 4.0, 200});
    }
    double Phi_star(double t) const { return law_.Phi(H_inverse(std::abs(t))); }
    // t Φ*′(t)/Φ*(t) evaluated at t = H(τ)
    double index_ratio_at(double tau) const {
        const double t = H(tau);
        const double dPhi = tau * law_.phi(tau);
        return t * dPhi / (H_prime(tau) * law_.Phi(tau));
    }

private:
    GrowthLaw law_;
    double s_;
    int N_;
    double e_ = 0, I1_ = 0;
};

inline SobolevConjugate sobolev_conjugate(const GrowthLaw& law, double s, int N) { return {law, s, N}; }

}

#endif
