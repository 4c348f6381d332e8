#ifndef NEHARI_NUMERICS_HPP
#define NEHARI_NUMERICS_HPP

// Small numeric kernels shared by every module: compensated sums,
// bracketed monotone root finding and adaptive Simpson quadrature.

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>

#include "errors.hpp"

namespace nehari {

// Neumaier's variant of Kahan summation. Order of add() calls fixes the
// result bit for bit, so callers keep a fixed traversal order.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) { add(x); return *this; }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_dot(std::span<const double> a, std::span<const double> b) {
    CompensatedSum s;
    for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
    return s.value();
}

struct RootOptions {
    double rel_tol = 1e-11;
    int max_iter = 300;
    double expand = 4.0;
    int max_expand = 200;
};

// Root of an increasing function on (0, inf) starting from t0.
// The bracket grows geometrically; the interior search is regula falsi
// (Illinois) with a bisection step whenever progress stalls.
inline double solve_increasing(const std::function<double(double)>& f, double t0,
                               const RootOptions& opt = {}) {
    double lo = t0, hi = t0;
    double flo = f(lo), fhi = flo;
    if (flo == 0.0) return t0;
    int k = 0;
    if (flo > 0.0) {
        while (flo > 0.0) {
            if (++k > opt.max_expand) throw BracketFailure("no sign change below t0");
            hi = lo; fhi = flo;
            lo /= opt.expand; flo = f(lo);
        }
    } else {
        while (fhi < 0.0) {
            if (++k > opt.max_expand) throw BracketFailure("no sign change above t0");
            lo = hi; flo = fhi;
            hi *= opt.expand; fhi = f(hi);
        }
    }
    if (!std::isfinite(flo) || !std::isfinite(fhi)) throw BracketFailure("non-finite bracket value");
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;

    int side = 0;
    for (int it = 0; it < opt.max_iter; ++it) {
        if (hi - lo <= opt.rel_tol * hi) break;
        double t = (lo * fhi - hi * flo) / (fhi - flo);
        const bool bisect = !(t > lo && t < hi) || (it % 4 == 3);
        if (bisect) t = 0.5 * (lo + hi);
        const double ft = f(t);
        if (ft == 0.0) return t;
        if (ft < 0.0) {
            lo = t; flo = ft;
            if (side == -1 && !bisect) fhi *= 0.5;
            side = -1;
        } else {
            hi = t; fhi = ft;
            if (side == 1 && !bisect) flo *= 0.5;
            side = 1;
        }
    }
    return 0.5 * (lo + hi);
}

// Root of a decreasing function: negate and reuse.
inline double solve_decreasing(const std::function<double(double)>& f, double t0,
                               const RootOptions& opt = {}) {
    return solve_increasing([&](double t) { return -f(t); }, t0, opt);
}

// Root of f on [lo, hi] given a sign change; f need not be monotone
// outside, only the bracket matters.
inline double solve_bracketed(const std::function<double(double)>& f, double lo, double hi,
                              const RootOptions& opt = {}) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) throw BracketFailure("endpoints share sign");
    const bool increasing = flo < 0.0;
    auto g = [&](double t) { return increasing ? f(t) : -f(t); };
    if (!increasing) { flo = -flo; fhi = -fhi; }
    int side = 0;
    for (int it = 0; it < opt.max_iter; ++it) {
        if (hi - lo <= opt.rel_tol * std::max(std::abs(hi), std::abs(lo))) break;
        double t = (lo * fhi - hi * flo) / (fhi - flo);
        const bool bisect = !(t > lo && t < hi) || (it % 4 == 3);
        if (bisect) t = 0.5 * (lo + hi);
        const double ft = g(t);
        if (ft == 0.0) return t;
        if (ft < 0.0) {
            lo = t; flo = ft;
            if (side == -1 && !bisect) fhi *= 0.5;
            side = -1;
        } else {
            hi = t; fhi = ft;
            if (side == 1 && !bisect) flo *= 0.5;
            side = 1;
        }
    }
    return 0.5 * (lo + hi);
}

namespace detail {
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}

// Adaptive Simpson with a tolerance relative to a coarse estimate of the
// integral magnitude.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double rel_tol = 1e-10, int max_depth = 50) {
    if (b == a) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double scale = std::max(std::abs(whole), std::numeric_limits<double>::min());
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol * scale, max_depth);
}

}

#endif
