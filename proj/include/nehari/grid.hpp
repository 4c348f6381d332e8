#ifndef NEHARI_GRID_HPP
#define NEHARI_GRID_HPP

// Uniform box [-L, L]^N with zero extension outside, the s-Hölder quotient
// and the pair list that discretizes dν = dx dy / |x - y|^N.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace nehari {

struct BoxGrid {
    int dim = 1;
    double half_width = 1.0;
    int n = 8;

    BoxGrid() = default;
    BoxGrid(int N, double L, int n_per_axis) : dim(N), half_width(L), n(n_per_axis) {
        if (N != 1 && N != 2) throw NonPositiveInput("grid dimension must be 1 or 2");
        if (!(L > 0.0)) throw NonPositiveInput("grid half width must be positive");
        if (n_per_axis < 8) throw NonPositiveInput("grid needs at least 8 nodes per axis");
    }
    double spacing() const { return 2.0 * half_width / (n - 1); }
    std::size_t size() const { return dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n; }
    double cell() const { return std::pow(spacing(), dim); }   // h^N
    // coordinate of lattice index k along an axis; k may lie outside [0, n)
    double coord(int k) const { return -half_width + k * spacing(); }
    bool operator==(const BoxGrid&) const = default;
};

struct Node {
    int i = 0, j = 0;   // j unused in 1D
    bool operator==(const Node&) const = default;
};

inline bool inside(const BoxGrid& g, Node x) {
    return x.i >= 0 && x.i < g.n && (g.dim == 1 ? x.j == 0 : (x.j >= 0 && x.j < g.n));
}
inline std::size_t flat(const BoxGrid& g, Node x) {
    return g.dim == 1 ? static_cast<std::size_t>(x.i) : static_cast<std::size_t>(x.j) * g.n + x.i;
}
inline Node unflat(const BoxGrid& g, std::size_t k) {
    if (g.dim == 1) return {static_cast<int>(k), 0};
    return {static_cast<int>(k % g.n), static_cast<int>(k / g.n)};
}
inline double node_distance(const BoxGrid& g, Node x, Node y) {
    const double h = g.spacing();
    const double di = (x.i - y.i) * h, dj = (x.j - y.j) * h;
    return std::sqrt(di * di + dj * dj);
}
inline double radius2(const BoxGrid& g, Node x) {
    const double a = g.coord(x.i);
    const double b = g.dim == 2 ? g.coord(x.j) : 0.0;
    return a * a + b * b;
}

struct Field {
    BoxGrid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const BoxGrid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
    Field(const BoxGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != g.size()) throw NonPositiveInput("field size does not match grid");
    }
    std::size_t size() const { return values.size(); }
    double operator[](std::size_t k) const { return values[k]; }
    double& operator[](std::size_t k) { return values[k]; }
    // zero extension
    double at(Node x) const { return inside(grid, x) ? values[flat(grid, x)] : 0.0; }
    bool is_zero() const {
        return std::all_of(values.begin(), values.end(), [](double x) { return x == 0.0; });
    }
    Field scaled(double c) const {
        Field r(*this);
        for (auto& x : r.values) x *= c;
        return r;
    }
    template <class F>
    static Field from_function(const BoxGrid& g, F&& f) {
        Field u(g);
        for (std::size_t k = 0; k < g.size(); ++k) {
            const Node x = unflat(g, k);
            u.values[k] = g.dim == 1 ? f(g.coord(x.i), 0.0) : f(g.coord(x.i), g.coord(x.j));
        }
        return u;
    }
};

inline double holder_quotient(const Field& u, Node x, Node y, double s) {
    if (x == y) throw DiagonalPair("x == y");
    return (u.at(x) - u.at(y)) / std::pow(node_distance(u.grid, x, y), s);
}

struct PairWeight {
    Node x, y;
    double w;          // per ordered pair, h^{2N}/|x-y|^N
    double w_folded;   // both orders, 2 h^{2N}/|x-y|^N
};

inline int default_padding(const BoxGrid& g) { return g.n / 4; }

// Unordered pairs inside box ∪ padding shells with at least one interior
// node. Interior-interior pairs come first in lexicographic order, then
// interior-exterior pairs; the order is part of the reproducibility contract.
inline std::vector<PairWeight> pair_weights(const BoxGrid& g, int padding) {
    if (padding < 0) throw NonPositiveInput("padding must be >= 0");
    std::vector<PairWeight> out;
    const double h2N = std::pow(g.spacing(), 2 * g.dim);
    auto push = [&](Node x, Node y) {
        const double d = node_distance(g, x, y);
        const double w = h2N / std::pow(d, g.dim);
        out.push_back({x, y, w, 2.0 * w});
    };
    const std::size_t M = g.size();
    for (std::size_t a = 0; a < M; ++a)
        for (std::size_t b = a + 1; b < M; ++b) push(unflat(g, a), unflat(g, b));
    const int lo = -padding, hi = g.n + padding;
    std::vector<Node> exterior;
    if (g.dim == 1) {
        for (int i = lo; i < hi; ++i)
            if (i < 0 || i >= g.n) exterior.push_back({i, 0});
    } else {
        for (int j = lo; j < hi; ++j)
            for (int i = lo; i < hi; ++i)
                if (!inside(g, {i, j})) exterior.push_back({i, j});
    }
    for (std::size_t a = 0; a < M; ++a)
        for (const Node& y : exterior) push(unflat(g, a), y);
    return out;
}

// Compact form used by the reductions: b < 0 marks an exterior partner.
struct PairList {
    struct Entry {
        int a, b;
        double inv_ds;   // 1/|x-y|^s
        double w;        // folded weight
    };
    BoxGrid grid;
    double s = 0.5;
    int padding = 0;
    std::vector<Entry> entries;
};

inline PairList build_pair_list(const BoxGrid& g, double s, int padding) {
    PairList pl;
    pl.grid = g;
    pl.s = s;
    pl.padding = padding;
    const auto pw = pair_weights(g, padding);
    pl.entries.reserve(pw.size());
    for (const auto& e : pw) {
        const int a = static_cast<int>(flat(g, e.x));
        const int b = inside(g, e.y) ? static_cast<int>(flat(g, e.y)) : -1;
        pl.entries.push_back({a, b, 1.0 / std::pow(node_distance(g, e.x, e.y), s), e.w_folded});
    }
    return pl;
}

// Σ h^N |u_i|^p
inline double lp_power(const Field& u, double p) {
    CompensatedSum s;
    const double c = u.grid.cell();
    for (double x : u.values)
        if (x != 0.0) s.add(c * std::pow(std::abs(x), p));
    return s.value();
}
inline double lp_norm(const Field& u, double p) {
    if (!(p >= 1.0)) throw NonPositiveInput("lp_norm needs p >= 1");
    return std::pow(lp_power(u, p), 1.0 / p);
}
// Σ h^N a_i |u_i|^q
inline double weighted_q_power(const Field& u, const std::vector<double>& a, double q) {
    CompensatedSum s;
    const double c = u.grid.cell();
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != 0.0) s.add(c * a[i] * std::pow(std::abs(u[i]), q));
    return s.value();
}
inline double weighted_q_norm(const Field& u, const std::vector<double>& a, double q) {
    return std::pow(weighted_q_power(u, a, q), 1.0 / q);
}

enum class PotentialKind { Constant, Quadratic, Gaussian, File };

inline const char* to_string(PotentialKind k) {
    switch (k) {
        case PotentialKind::Constant: return "constant";
        case PotentialKind::Quadratic: return "quadratic";
        case PotentialKind::Gaussian: return "gaussian";
        case PotentialKind::File: return "file";
    }
    return "?";
}

struct PotentialSpec {
    PotentialKind kind = PotentialKind::Constant;
    double value = 1.0;   // constant level, or gaussian amplitude
    double sigma = 1.0;
    std::string path;
    bool operator==(const PotentialSpec&) const = default;
};

inline std::vector<double> read_node_values(const std::string& path, std::size_t expected) {
    std::ifstream in(path);
    if (!in) throw NonPositiveInput("cannot open node value file " + path);
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        std::vector<double> cols;
        double x;
        while (ss >> x) cols.push_back(x);
        if (!cols.empty()) v.push_back(cols.back());
    }
    if (v.size() != expected)
        throw NonPositiveInput(path + ": expected " + std::to_string(expected) + " node values, got " +
                               std::to_string(v.size()));
    return v;
}

inline std::vector<double> evaluate_potential(const PotentialSpec& spec, const BoxGrid& g) {
    std::vector<double> out(g.size());
    if (spec.kind == PotentialKind::File) return read_node_values(spec.path, g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double r2 = radius2(g, unflat(g, k));
        switch (spec.kind) {
            case PotentialKind::Constant: out[k] = spec.value; break;
            case PotentialKind::Quadratic: out[k] = 1.0 + r2; break;
            case PotentialKind::Gaussian: out[k] = spec.value * std::exp(-r2 / (2.0 * spec.sigma * spec.sigma)); break;
            case PotentialKind::File: break;
        }
    }
    return out;
}

// Box half width for which the smallest boundary value of V is at least
// 10 V0. Potentials without growth fall back to L = 4.
inline double default_half_width(const PotentialSpec& V) {
    if (V.kind == PotentialKind::Quadratic) return 3.0;   // 1 + L² >= 10
    return 4.0;
}

struct PotentialPair {
    std::vector<double> V, a;
    double V0 = 0;
    double a_inf_norm = 0;

    // ‖a‖_r with r = (p/q)′ = p/(p - q)
    double a_r_norm(const BoxGrid& g, double q, double p) const {
        const double r = p / (p - q);
        CompensatedSum s;
        for (double x : a) s.add(g.cell() * std::pow(std::abs(x), r));
        return std::pow(s.value(), 1.0 / r);
    }
    // Fraction of nodes with V <= M, the finite-box trace of (V1).
    double sublevel_fraction(double M) const {
        if (V.empty()) return 0.0;
        const auto c = std::count_if(V.begin(), V.end(), [&](double v) { return v <= M; });
        return static_cast<double>(c) / static_cast<double>(V.size());
    }
};

inline PotentialPair make_potentials(const BoxGrid& g, const PotentialSpec& Vs, const PotentialSpec& as) {
    PotentialPair pp;
    pp.V = evaluate_potential(Vs, g);
    pp.a = evaluate_potential(as, g);
    pp.V0 = *std::min_element(pp.V.begin(), pp.V.end());
    pp.a_inf_norm = 0.0;
    for (double x : pp.a) pp.a_inf_norm = std::max(pp.a_inf_norm, std::abs(x));
    return pp;
}

struct PotentialCheck {
    bool V0_ok = false;
    bool a_ok = false;
    std::string detail;
};

inline PotentialCheck check_potentials(const PotentialPair& pp) {
    PotentialCheck c;
    c.V0_ok = pp.V0 > 0.0 && std::all_of(pp.V.begin(), pp.V.end(), [](double v) { return std::isfinite(v); });
    c.a_ok = std::all_of(pp.a.begin(), pp.a.end(), [](double v) { return v > 0.0 && std::isfinite(v); });
    std::ostringstream os;
    os.precision(10);
    os << "min V = " << pp.V0 << ", min a = " << *std::min_element(pp.a.begin(), pp.a.end());
    c.detail = os.str();
    return c;
}

}

#endif
