#ifndef NEHARI_EMBEDDING_HPP
#define NEHARI_EMBEDDING_HPP

// Discrete estimate of S_r = sup ‖u‖_r/‖u‖ by multistart ascent.

#include <algorithm>
#include <cmath>
#include <vector>

#include "functionals.hpp"
#include "optimize.hpp"
#include "parallel.hpp"

namespace nehari {

struct EmbeddingEstimate {
    double value = 0;     // best ratio found
    double spread = 0;    // max - min over starts
    Field maximizer;
    std::vector<double> per_start;
};

inline double embedding_ratio(const Field& u, const ProblemData& pd, double r) {
    const double n = luxemburg_norm(u, pd);
    return n > 0.0 ? lp_norm(u, r) / n : 0.0;
}

inline EmbeddingEstimate embedding_constant(const ProblemData& pd, double r, int threads = 1,
                                            DescentOptions opt = {}) {
    const BoxGrid& g = pd.grid;
    const double L = g.half_width;
    std::vector<Field> seeds;
    for (double w : {L / 2.0, L / 4.0, L / 8.0, L / 16.0})
        seeds.push_back(Field::from_function(g, [&](double x, double y) { return std::exp(-(x * x + y * y) / (2 * w * w)); }));
    Field spike(g);
    spike[g.size() / 2] = 1.0;
    seeds.push_back(spike);

    HomogeneousObjective obj;
    obj.value = [&](const Field& z) -> std::optional<double> { return -embedding_ratio(z, pd, r); };
    obj.gradient = [&](const Field& z) {
        const double sigma = luxemburg_norm(z, pd);
        const double P = lp_power(z, r);
        const double N = std::pow(P, 1.0 / r);
        auto gP = lp_power_gradient(z, r);
        auto gs = luxemburg_gradient(z, pd, sigma);
        std::vector<double> out(z.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = -(N / (r * P) * gP[i] / sigma - N * gs[i] / (sigma * sigma));
        return out;
    };
    opt.max_iter = std::min(opt.max_iter, 300);
    std::vector<DescentResult> runs(seeds.size());
    parallel_for(seeds.size(), threads, [&](std::size_t k) { runs[k] = minimize_homogeneous(obj, seeds[k], opt); });

    EmbeddingEstimate est;
    std::size_t best = 0;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        est.per_start.push_back(-runs[k].value);
        if (-runs[k].value > -runs[best].value) best = k;
    }
    est.value = -runs[best].value;
    est.maximizer = runs[best].z;
    const auto [lo, hi] = std::minmax_element(est.per_start.begin(), est.per_start.end());
    est.spread = *hi - *lo;
    return est;
}

}

#endif
