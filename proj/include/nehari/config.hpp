#ifndef NEHARI_CONFIG_HPP
#define NEHARI_CONFIG_HPP

// Run configuration. TOML is read by converting the document into JSON
// while remembering the source line of every key, so both formats share
// one decoder and TOML errors still point at a line.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <toml.hpp>

#include "functionals.hpp"

namespace nehari {

struct LawSpec {
    std::string kind = "power";   // power | power_sum | power_log | custom
    double p = 2.0;               // power, power_log
    double low = 2.0, high = 3.0; // power_sum
    std::string path;             // custom table (t, phi, phi')
    double ell = 0.0, m = 0.0;    // custom indices
    bool operator==(const LawSpec&) const = default;
};

struct RunConfig {
    LawSpec law;
    double s = 0.4;
    int N = 1;
    double L = 0.0;               // 0 picks the default for the V kind
    int n = 65;
    int padding = -1;             // -1 picks n/4
    PotentialSpec V{PotentialKind::Quadratic, 1.0, 1.0, {}};
    PotentialSpec a{PotentialKind::Gaussian, 1.0, 1.0, {}};
    double q = 3.0, p = 4.0;
    std::vector<double> lambdas{1.0};
    std::vector<double> mus;      // explicit μ values
    std::vector<double> mu_auto;  // multipliers of μ̂_n(λ), used when mus is empty
    std::uint64_t seed = 1;
    int restarts = 4;
    int samples = 1000;
    int steps = 6;
    std::string branch = "both";  // minus | plus | both
    std::string seed_kind = "gaussian";
    double zero_band = 1e-6;      // relative μ-band for ℰ⁺ = 0
    std::string output = "out";
    bool operator==(const RunConfig&) const = default;
};

inline GrowthLaw make_law(const LawSpec& l) {
    if (l.kind == "power") return GrowthLaw::power(l.p);
    if (l.kind == "power_sum") return GrowthLaw::power_sum(l.low, l.high);
    if (l.kind == "power_log") return GrowthLaw::power_log(l.p);
    if (l.kind == "custom") return GrowthLaw::custom_csv(l.path, l.ell, l.m);
    throw ConfigParseError("law.kind: unknown law '" + l.kind + "'");
}

inline BoxGrid make_grid(const RunConfig& c) {
    return BoxGrid(c.N, c.L > 0.0 ? c.L : default_half_width(c.V), c.n);
}

inline ProblemData make_problem(const RunConfig& c, double lambda, double mu = 0.0) {
    const BoxGrid g = make_grid(c);
    return make_problem(make_law(c.law), c.s, g, make_potentials(g, c.V, c.a), c.q, c.p, lambda, mu, c.padding);
}

namespace detail {

inline const char* potential_name(PotentialKind k) {
    switch (k) {
        case PotentialKind::Constant: return "constant";
        case PotentialKind::Quadratic: return "quadratic";
        case PotentialKind::Gaussian: return "gaussian";
        case PotentialKind::File: return "file";
    }
    return "?";
}

inline PotentialKind potential_kind(const std::string& s, const std::string& where) {
    if (s == "constant") return PotentialKind::Constant;
    if (s == "quadratic") return PotentialKind::Quadratic;
    if (s == "gaussian") return PotentialKind::Gaussian;
    if (s == "file") return PotentialKind::File;
    throw ConfigParseError(where + ": unknown potential kind '" + s + "'");
}

inline nlohmann::ordered_json potential_json(const PotentialSpec& p) {
    nlohmann::ordered_json j;
    j["kind"] = potential_name(p.kind);
    j["value"] = p.value;
    j["sigma"] = p.sigma;
    if (!p.path.empty()) j["path"] = p.path;
    return j;
}

using LineMap = std::map<std::string, long>;

inline void toml_to_json(const toml::node& node, nlohmann::json& out, const std::string& path, LineMap& lines) {
    lines[path] = static_cast<long>(node.source().begin.line);
    if (auto t = node.as_table()) {
        out = nlohmann::json::object();
        for (auto&& [k, v] : *t) {
            const std::string key(k.str());
            toml_to_json(v, out[key], path.empty() ? key : path + "." + key, lines);
        }
    } else if (auto a = node.as_array()) {
        out = nlohmann::json::array();
        for (std::size_t i = 0; i < a->size(); ++i) {
            nlohmann::json e;
            toml_to_json(*a->get(i), e, path + "[" + std::to_string(i) + "]", lines);
            out.push_back(std::move(e));
        }
    } else if (auto v = node.as_floating_point()) {
        out = v->get();
    } else if (auto v = node.as_integer()) {
        out = v->get();
    } else if (auto v = node.as_boolean()) {
        out = v->get();
    } else if (auto v = node.as_string()) {
        out = v->get();
    } else {
        throw ConfigParseError(path + " (line " + std::to_string(lines[path]) + "): unsupported value type");
    }
}

class Reader {
public:
    Reader(const nlohmann::json& j, const LineMap* lines) : j_(j), lines_(lines) {}

    const nlohmann::json* find(const std::string& path) const {
        const nlohmann::json* cur = &j_;
        std::size_t start = 0;
        while (start <= path.size()) {
            const auto dot = path.find('.', start);
            const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            if (!cur->is_object() || !cur->contains(key)) return nullptr;
            cur = &(*cur)[key];
            if (dot == std::string::npos) break;
            start = dot + 1;
        }
        return cur;
    }
    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        std::string where = path;
        if (lines_) {
            const auto it = lines_->find(path);
            if (it != lines_->end()) where += " (line " + std::to_string(it->second) + ")";
        }
        throw ConfigParseError(where + ": " + what);
    }
    void number(const std::string& path, double& out) const {
        if (auto v = find(path)) {
            if (!v->is_number()) fail(path, "expected a number");
            out = v->get<double>();
        }
    }
    template <class Int>
    void integer(const std::string& path, Int& out) const {
        if (auto v = find(path)) {
            if (!v->is_number_integer()) fail(path, "expected an integer");
            out = v->get<Int>();
        }
    }
    void string(const std::string& path, std::string& out) const {
        if (auto v = find(path)) {
            if (!v->is_string()) fail(path, "expected a string");
            out = v->get<std::string>();
        }
    }
    // accepts a single number or a list of numbers
    void numbers(const std::string& path, std::vector<double>& out) const {
        if (auto v = find(path)) {
            if (v->is_number()) {
                out = {v->get<double>()};
                return;
            }
            if (!v->is_array()) fail(path, "expected a number or a list of numbers");
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_number()) fail(path, "expected a list of numbers");
                out.push_back(e.get<double>());
            }
        }
    }
    void potential(const std::string& path, PotentialSpec& out) const {
        std::string kind;
        string(path + ".kind", kind);
        if (!kind.empty()) out.kind = potential_kind(kind, path + ".kind");
        number(path + ".value", out.value);
        number(path + ".sigma", out.sigma);
        string(path + ".path", out.path);
    }

private:
    const nlohmann::json& j_;
    const LineMap* lines_;
};

inline RunConfig decode(const nlohmann::json& j, const LineMap* lines) {
    Reader r(j, lines);
    RunConfig c;
    r.string("law.kind", c.law.kind);
    r.number("law.p", c.law.p);
    r.number("law.low", c.law.low);
    r.number("law.high", c.law.high);
    r.string("law.path", c.law.path);
    r.number("law.ell", c.law.ell);
    r.number("law.m", c.law.m);
    r.number("domain.s", c.s);
    r.integer("domain.N", c.N);
    r.number("domain.L", c.L);
    r.integer("domain.n", c.n);
    r.integer("domain.padding", c.padding);
    r.potential("potential.V", c.V);
    r.potential("potential.a", c.a);
    r.number("problem.q", c.q);
    r.number("problem.p", c.p);
    r.numbers("problem.lambda", c.lambdas);
    r.numbers("problem.mu", c.mus);
    r.numbers("problem.mu_auto", c.mu_auto);
    r.integer("run.seed", c.seed);
    r.integer("run.restarts", c.restarts);
    r.integer("run.samples", c.samples);
    r.integer("run.steps", c.steps);
    r.string("run.branch", c.branch);
    r.string("run.seed_kind", c.seed_kind);
    r.number("run.zero_band", c.zero_band);
    r.string("run.output", c.output);
    if (c.law.kind != "power" && c.law.kind != "power_sum" && c.law.kind != "power_log" && c.law.kind != "custom")
        r.fail("law.kind", "unknown law '" + c.law.kind + "'");
    if (c.branch != "minus" && c.branch != "plus" && c.branch != "both")
        r.fail("run.branch", "expected minus, plus or both");
    if (c.lambdas.empty()) r.fail("problem.lambda", "needs at least one value");
    if (c.N != 1 && c.N != 2) r.fail("domain.N", "expected 1 or 2");
    if (c.n < 3) r.fail("domain.n", "needs at least 3 nodes per axis");
    if (c.restarts < 3) r.fail("run.restarts", "needs at least 3");
    return c;
}

}

inline nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["law"]["kind"] = c.law.kind;
    j["law"]["p"] = c.law.p;
    j["law"]["low"] = c.law.low;
    j["law"]["high"] = c.law.high;
    if (!c.law.path.empty()) j["law"]["path"] = c.law.path;
    j["law"]["ell"] = c.law.ell;
    j["law"]["m"] = c.law.m;
    j["domain"]["s"] = c.s;
    j["domain"]["N"] = c.N;
    j["domain"]["L"] = c.L;
    j["domain"]["n"] = c.n;
    j["domain"]["padding"] = c.padding;
    j["potential"]["V"] = detail::potential_json(c.V);
    j["potential"]["a"] = detail::potential_json(c.a);
    j["problem"]["q"] = c.q;
    j["problem"]["p"] = c.p;
    j["problem"]["lambda"] = c.lambdas;
    j["problem"]["mu"] = c.mus;
    j["problem"]["mu_auto"] = c.mu_auto;
    j["run"]["seed"] = c.seed;
    j["run"]["restarts"] = c.restarts;
    j["run"]["samples"] = c.samples;
    j["run"]["steps"] = c.steps;
    j["run"]["branch"] = c.branch;
    j["run"]["seed_kind"] = c.seed_kind;
    j["run"]["zero_band"] = c.zero_band;
    j["run"]["output"] = c.output;
    return j;
}

inline RunConfig parse_json_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigParseError(std::string("JSON: ") + e.what());
    }
    return detail::decode(j, nullptr);
}

inline RunConfig parse_toml_config(const std::string& text) {
    toml::table tbl;
    try {
        tbl = toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << "TOML line " << e.source().begin.line << ", column " << e.source().begin.column << ": "
           << e.description();
        throw ConfigParseError(os.str());
    }
    nlohmann::json j;
    detail::LineMap lines;
    detail::toml_to_json(tbl, j, "", lines);
    return detail::decode(j, &lines);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    return json ? parse_json_config(ss.str()) : parse_toml_config(ss.str());
}

}

#endif
