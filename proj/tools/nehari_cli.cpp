// nehari: command-line front end. Exit codes: 0 all asserted invariants
// passed, 2 a certificate was flagged, 1 error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nehari/config.hpp"
#include "nehari/io.hpp"
#include "nehari/reports.hpp"

namespace fs = std::filesystem;
using namespace nehari;

namespace {

constexpr const char* kVersion = "nehari 1.0.0";

struct Overrides {
    std::string config;
    int threads = 1;
    std::string output;
    std::vector<double> lambdas, mus, mu_auto;
    std::string branch, law, seed_kind;
    int grid_n = 0;
    double box_L = 0;
    long long seed = -1;
    int samples = 0, steps = 0;
};

// "power:2", "power_sum:2,3", "power_log:2", "custom:path,ell,m"
LawSpec parse_law_flag(const std::string& s) {
    LawSpec l;
    const auto colon = s.find(':');
    l.kind = s.substr(0, colon);
    std::vector<std::string> args;
    if (colon != std::string::npos) {
        std::stringstream ss(s.substr(colon + 1));
        std::string a;
        while (std::getline(ss, a, ',')) args.push_back(a);
    }
    auto num = [&](std::size_t i) {
        if (i >= args.size()) throw ConfigParseError("--law " + s + ": missing argument " + std::to_string(i + 1));
        try {
            return std::stod(args[i]);
        } catch (const std::exception&) {
            throw ConfigParseError("--law " + s + ": '" + args[i] + "' is not a number");
        }
    };
    if (l.kind == "power" || l.kind == "power_log") {
        l.p = num(0);
    } else if (l.kind == "power_sum") {
        l.low = num(0);
        l.high = num(1);
    } else if (l.kind == "custom") {
        if (args.empty()) throw ConfigParseError("--law custom needs a path");
        l.path = args[0];
        l.ell = num(1);
        l.m = num(2);
    } else {
        throw ConfigParseError("--law: unknown law '" + l.kind + "'");
    }
    return l;
}

RunConfig resolve_config(const Overrides& o) {
    RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.output.empty()) c.output = o.output;
    if (!o.lambdas.empty()) c.lambdas = o.lambdas;
    if (!o.mus.empty()) c.mus = o.mus;
    if (!o.mu_auto.empty()) c.mu_auto = o.mu_auto;
    if (!o.branch.empty()) c.branch = o.branch;
    if (!o.law.empty()) c.law = parse_law_flag(o.law);
    if (!o.seed_kind.empty()) c.seed_kind = o.seed_kind;
    if (o.grid_n > 0) c.n = o.grid_n;
    if (o.box_L > 0) c.L = o.box_L;
    if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
    if (o.samples > 0) c.samples = o.samples;
    if (o.steps > 0) c.steps = o.steps;
    return c;
}

class Run {
public:
    Run(std::string command, RunConfig cfg, int threads)
        : command_(std::move(command)), cfg_(std::move(cfg)), threads_(threads),
          start_(std::chrono::steady_clock::now()) {}

    const RunConfig& cfg() const { return cfg_; }
    int threads() const { return threads_; }
    fs::path out(const std::string& name) const { return fs::path(cfg_.output) / name; }

    void table(const std::string& name, const CsvTable& t) {
        t.write(out(name));
        files_.push_back(name);
    }
    void json(const std::string& name, const ojson& j) {
        write_json(out(name), j);
        files_.push_back(name);
    }
    void script(const std::string& name, const std::string& text) {
        CsvTable::write_text(out(name), text);
        files_.push_back(name);
    }
    void flag(const std::string& what) {
        flags_.push_back(what);
        std::cerr << "flag: " << what << "\n";
    }
    void lap(const std::string& stage) {
        const auto now = std::chrono::steady_clock::now();
        walls_[stage] = std::chrono::duration<double>(now - start_).count();
    }
    int finish() {
        lap("total");
        ojson m;
        m["tool"] = kVersion;
        m["command"] = command_;
        m["threads"] = threads_;
        m["compiler"] = __VERSION__;
        m["config"] = to_json(cfg_);
        m["outputs"] = files_;
        m["flags"] = flags_;
        m["wall_seconds"] = walls_;
        write_json(out("manifest.json"), m);
        return flags_.empty() ? 0 : 2;
    }

private:
    std::string command_;
    RunConfig cfg_;
    int threads_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::string> files_, flags_;
    ojson walls_ = ojson::object();
};

// Builds the problem and refuses to continue when a hypothesis fails.
ProblemData validated_problem(const RunConfig& c, double lambda, double mu = 0.0) {
    const ProblemData pd = make_problem(c, lambda, mu);
    if (!pd.validated()) {
        std::string msg = "hypotheses failed:";
        for (const auto& it : pd.hypotheses.items)
            if (!it.passed) msg += " " + it.name + " (" + it.detail + ")";
        throw InvalidRegime(msg);
    }
    return pd;
}

ExtremalOptions extremal_options(const RunConfig& c, int threads) {
    ExtremalOptions o;
    o.restarts = c.restarts;
    o.threads = threads;
    o.seed = c.seed;
    return o;
}

Field seed_field(const RunConfig& c, const BoxGrid& g) {
    if (c.seed_kind == "gaussian") return standard_seed(g, 0, c.seed);
    if (c.seed_kind == "two_bump") return standard_seed(g, 1, c.seed);
    if (c.seed_kind == "random") return standard_seed(g, 2, c.seed);
    if (c.seed_kind == "sign_changing") return standard_seed(g, 3, c.seed);
    throw ConfigParseError("run.seed_kind: expected gaussian, two_bump, random or sign_changing");
}

int cmd_check(Run& run) {
    const auto& c = run.cfg();
    const BoxGrid g = make_grid(c);
    const auto rep = full_check(make_law(c.law), c.s, c.N, c.q, c.p, make_potentials(g, c.V, c.a));
    for (const auto& it : rep.items)
        std::cout << (it.passed ? "PASS " : "FAIL ") << it.name << ": " << it.detail << "\n";
    run.json("check.json", to_json(rep));
    if (!rep.all_passed()) run.flag("hypothesis check failed");
    return run.finish();
}

int cmd_fibering(Run& run) {
    const auto& c = run.cfg();
    const ProblemData pd = validated_problem(c, c.lambdas.front());
    const auto fp = fibering_profile(seed_field(c, pd.grid), pd, 200);
    std::vector<double> mus = c.mus;
    if (mus.empty() && !c.mu_auto.empty()) {
        const auto ext = extremal_pair(pd, embedding_constant(pd, pd.p, run.threads()).value,
                                       extremal_options(c, run.threads()));
        for (double f : c.mu_auto) mus.push_back(f * ext.mu_n);
    }
    CsvTable t;
    t.comment("fibering profile of u/|u| (seed " + c.seed_kind + "), lambda = " + fmt17(pd.lambda));
    t.comment("t_crit = " + fmt17(fp.t_crit) + ", s_crit = " + fmt17(fp.s_crit));
    t.comment("Lambda_n = " + fmt17(fp.lambda_n) + ", Lambda_e = " + fmt17(fp.lambda_e));
    std::vector<std::pair<double, double>> markers;   // (t, mu)
    for (double mu : mus) {
        const ProblemData pm = pd.with_mu(mu);
        const auto roots = nehari_roots(Ray(fp.u, pm));
        if (roots.status == RootStatus::Empty) {
            t.comment("mu = " + fmt17(mu) + ": no intersection");
        } else {
            t.comment("mu = " + fmt17(mu) + ": t_minus = " + fmt17(*roots.t_minus) + ", t_plus = " + fmt17(*roots.t_plus));
            markers.push_back({*roots.t_minus, mu});
            markers.push_back({*roots.t_plus, mu});
        }
    }
    t.column("t", "ray parameter, field t*u with |u| = 1");
    t.column("Q_n", "R_n(tu)");
    t.column("Q_e", "R_e(tu)");
    t.column("dQ_n", "d/dt R_n(tu)");
    for (const auto& s : fp.samples) t.row(std::vector<double>{s.t, s.Qn, s.Qe, s.Qn_prime});
    run.table("fibering.csv", t);
    std::string gp = gnuplot_script("fibering.csv", "fibering.png", "fibering maps", t.names(), "t", {"Q_n", "Q_e"}, true);
    std::string extra;
    for (const auto& [tm, mu] : markers)
        extra += "set arrow from " + fmt17(tm) + ", graph 0 to " + fmt17(tm) + ", graph 1 nohead dt 2\n";
    for (double mu : mus) extra += "set arrow from graph 0, first " + fmt17(mu) + " to graph 1, first " + fmt17(mu) + " nohead dt 3\n";
    const auto at = gp.find("plot ");
    gp.insert(at, extra);
    run.script("fibering.gp", gp);
    ojson j = {{"t_crit", fp.t_crit}, {"s_crit", fp.s_crit}, {"lambda_n", fp.lambda_n}, {"lambda_e", fp.lambda_e}};
    run.json("fibering.json", j);
    return run.finish();
}

int cmd_extremal(Run& run) {
    const auto& c = run.cfg();
    const ProblemData pd = validated_problem(c, c.lambdas.front());
    const auto Sp = embedding_constant(pd, pd.p, run.threads());
    run.lap("embedding");
    const auto curve = extremal_curve(pd, c.lambdas, Sp.value, extremal_options(c, run.threads()));
    run.lap("extremal");
    CsvTable t;
    t.comment("extremal parameters, estimates on the grid (upper bounds on the discrete infima)");
    t.comment("S_p estimate = " + fmt17(Sp.value) + " (spread " + fmt17(Sp.spread) + ")");
    t.column("lambda", "coefficient of the p-term");
    t.column("mu_n", "min of Lambda_n over restarts");
    t.column("mu_e", "min of Lambda_e over restarts");
    t.column("spread_n", "max - min of Lambda_n over restarts");
    t.column("spread_e", "max - min of Lambda_e over restarts");
    t.column("floor", "analytic positive floor for mu_n with the discrete S_p");
    ojson rep = ojson::array();
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto& r = curve[i];
        t.row(std::vector<double>{r.lambda, r.mu_n, r.mu_e, r.spread_n, r.spread_e, r.lower_floor});
        rep.push_back(to_json(r));
        run.table("minimizer_n_" + std::to_string(i) + ".csv", field_table(r.minimizer_n, "extremal minimizer u*, |u*| = 1, lambda = " + fmt17(r.lambda)));
        run.table("minimizer_e_" + std::to_string(i) + ".csv", field_table(r.minimizer_e, "extremal minimizer u_*, |u_*| = 1, lambda = " + fmt17(r.lambda)));
        if (!(r.lower_floor > 0.0 && r.lower_floor <= r.mu_n && r.mu_n < r.mu_e))
            run.flag("ordering 0 < floor <= mu_n < mu_e fails at lambda = " + fmt17(r.lambda));
        if (i > 0 && r.mu_n < curve[i - 1].mu_n - std::max(r.spread_n, curve[i - 1].spread_n) - 1e-9 * r.mu_n)
            run.flag("mu_n decreases in lambda beyond the multistart spread at lambda = " + fmt17(r.lambda));
    }
    run.table("extremal.csv", t);
    run.script("extremal.gp", gnuplot_script("extremal.csv", "extremal.png", "extremal parameters", t.names(), "lambda",
                                             {"mu_n", "mu_e", "floor"}, true));
    run.json("extremal.json", rep);
    return run.finish();
}

ojson nonexist_path(Run& run, const ProblemData& pm, const ExtremalResult& ext) {
    const auto& c = run.cfg();
    const auto cert = nonexistence_check(pm, ext.mu_n, c.samples, ext.minimizer_n, c.seed, run.threads());
    if (!cert.positive) run.flag("nonexistence certificate has nonpositive margin");
    return to_json(cert);
}

double resolve_mu(const RunConfig& c, double mu_n, double fallback) {
    if (!c.mus.empty()) return c.mus.front();
    return (c.mu_auto.empty() ? fallback : c.mu_auto.front()) * mu_n;
}

int cmd_solve(Run& run) {
    const auto& c = run.cfg();
    const ProblemData pd = validated_problem(c, c.lambdas.front());
    const EmbeddingConstants K = estimate_constants(pd, run.threads());
    const auto ext = extremal_pair(pd, K.S_p, extremal_options(c, run.threads()));
    run.lap("extremal");
    const double mu = resolve_mu(c, ext.mu_n, 1.25);
    const ProblemData pm = pd.with_mu(mu);
    ojson rep;
    rep["lambda"] = pd.lambda;
    rep["mu"] = mu;
    rep["extremal"] = to_json(ext);
    rep["S_p"] = K.S_p;
    rep["S_q"] = K.S_q;
    if (mu < ext.mu_n) {
        rep["regime"] = "empty";
        rep["nonexistence"] = nonexist_path(run, pm, ext);
        run.json("solve.json", rep);
        return run.finish();
    }
    rep["regime"] = "two_solutions";
    SolveOptions so;
    so.threads = run.threads();
    so.constants = K;
    const auto seeds = default_seeds(pm.grid, ext.minimizer_n, c.seed);
    std::optional<SolutionReport> minus, plus;
    if (c.branch != "plus") minus = minimize_branch(pm, Branch::Minus, seeds, so, ext.minimizer_n);
    if (c.branch != "minus") plus = minimize_branch(pm, Branch::Plus, seeds, so, ext.minimizer_n);
    run.lap("solve");
    if (minus) {
        if (!minus->converged) run.flag("minus branch residual above tolerance");
        if (minus->energy < minus->certificates.D_mu_bound) run.flag("minus energy below D_mu");
        if (minus->norm < minus->certificates.c_mu_bound) run.flag("minus norm below c_mu");
        rep["minus"] = to_json(*minus);
        run.table("solve_minus_field.csv", field_table(minus->field, "Minus-branch solution u"));
    }
    if (plus) {
        const auto d = sign_diagnostics(pm, *plus, ext.mu_e, c.zero_band);
        plus->certificates.sign_vs_mu_e = d.agrees ? "agrees" : "disagrees";
        if (!plus->converged) run.flag("plus branch residual above tolerance");
        if (!d.agrees) run.flag("sign of E_plus disagrees with mu vs mu_e (possible mu_e estimation error)");
        rep["plus"] = to_json(*plus);
        rep["plus_sign"] = to_json(d);
        run.table("solve_plus_field.csv", field_table(plus->field, "Plus-branch solution v"));
    }
    if (minus && plus && !(plus->energy < minus->energy)) run.flag("E_plus is not below E_minus");
    run.json("solve.json", rep);
    return run.finish();
}

int cmd_sweep(Run& run) {
    const auto& c = run.cfg();
    const ProblemData pd = validated_problem(c, c.lambdas.front());
    const EmbeddingConstants K = estimate_constants(pd, run.threads());
    const auto curve = extremal_curve(pd, c.lambdas, K.S_p, extremal_options(c, run.threads()));
    run.lap("extremal");
    std::vector<double> factors = c.mu_auto.empty() && c.mus.empty() ? std::vector<double>{1.25} : c.mu_auto;

    struct Cell {
        std::size_t ext;
        double mu;
        std::optional<SolutionReport> minus, plus;
        std::optional<NonexistenceCertificate> cert;
        SignDiagnostic sign;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (!c.mus.empty())
            for (double mu : c.mus) cells.push_back({i, mu, {}, {}, {}, {}});
        else
            for (double f : factors) cells.push_back({i, f * curve[i].mu_n, {}, {}, {}, {}});
    }
    SolveOptions so;
    so.threads = 1;
    so.constants = K;
    parallel_for(cells.size(), run.threads(), [&](std::size_t k) {
        Cell& cell = cells[k];
        const auto& ext = curve[cell.ext];
        const ProblemData pm = pd.with_lambda(ext.lambda).with_mu(cell.mu);
        if (cell.mu < ext.mu_n) {
            cell.cert = nonexistence_check(pm, ext.mu_n, c.samples, ext.minimizer_n, c.seed, 1);
            return;
        }
        const auto seeds = default_seeds(pm.grid, ext.minimizer_n, c.seed);
        cell.minus = minimize_branch(pm, Branch::Minus, seeds, so, ext.minimizer_n);
        cell.plus = minimize_branch(pm, Branch::Plus, seeds, so, ext.minimizer_n);
        cell.sign = sign_diagnostics(pm, *cell.plus, ext.mu_e, c.zero_band);
    });
    run.lap("cells");

    CsvTable t;
    t.comment("two-parameter sweep; u = Minus-branch minimizer, v = Plus-branch minimizer");
    t.comment("S_p estimate = " + fmt17(K.S_p) + ", S_q estimate = " + fmt17(K.S_q));
    t.column("lambda", "coefficient of the p-term");
    t.column("mu", "coefficient of the q-term");
    t.column("mu_n", "extremal estimate mu_n(lambda)");
    t.column("mu_e", "extremal estimate mu_e(lambda)");
    t.column("regime", "empty (mu < mu_n) or two_solutions");
    t.column("E_minus", "energy of u (nan in the empty regime)");
    t.column("E_plus", "energy of v");
    t.column("u_norm", "Luxemburg norm of u");
    t.column("v_norm", "Luxemburg norm of v");
    t.column("resid_minus", "max_i |I'(u)e_i|/|e_i|");
    t.column("resid_plus", "max_i |I'(v)e_i|/|e_i|");
    t.column("cls_minus", "sign class of I''(u)(u,u)");
    t.column("cls_plus", "sign class of I''(v)(v,v)");
    t.column("sign_plus", "observed sign of E_plus");
    t.column("margin", "nonexistence margin min Lambda_n - mu over samples (nan otherwise)");
    const std::string nan = "nan";
    ojson rep = ojson::array();
    for (const auto& cell : cells) {
        const auto& ext = curve[cell.ext];
        std::vector<std::string> row{fmt17(ext.lambda), fmt17(cell.mu), fmt17(ext.mu_n), fmt17(ext.mu_e)};
        ojson j = {{"lambda", ext.lambda}, {"mu", cell.mu}};
        if (cell.cert) {
            row.insert(row.end(), {"empty", nan, nan, nan, nan, nan, nan, nan, nan, nan, fmt17(cell.cert->min_margin)});
            j["nonexistence"] = to_json(*cell.cert);
            if (!cell.cert->positive) run.flag("nonpositive nonexistence margin at lambda = " + fmt17(ext.lambda));
        } else {
            const auto& u = *cell.minus;
            const auto& v = *cell.plus;
            row.insert(row.end(), {"two_solutions", fmt17(u.energy), fmt17(v.energy), fmt17(u.norm), fmt17(v.norm),
                                   fmt17(u.residual), fmt17(v.residual), to_string(u.branch), to_string(v.branch),
                                   to_string(cell.sign.observed), nan});
            j["minus"] = to_json(u);
            j["plus"] = to_json(v);
            j["plus_sign"] = to_json(cell.sign);
            const std::string at = " at lambda = " + fmt17(ext.lambda) + ", mu = " + fmt17(cell.mu);
            if (!u.converged || !v.converged) run.flag("residual above tolerance" + at);
            if (!(v.energy < u.energy)) run.flag("E_plus is not below E_minus" + at);
            if (u.energy < u.certificates.D_mu_bound) run.flag("E_minus below D_mu" + at);
            if (!cell.sign.agrees) run.flag("sign of E_plus disagrees with mu vs mu_e" + at);
        }
        t.row(row);
        rep.push_back(j);
    }
    run.table("sweep.csv", t);
    run.script("sweep.gp", gnuplot_script("sweep.csv", "sweep.png", "branch energies", t.names(), "mu",
                                          {"E_minus", "E_plus"}));
    run.json("sweep.json", rep);
    return run.finish();
}

int cmd_nonexist(Run& run) {
    const auto& c = run.cfg();
    const ProblemData pd = validated_problem(c, c.lambdas.front());
    const auto ext = extremal_pair(pd, embedding_constant(pd, pd.p, run.threads()).value,
                                   extremal_options(c, run.threads()));
    run.lap("extremal");
    const double mu = resolve_mu(c, ext.mu_n, 0.9);
    const auto cert = nonexistence_check(pd.with_mu(mu), ext.mu_n, c.samples, ext.minimizer_n, c.seed, run.threads());
    CsvTable t;
    t.comment(cert.label);
    t.column("lambda", "coefficient of the p-term");
    t.column("mu", "coefficient of the q-term");
    t.column("mu_n", "extremal estimate mu_n(lambda)");
    t.column("samples", "number of sampled rays");
    t.column("min_margin", "min over samples of Lambda_n(u) - mu");
    t.row(std::vector<double>{pd.lambda, mu, ext.mu_n, static_cast<double>(cert.samples), cert.min_margin});
    run.table("nonexist.csv", t);
    run.json("nonexist.json", to_json(cert));
    if (!cert.positive) run.flag("nonexistence certificate has nonpositive margin");
    return run.finish();
}


// μ_k = μ̂_n(1 + 2^{-k}) toward the degenerate point on the Minus branch.
int cmd_continue(Run& run) {
    const auto& c = run.cfg();
    const ProblemData pd = validated_problem(c, c.lambdas.front());
    const EmbeddingConstants K = estimate_constants(pd, run.threads());
    const auto ext = extremal_pair(pd, K.S_p, extremal_options(c, run.threads()));
    run.lap("extremal");
    SolveOptions so;
    so.threads = run.threads();
    so.constants = K;
    const auto res = degenerate_continuation(pd, ContinuationTarget::MuToMuN, ext.mu_n, ext.minimizer_n, c.steps, so);
    run.lap("continuation");
    CsvTable t;
    t.comment("Minus-branch continuation toward mu_n = " + fmt17(ext.mu_n) + ", lambda = " + fmt17(pd.lambda));
    t.column("k", "step, mu_k = mu_n (1 + 2^-k)");
    t.column("mu", "coefficient of the q-term");
    t.column("E_minus", "energy of the Minus solution u_k");
    t.column("t_minus", "smaller Nehari root on the ray of u_k");
    t.column("t_plus", "larger Nehari root on the ray of u_k");
    t.column("gap", "t_plus - t_minus");
    t.column("u_norm", "Luxemburg norm of u_k");
    t.column("residual", "max_i |I'(u_k)e_i|/|e_i|");
    t.column("class", "sign class of I''(u_k)(u_k,u_k)");
    for (std::size_t k = 0; k < res.steps.size(); ++k) {
        const auto& st = res.steps[k];
        t.row(std::vector<std::string>{std::to_string(k + 1), fmt17(st.mu), fmt17(st.energy), fmt17(st.t_minus),
                                       fmt17(st.t_plus), fmt17(st.gap), fmt17(st.norm), fmt17(st.residual),
                                       to_string(st.branch)});
    }
    run.table("continuation.csv", t);
    run.json("continuation.json", to_json(res));
    const auto& f = res.final_report;
    if (f.branch != Branch::Zero) run.flag("end point is not classified zero");
    if (!(f.residual < 1e-5 * (1.0 + std::abs(f.energy))))
        run.flag("end point residual " + fmt17(f.residual) + " above 1e-5 (1 + |E|)");
    return run.finish();
}
}

int main(int argc, char** argv) {
    CLI::App app{"Nehari-manifold solver for fractional Orlicz problems with indefinite nonlinearity"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();
    Overrides o;
    app.add_option("-c,--config", o.config, "run config (.toml or .json)")->check(CLI::ExistingFile);
    app.add_option("-j,--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("-o,--output", o.output, "output directory");
    app.add_option("--lambda", o.lambdas, "lambda values");
    app.add_option("--mu", o.mus, "explicit mu values");
    app.add_option("--mu-auto", o.mu_auto, "mu as multipliers of the extremal estimate mu_n(lambda)");
    app.add_option("--branch", o.branch, "minus, plus or both")->check(CLI::IsMember({"minus", "plus", "both"}));
    app.add_option("--law", o.law, "power:P, power_sum:LOW,HIGH, power_log:P or custom:PATH,ELL,M");
    app.add_option("--grid-n", o.grid_n, "nodes per axis");
    app.add_option("--box-L", o.box_L, "half width of the box");
    app.add_option("--seed-kind", o.seed_kind, "gaussian, two_bump, random or sign_changing");
    app.add_option("--seed", o.seed, "rng seed");
    app.add_option("--samples", o.samples, "rays sampled by the nonexistence certificate");
    app.add_option("--steps", o.steps, "continuation steps");

    struct Sub { const char* name; const char* help; int (*fn)(Run&); };
    const Sub subs[] = {
        {"check", "check the growth law and potentials against the hypotheses", cmd_check},
        {"fibering", "tabulate the fibering maps of one seed field", cmd_fibering},
        {"extremal", "estimate mu_n(lambda) and mu_e(lambda) over the lambda list", cmd_extremal},
        {"solve", "solve the Minus and/or Plus branch at one (lambda, mu)", cmd_solve},
        {"sweep", "solve both branches over the lambda x mu grid", cmd_sweep},
        {"nonexist", "sampled nonexistence certificate for mu below mu_n", cmd_nonexist},
        {"continue", "Minus-branch continuation toward the degenerate point mu_n", cmd_continue},
    };
    for (const auto& s : subs) app.add_subcommand(s.name, s.help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    try {
        for (const auto& s : subs) {
            if (!app.got_subcommand(s.name)) continue;
            Run run(s.name, resolve_config(o), o.threads);
            return s.fn(run);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
