#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stretchlab/stretchlab.h"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Carries a C API status out of the subcommand bodies.
struct ApiError : std::runtime_error {
    sl_status status;
    ApiError(sl_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(sl_status s, const char* what) {
    if (s != SL_OK) throw ApiError(s, std::string(what) + ": " + sl_last_error());
}

int exit_code(sl_status s) {
    switch (s) {
        case SL_OK: return kExitOk;
        case SL_ERR_INVALID_ARGUMENT:
        case SL_ERR_IO: return kExitValidation;
        default: return kExitNumerical;
    }
}

struct CString {
    char* p = nullptr;
    ~CString() { sl_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

template <class T, void (*Del)(T*)>
struct Handle {
    T* p = nullptr;
    ~Handle() { Del(p); }
};
using Cyl = Handle<sl_cylinder, sl_cylinder_destroy>;
using Map = Handle<sl_gridmap, sl_gridmap_destroy>;
using Prof = Handle<sl_profile, sl_profile_destroy>;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

// Effective configuration of one run; its canonical dump is hashed into every output.
struct RunMeta {
    json config;
    std::string hash;
    std::string header() const { return std::string("stretchlab ") + sl_version() + " config_hash=" + hash; }
    void stamp(json& j) const {
        j["tool"] = "stretchlab";
        j["version"] = sl_version();
        j["config_hash"] = hash;
    }
};

RunMeta make_meta(json config) {
    RunMeta m;
    m.config = std::move(config);
    m.hash = hex64(fnv1a(m.config.dump()));
    return m;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << '\n';
        return;
    }
    std::filesystem::path fp(path);
    if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path());
    std::ofstream f(path);
    if (!f) throw ApiError(SL_ERR_IO, "cannot open " + path + " for writing");
    f << text << '\n';
    if (!f) throw ApiError(SL_ERR_IO, "write failed for " + path);
}

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError(std::string("bad number in ") + what + ": '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string("empty list for ") + what);
    return out;
}

// ---- configuration file ----

struct Geometry {
    double h = 0.5, d = 1.0, L = 1.5;
    int Ns = 32, Nt = 64;
};

struct SolverBlock {
    double p = 8.0;
    std::vector<double> p_list{4, 8, 16, 32, 64};
    std::string bc = "neumann";
    int max_iters = 20000;
    double grad_tol = 1e-6;
    double initial_step = 0.05;
    double backtrack = 0.5;
    double armijo = 1e-4;
    bool bb_steps = true;
    std::uint64_t seed = 1;
    std::string init = "perturbed";
    double init_amplitude = 0.05;
    double dirichlet_R0 = 0.3;
    std::vector<double> eps_list{0.05, 0.1, 0.2};
};

struct OutputBlock {
    std::string out;
    std::string nodes_csv;
    std::string density_dir;
};

struct Config {
    Geometry geometry;
    SolverBlock solver;
    OutputBlock output;
};

const char* kConfigSchema = R"(config file schema (all keys optional, unknown keys rejected):
{
  "geometry": {"h": 0.5, "d": 1.0, "L": 1.5, "Ns": 32, "Nt": 64},
  "solver":   {"p": 8, "p_list": [4, 8, 16, 32, 64], "bc": "neumann" | "dirichlet",
               "max_iters": 20000, "grad_tol": 1e-6, "initial_step": 0.05, "backtrack": 0.5,
               "armijo": 1e-4, "bb_steps": true, "seed": 1,
               "init": "perturbed" | "exact" | "dirichlet", "init_amplitude": 0.05,
               "dirichlet_R0": 0.3, "eps_list": [0.05, 0.1, 0.2]},
  "output":   {"out": "result.json", "nodes_csv": "nodes.csv", "density_dir": "densities"}
})";

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw UsageError("config: '" + where + "' must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) throw UsageError("config: unknown key '" + where + "." + it.key() + "'");
}

template <class T>
void read_key(const json& obj, const char* key, T& dst, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        dst = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw UsageError("config: bad type for '" + where + "." + key + "'");
    }
}

Config load_config(const std::string& path) {
    Config c;
    if (path.empty()) return c;
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read config " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw UsageError("config " + path + " is not valid JSON: " + e.what());
    }
    reject_unknown(j, {"geometry", "solver", "output"}, "");
    if (j.contains("geometry")) {
        const json& g = j["geometry"];
        reject_unknown(g, {"h", "d", "L", "Ns", "Nt"}, "geometry");
        read_key(g, "h", c.geometry.h, "geometry");
        read_key(g, "d", c.geometry.d, "geometry");
        read_key(g, "L", c.geometry.L, "geometry");
        read_key(g, "Ns", c.geometry.Ns, "geometry");
        read_key(g, "Nt", c.geometry.Nt, "geometry");
    }
    if (j.contains("solver")) {
        const json& s = j["solver"];
        reject_unknown(s,
                       {"p", "p_list", "bc", "max_iters", "grad_tol", "initial_step", "backtrack", "armijo",
                        "bb_steps", "seed", "init", "init_amplitude", "dirichlet_R0", "eps_list"},
                       "solver");
        auto& b = c.solver;
        read_key(s, "p", b.p, "solver");
        read_key(s, "p_list", b.p_list, "solver");
        read_key(s, "bc", b.bc, "solver");
        read_key(s, "max_iters", b.max_iters, "solver");
        read_key(s, "grad_tol", b.grad_tol, "solver");
        read_key(s, "initial_step", b.initial_step, "solver");
        read_key(s, "backtrack", b.backtrack, "solver");
        read_key(s, "armijo", b.armijo, "solver");
        read_key(s, "bb_steps", b.bb_steps, "solver");
        read_key(s, "seed", b.seed, "solver");
        read_key(s, "init", b.init, "solver");
        read_key(s, "init_amplitude", b.init_amplitude, "solver");
        read_key(s, "dirichlet_R0", b.dirichlet_R0, "solver");
        read_key(s, "eps_list", b.eps_list, "solver");
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        reject_unknown(o, {"out", "nodes_csv", "density_dir"}, "output");
        read_key(o, "out", c.output.out, "output");
        read_key(o, "nodes_csv", c.output.nodes_csv, "output");
        read_key(o, "density_dir", c.output.density_dir, "output");
    }
    return c;
}

json geometry_json(const Geometry& g) {
    return json{{"h", g.h}, {"d", g.d}, {"L", g.L}, {"Ns", g.Ns}, {"Nt", g.Nt}};
}

sl_boundary parse_bc(const std::string& bc) {
    if (bc == "neumann") return SL_NEUMANN;
    if (bc == "dirichlet") return SL_DIRICHLET;
    throw UsageError("bc must be 'neumann' or 'dirichlet', got '" + bc + "'");
}

sl_solver_options solver_options(const SolverBlock& b, double p) {
    sl_solver_options o;
    sl_solver_options_default(&o);
    o.p = p;
    o.bc = parse_bc(b.bc);
    o.max_iters = b.max_iters;
    o.grad_tol = b.grad_tol;
    o.initial_step = b.initial_step;
    o.backtrack = b.backtrack;
    o.armijo = b.armijo;
    o.bb_steps = b.bb_steps ? 1 : 0;
    o.seed = b.seed;
    return o;
}

json solver_json(const SolverBlock& b) {
    return json{{"bc", b.bc},
                {"max_iters", b.max_iters},
                {"grad_tol", b.grad_tol},
                {"initial_step", b.initial_step},
                {"backtrack", b.backtrack},
                {"armijo", b.armijo},
                {"bb_steps", b.bb_steps},
                {"seed", b.seed}};
}

std::string default_sidecar(const std::string& out, const std::string& suffix) {
    if (out.empty() || out == "-") return "nodes" + suffix;
    std::filesystem::path p(out);
    return (p.parent_path() / (p.stem().string() + suffix)).string();
}

// ---- subcommands ----

struct SvcheckArgs {
    int trials = 1000;
    std::string p_list = "4,6,10";
    std::uint64_t seed = 7;
    std::string out;
};

int run_svcheck(const SvcheckArgs& a) {
    std::vector<double> ps = parse_list(a.p_list, "--p-list");
    RunMeta meta = make_meta(json{{"command", "svcheck"}, {"trials", a.trials}, {"p_list", ps}, {"seed", a.seed}});
    CString report;
    check(sl_svcheck_json(a.trials, ps.data(), ps.size(), a.seed, &report.p), "svcheck");
    json j = json::parse(report.str());
    json out;
    meta.stamp(out);
    out["config"] = meta.config;
    bool pass = j["all_pass"].get<bool>();
    out["all_pass"] = pass;
    out["svnorm"] = j["svnorm"];
    out["pointwise"] = j["pointwise"];
    write_text(a.out, out.dump(2));
    return pass ? kExitOk : kExitNumerical;
}

struct SolveArgs {
    std::string config;
    std::optional<double> p;
    std::optional<std::string> bc;
    std::optional<std::string> init;
    std::optional<double> dirichlet_R0;
    std::optional<std::uint64_t> seed;
    std::optional<double> grad_tol;
    std::optional<int> max_iters;
    std::optional<int> Ns, Nt;
    std::string out;
    std::string nodes_out;
};

int run_solve(const SolveArgs& a) {
    Config c = load_config(a.config);
    SolverBlock& b = c.solver;
    if (a.p) b.p = *a.p;
    if (a.bc) b.bc = *a.bc;
    if (a.init) b.init = *a.init;
    if (a.dirichlet_R0) b.dirichlet_R0 = *a.dirichlet_R0;
    if (a.seed) b.seed = *a.seed;
    if (a.grad_tol) b.grad_tol = *a.grad_tol;
    if (a.max_iters) b.max_iters = *a.max_iters;
    if (a.Ns) c.geometry.Ns = *a.Ns;
    if (a.Nt) c.geometry.Nt = *a.Nt;
    if (!a.out.empty()) c.output.out = a.out;
    if (!a.nodes_out.empty()) c.output.nodes_csv = a.nodes_out;
    if (c.output.out.empty()) c.output.out = "result.json";
    sl_boundary bc = parse_bc(b.bc);
    if (bc == SL_DIRICHLET && b.init == "perturbed") b.init = "dirichlet";
    if (b.init != "perturbed" && b.init != "exact" && b.init != "dirichlet")
        throw UsageError("init must be 'perturbed', 'exact' or 'dirichlet'");
    std::string nodes_csv = c.output.nodes_csv.empty() ? default_sidecar(c.output.out, ".nodes.csv") : c.output.nodes_csv;

    json cfg{{"command", "solve"}, {"geometry", geometry_json(c.geometry)}, {"p", b.p}, {"solver", solver_json(b)},
             {"init", b.init}};
    if (b.init == "perturbed") cfg["init_amplitude"] = b.init_amplitude;
    if (b.init == "dirichlet") cfg["dirichlet_R0"] = b.dirichlet_R0;
    RunMeta meta = make_meta(cfg);

    Cyl cyl;
    const Geometry& g = c.geometry;
    check(sl_cylinder_create(g.h, g.d, g.L, g.Ns, g.Nt, &cyl.p), "geometry");
    Map init;
    if (b.init == "perturbed")
        check(sl_gridmap_perturbed_neumann(cyl.p, b.init_amplitude, b.seed, &init.p), "initial map");
    else if (b.init == "exact")
        check(sl_gridmap_exact_neumann(cyl.p, &init.p), "initial map");
    else
        check(sl_gridmap_dirichlet_initial(cyl.p, b.dirichlet_R0, &init.p), "initial map");

    sl_solver_options opts = solver_options(b, b.p);
    Map result;
    sl_solve_summary sum{};
    sl_status st = sl_solve(cyl.p, init.p, &opts, &result.p, &sum);
    std::string solve_message = sl_last_error();
    if (!result.p) check(st, "solve");

    check(sl_gridmap_write_csv(result.p, cyl.p, nodes_csv.c_str(), meta.header().c_str()), "writing nodes");
    json out;
    meta.stamp(out);
    out["config"] = meta.config;
    out["Jp"] = sum.Jp;
    out["el_residual"] = sum.el_residual;
    out["iters"] = sum.iters;
    out["converged"] = sum.converged != 0;
    out["termination"] = sum.termination == SL_CONVERGED   ? "converged"
                         : sum.termination == SL_MAX_ITERS ? "max_iters"
                                                           : "line_search_failed";
    if (st != SL_OK) out["message"] = solve_message;
    out["nodes_csv"] = nodes_csv;
    double supR = 0.0;
    check(sl_gridmap_sup_R(result.p, &supR), "sup R");
    out["sup_R"] = supR;
    CString diag;
    sl_status ds = sl_diagnose_json(result.p, cyl.p, b.p, bc, b.eps_list.data(), b.eps_list.size(), &diag.p);
    if (ds == SL_OK) out["diagnostics"] = json::parse(diag.str());
    else out["diagnostics_error"] = sl_last_error();
    write_text(c.output.out, out.dump(2));
    if (st != SL_OK) {
        std::cerr << "stretchlab solve: " << sl_status_name(st) << ": " << solve_message << '\n';
        return exit_code(st);
    }
    return ds == SL_OK ? kExitOk : exit_code(ds);
}

struct OdeArgs {
    double p = 8.0;
    double L = 1.5;
    double h = 0.5;
    std::optional<double> R0;
    std::optional<double> slope0;
    bool limit = false;
    std::optional<double> s_star;
    int pairs = 100;
    std::uint64_t seed = 7;
    std::string out = "profile.csv";
    std::string summary;
};

int run_ode(const OdeArgs& a) {
    json cfg{{"command", "ode"}, {"L", a.L}, {"h", a.h}};
    Prof prof;
    if (a.limit) {
        double s_star = 0.0;
        if (a.s_star) s_star = *a.s_star;
        else if (a.R0) check(sl_limit_s_star(a.L, a.h, *a.R0, &s_star), "limit s*");
        else throw UsageError("ode --limit needs --s-star or --dirichlet-R0");
        cfg["limit"] = true;
        cfg["s_star"] = s_star;
        if (a.R0) cfg["dirichlet_R0"] = *a.R0;
        check(sl_profile_limit(s_star, a.L, a.h, &prof.p), "limit profile");
    } else {
        cfg["p"] = a.p;
        if (a.R0 && a.slope0) throw UsageError("ode: give either --dirichlet-R0 or --slope0, not both");
        if (a.slope0) {
            cfg["slope0"] = *a.slope0;
            check(sl_profile_ivp(a.p, a.L, *a.slope0, a.h, &prof.p), "ivp");
        } else {
            double R0 = a.R0.value_or(0.3);
            cfg["dirichlet_R0"] = R0;
            check(sl_profile_shoot(a.p, a.L, a.h, R0, &prof.p), "shooting");
        }
        cfg["pairs"] = a.pairs;
        cfg["seed"] = a.seed;
    }
    RunMeta meta = make_meta(cfg);
    check(sl_profile_write_csv(prof.p, a.out.c_str(), meta.header().c_str()), "writing profile");
    CString js;
    check(sl_profile_json(prof.p, a.limit ? 0 : a.pairs, a.seed, &js.p), "profile summary");
    json out;
    meta.stamp(out);
    out["config"] = meta.config;
    out["profile_csv"] = a.out;
    out["profile"] = json::parse(js.str());
    write_text(a.summary, out.dump(2));
    if (out["profile"].contains("monotonicity") && !out["profile"]["monotonicity"]["pass"].get<bool>())
        return kExitNumerical;
    return kExitOk;
}

struct SweepArgs {
    std::string config;
    std::string p_list;
    std::optional<std::string> bc;
    std::optional<int> Ns, Nt;
    std::optional<std::uint64_t> seed;
    std::string eps_list;
    std::string out;
    std::string density_dir;
    double fail_at_p = -1.0;
};

int run_sweep(const SweepArgs& a) {
    Config c = load_config(a.config);
    SolverBlock& b = c.solver;
    if (!a.p_list.empty()) b.p_list = parse_list(a.p_list, "--p");
    if (!a.eps_list.empty()) b.eps_list = parse_list(a.eps_list, "--eps");
    if (a.bc) b.bc = *a.bc;
    if (a.seed) b.seed = *a.seed;
    if (a.Ns) c.geometry.Ns = *a.Ns;
    if (a.Nt) c.geometry.Nt = *a.Nt;
    if (!a.out.empty()) c.output.out = a.out;
    if (!a.density_dir.empty()) c.output.density_dir = a.density_dir;
    if (c.output.out.empty()) c.output.out = "sweep.json";
    sl_boundary bc = parse_bc(b.bc);

    json cfg{{"command", "sweep"}, {"geometry", geometry_json(c.geometry)}, {"p_list", b.p_list},
             {"solver", solver_json(b)}, {"eps_list", b.eps_list}};
    if (bc == SL_NEUMANN) cfg["init_amplitude"] = b.init_amplitude;
    else cfg["dirichlet_R0"] = b.dirichlet_R0;
    if (a.fail_at_p > 0) cfg["fail_at_p"] = a.fail_at_p;
    RunMeta meta = make_meta(cfg);

    Cyl cyl;
    const Geometry& g = c.geometry;
    check(sl_cylinder_create(g.h, g.d, g.L, g.Ns, g.Nt, &cyl.p), "geometry");
    sl_sweep_options so;
    sl_sweep_options_default(&so);
    so.solver = solver_options(b, b.p_list.front());
    so.eps = b.eps_list.data();
    so.n_eps = b.eps_list.size();
    so.init_amplitude = b.init_amplitude;
    so.dirichlet_R0 = b.dirichlet_R0;
    so.seed = b.seed;
    so.fail_at_p = a.fail_at_p;
    CString js;
    const char* dens = c.output.density_dir.empty() ? nullptr : c.output.density_dir.c_str();
    sl_status st = sl_sweep_json(cyl.p, b.p_list.data(), b.p_list.size(), &so, dens, meta.header().c_str(), &js.p);
    std::string message = sl_last_error();
    if (!js.p) check(st, "sweep");
    json records = json::parse(js.str());
    for (auto& r : records) {
        json stamped;
        meta.stamp(stamped);
        for (auto it = r.begin(); it != r.end(); ++it) stamped[it.key()] = it.value();
        r = std::move(stamped);
    }
    write_text(c.output.out, records.dump(2));
    if (st != SL_OK) {
        std::cerr << "stretchlab sweep: " << sl_status_name(st) << ": " << message << '\n';
        return exit_code(st);
    }
    return kExitOk;
}

struct IdealArgs {
    double h = 0.02, h0 = 0.4, L = 1.5, K0 = 1.2, K_star = -1.0;
    int samples = 10000;
    std::string out;
    std::string csv;
};

int run_idealmap(const IdealArgs& a) {
    json cfg{{"command", "idealmap"}, {"h", a.h}, {"h0", a.h0}, {"L", a.L}, {"K0", a.K0}, {"samples", a.samples}};
    if (a.K_star >= 0) cfg["K_star"] = a.K_star;
    RunMeta meta = make_meta(cfg);
    CString js;
    check(sl_ideal_map_json(a.h, a.h0, a.L, a.K0, a.K_star, a.samples, a.csv.empty() ? nullptr : a.csv.c_str(),
                            meta.header().c_str(), &js.p),
          "ideal map");
    json out;
    meta.stamp(out);
    out["config"] = meta.config;
    json r = json::parse(js.str());
    for (auto it = r.begin(); it != r.end(); ++it) out[it.key()] = it.value();
    if (!a.csv.empty()) out["profile_csv"] = a.csv;
    write_text(a.out, out.dump(2));
    return out["pass"].get<bool>() ? kExitOk : kExitNumerical;
}

int configure_threads(std::optional<int> threads) {
    int n = 0;
    if (threads) n = *threads;
    else if (const char* env = std::getenv("STRETCHLAB_THREADS")) {
        try {
            n = std::stoi(env);
        } catch (const std::exception&) {
            throw UsageError(std::string("STRETCHLAB_THREADS is not an integer: ") + env);
        }
    }
    if (n != 0) check(sl_set_threads(n), "threads");
    return n;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stretchlab: Schatten-norm p-harmonic maps into the hyperbolic plane"};
    app.set_version_flag("--version", std::string(sl_version()));
    app.require_subcommand(1);
    app.footer(kConfigSchema);

    std::optional<int> threads;
    bool deterministic = false;
    app.add_option("--threads", threads, "worker threads for per-cell loops (fallback: STRETCHLAB_THREADS)");
    app.add_flag("--deterministic", deterministic,
                 "fixed reduction order (reductions are always sequential, so results never depend on threads)");

    SvcheckArgs sv;
    auto* c_sv = app.add_subcommand("svcheck", "random property and inequality suites");
    c_sv->add_option("--trials", sv.trials, "trials per p")->capture_default_str();
    c_sv->add_option("--p-list", sv.p_list, "comma-separated exponents")->capture_default_str();
    c_sv->add_option("--seed", sv.seed, "generator seed")->capture_default_str();
    c_sv->add_option("--out", sv.out, "report path (default stdout)");

    SolveArgs so;
    auto* c_so = app.add_subcommand("solve", "minimize J_p on the collar");
    c_so->add_option("--config", so.config, "geometry/solver/output JSON");
    c_so->add_option("--p", so.p, "exponent p > 2");
    c_so->add_option("--bc", so.bc, "neumann | dirichlet");
    c_so->add_option("--init", so.init, "perturbed | exact | dirichlet");
    c_so->add_option("--dirichlet-R0", so.dirichlet_R0, "boundary value R(h) for dirichlet");
    c_so->add_option("--seed", so.seed, "perturbation seed");
    c_so->add_option("--grad-tol", so.grad_tol, "el_residual target");
    c_so->add_option("--max-iters", so.max_iters, "iteration cap");
    c_so->add_option("--Ns", so.Ns, "cells across the collar");
    c_so->add_option("--Nt", so.Nt, "cells around the core");
    c_so->add_option("--out", so.out, "result JSON path");
    c_so->add_option("--nodes-out", so.nodes_out, "node CSV path");

    OdeArgs od;
    auto* c_od = app.add_subcommand("ode", "separated-variable profiles");
    c_od->set_help_flag("--help", "print this help message and exit");
    c_od->add_option("--p", od.p, "exponent")->capture_default_str();
    c_od->add_option("--L", od.L, "core stretch")->capture_default_str();
    c_od->add_option("--h", od.h, "collar half-width")->capture_default_str();
    c_od->add_option("--dirichlet-R0", od.R0, "target R(h)");
    c_od->add_option("--slope0", od.slope0, "initial slope of a plain IVP");
    c_od->add_flag("--limit", od.limit, "p -> infinity limit profile");
    c_od->add_option("--s-star", od.s_star, "flat-core end of the limit profile");
    c_od->add_option("--pairs", od.pairs, "random pairs for the monotonicity checks")->capture_default_str();
    c_od->add_option("--seed", od.seed, "pair sampling seed")->capture_default_str();
    c_od->add_option("--out", od.out, "profile CSV path")->capture_default_str();
    c_od->add_option("--summary", od.summary, "summary JSON path (default stdout)");

    SweepArgs sw;
    auto* c_sw = app.add_subcommand("sweep", "warm-started p-sweep with normalized diagnostics");
    c_sw->add_option("--config", sw.config, "geometry/solver/output JSON");
    c_sw->add_option("--p", sw.p_list, "comma-separated increasing exponents");
    c_sw->add_option("--bc", sw.bc, "neumann | dirichlet");
    c_sw->add_option("--Ns", sw.Ns, "cells across the collar");
    c_sw->add_option("--Nt", sw.Nt, "cells around the core");
    c_sw->add_option("--seed", sw.seed, "perturbation seed");
    c_sw->add_option("--eps", sw.eps_list, "comma-separated concentration radii");
    c_sw->add_option("--out", sw.out, "sweep JSON path");
    c_sw->add_option("--density-dir", sw.density_dir, "directory for per-p density CSVs");
    c_sw->add_option("--fail-at-p", sw.fail_at_p, "inject a failure at this p")->group("");

    IdealArgs ia;
    auto* c_ia = app.add_subcommand("idealmap", "ideal optimal map profile and its region bounds");
    c_ia->set_help_flag("--help", "print this help message and exit");
    c_ia->add_option("--h", ia.h, "collapsed collar half-width")->capture_default_str();
    c_ia->add_option("--h0", ia.h0, "outer collar half-width")->capture_default_str();
    c_ia->add_option("--L", ia.L, "core stretch")->capture_default_str();
    c_ia->add_option("--K0", ia.K0, "Lipschitz constant of the comparison map")->capture_default_str();
    c_ia->add_option("--K-star", ia.K_star, "Lipschitz constant off the lamination (default K0)");
    c_ia->add_option("--samples", ia.samples, "grid points on [0, 2 h0]")->capture_default_str();
    c_ia->add_option("--out", ia.out, "report JSON path (default stdout)");
    c_ia->add_option("--csv", ia.csv, "profile CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        configure_threads(threads);
        (void)deterministic;
        if (*c_sv) return run_svcheck(sv);
        if (*c_so) return run_solve(so);
        if (*c_od) return run_ode(od);
        if (*c_sw) return run_sweep(sw);
        if (*c_ia) return run_idealmap(ia);
    } catch (const UsageError& e) {
        std::cerr << "stretchlab: " << e.what() << "\n\n" << kConfigSchema << '\n';
        return kExitValidation;
    } catch (const ApiError& e) {
        std::cerr << "stretchlab: " << e.what() << '\n';
        return exit_code(e.status);
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "stretchlab: " << e.what() << '\n';
        return kExitValidation;
    } catch (const json::exception& e) {
        std::cerr << "stretchlab: malformed report: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitValidation;
}
