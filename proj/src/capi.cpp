#include "stretchlab/stretchlab.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "report_json.hpp"
#include "stretchlab/parallel.hpp"

using namespace stretchlab;

struct sl_cylinder {
    Cylinder cyl;
};
struct sl_gridmap {
    GridMap u;
};
struct sl_profile {
    Profile prof;
};

namespace {

thread_local std::string g_last_error;

template <class F>
sl_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return SL_OK;
    } catch (const NoBracket& e) {
        std::ostringstream os;
        os << e.what() << " (attainable range [" << e.attainable_lo << ", " << e.attainable_hi << "])";
        g_last_error = os.str();
        return SL_ERR_NO_BRACKET;
    } catch (const LineSearchFailed& e) {
        g_last_error = e.what();
        return SL_ERR_LINE_SEARCH;
    } catch (const NumericalError& e) {
        g_last_error = e.what();
        return SL_ERR_NUMERICAL;
    } catch (const ValidationError& e) {
        g_last_error = e.what();
        return SL_ERR_INVALID_ARGUMENT;
    } catch (const std::ios_base::failure& e) {
        g_last_error = e.what();
        return SL_ERR_IO;
    } catch (const std::filesystem::filesystem_error& e) {
        g_last_error = e.what();
        return SL_ERR_IO;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return SL_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SL_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return SL_ERR_INTERNAL;
    }
}

template <class T>
void require(const T* ptr, const char* what) {
    if (!ptr) throw ValidationError(std::string("null argument: ") + what);
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

SolverOptions to_options(const sl_solver_options& o) {
    SolverOptions so;
    so.p = o.p;
    if (o.bc != SL_NEUMANN && o.bc != SL_DIRICHLET) throw ValidationError("unknown boundary kind");
    so.bc = o.bc == SL_DIRICHLET ? BoundaryKind::Dirichlet : BoundaryKind::Neumann;
    so.max_iters = o.max_iters;
    so.grad_tol = o.grad_tol;
    so.initial_step = o.initial_step;
    so.backtrack = o.backtrack;
    so.armijo = o.armijo;
    so.bb_steps = o.bb_steps != 0;
    so.gauge_fix = o.gauge_fix != 0;
    so.seed = o.seed;
    so.validate();
    return so;
}

BoundaryKind to_bc(sl_boundary bc) {
    if (bc != SL_NEUMANN && bc != SL_DIRICHLET) throw ValidationError("unknown boundary kind");
    return bc == SL_DIRICHLET ? BoundaryKind::Dirichlet : BoundaryKind::Neumann;
}

void check_node_index(const GridMap& u, int i, int j) {
    if (i < 0 || i > u.Ns() || j < 0 || j >= u.Nt()) throw ValidationError("node index out of range");
}

void check_shape(const GridMap& u, const Cylinder& c) {
    if (u.Ns() != c.Ns || u.Nt() != c.Nt) throw ValidationError("grid map does not match the cylinder");
}

std::vector<double> eps_vector(const double* eps, std::size_t n) {
    if (n == 0) return {0.05, 0.1, 0.2};
    require(eps, "eps");
    return std::vector<double>(eps, eps + n);
}

}  // namespace

extern "C" {

const char* sl_last_error(void) { return g_last_error.c_str(); }

const char* sl_version(void) { return STRETCHLAB_VERSION; }

const char* sl_status_name(sl_status s) {
    switch (s) {
        case SL_OK: return "ok";
        case SL_ERR_INVALID_ARGUMENT: return "invalid argument";
        case SL_ERR_NUMERICAL: return "numerical failure";
        case SL_ERR_NO_BRACKET: return "no bracket";
        case SL_ERR_LINE_SEARCH: return "line search failed";
        case SL_ERR_IO: return "i/o error";
        case SL_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void sl_string_free(char* s) { delete[] s; }

sl_status sl_set_threads(int n) {
    return guarded([&] {
        if (n < 1) throw ValidationError("thread count must be positive");
        set_threads(n);
    });
}

int sl_get_threads(void) { return threads(); }

sl_status sl_cylinder_create(double h, double d, double L, int Ns, int Nt, sl_cylinder** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        Cylinder c{h, d, L, Ns, Nt};
        c.validate();
        *out = new sl_cylinder{c};
    });
}

void sl_cylinder_destroy(sl_cylinder* c) { delete c; }

sl_status sl_cylinder_exact_area(const sl_cylinder* c, double* out) {
    return guarded([&] {
        require(c, "cylinder");
        require(out, "out");
        *out = c->cyl.exact_area();
    });
}

sl_status sl_gridmap_exact_neumann(const sl_cylinder* c, sl_gridmap** out) {
    return guarded([&] {
        require(c, "cylinder");
        require(out, "out");
        *out = new sl_gridmap{exact_neumann(c->cyl)};
    });
}

sl_status sl_gridmap_perturbed_neumann(const sl_cylinder* c, double amplitude, uint64_t seed, sl_gridmap** out) {
    return guarded([&] {
        require(c, "cylinder");
        require(out, "out");
        *out = new sl_gridmap{perturbed_neumann(c->cyl, amplitude, seed)};
    });
}

sl_status sl_gridmap_dirichlet_initial(const sl_cylinder* c, double R0, sl_gridmap** out) {
    return guarded([&] {
        require(c, "cylinder");
        require(out, "out");
        *out = new sl_gridmap{dirichlet_initial(c->cyl, R0)};
    });
}

sl_status sl_gridmap_clone(const sl_gridmap* u, sl_gridmap** out) {
    return guarded([&] {
        require(u, "gridmap");
        require(out, "out");
        *out = new sl_gridmap{u->u};
    });
}

void sl_gridmap_destroy(sl_gridmap* u) { delete u; }

sl_status sl_gridmap_node(const sl_gridmap* u, int i, int j, double xyz[3]) {
    return guarded([&] {
        require(u, "gridmap");
        require(xyz, "xyz");
        check_node_index(u->u, i, j);
        const MinkVec& x = u->u.at(i, j).v();
        for (int k = 0; k < 3; ++k) xyz[k] = x[k];
    });
}

sl_status sl_gridmap_set_node(sl_gridmap* u, int i, int j, const double xyz[3]) {
    return guarded([&] {
        require(u, "gridmap");
        require(xyz, "xyz");
        check_node_index(u->u, i, j);
        u->u.set(i, j, HPoint(MinkVec(xyz[0], xyz[1], xyz[2])));
    });
}

sl_status sl_gridmap_sup_R(const sl_gridmap* u, double* out) {
    return guarded([&] {
        require(u, "gridmap");
        require(out, "out");
        *out = sup_R(u->u);
    });
}

sl_status sl_gridmap_write_csv(const sl_gridmap* u, const sl_cylinder* c, const char* path, const char* header) {
    return guarded([&] {
        require(u, "gridmap");
        require(c, "cylinder");
        require(path, "path");
        check_shape(u->u, c->cyl);
        write_nodes_csv(u->u, c->cyl, path, header ? header : "");
    });
}

sl_status sl_jp(const sl_gridmap* u, const sl_cylinder* c, double p, double* out) {
    return guarded([&] {
        require(u, "gridmap");
        require(c, "cylinder");
        require(out, "out");
        check_shape(u->u, c->cyl);
        *out = J_p(u->u, c->cyl, p);
    });
}

sl_status sl_el_residual(const sl_gridmap* u, const sl_cylinder* c, double p, sl_boundary bc, double* out) {
    return guarded([&] {
        require(u, "gridmap");
        require(c, "cylinder");
        require(out, "out");
        check_shape(u->u, c->cyl);
        *out = el_residual(u->u, c->cyl, p, to_bc(bc));
    });
}

sl_status sl_jp_gradient(const sl_gridmap* u, const sl_cylinder* c, double p, double* grad, size_t len) {
    return guarded([&] {
        require(u, "gridmap");
        require(c, "cylinder");
        require(grad, "grad");
        check_shape(u->u, c->cyl);
        if (len != 3 * u->u.size()) throw ValidationError("gradient buffer has the wrong length");
        std::vector<MinkVec> g = grad_Jp(u->u, c->cyl, p);
        for (std::size_t n = 0; n < g.size(); ++n)
            for (int k = 0; k < 3; ++k) grad[3 * n + k] = g[n][k];
    });
}

void sl_solver_options_default(sl_solver_options* o) {
    if (!o) return;
    SolverOptions d;
    o->p = d.p;
    o->bc = SL_NEUMANN;
    o->max_iters = d.max_iters;
    o->grad_tol = d.grad_tol;
    o->initial_step = d.initial_step;
    o->backtrack = d.backtrack;
    o->armijo = d.armijo;
    o->bb_steps = d.bb_steps ? 1 : 0;
    o->gauge_fix = d.gauge_fix ? 1 : 0;
    o->seed = d.seed;
}

sl_status sl_solve(const sl_cylinder* c, const sl_gridmap* init, const sl_solver_options* opts, sl_gridmap** out,
                   sl_solve_summary* summary) {
    Termination term = Termination::Converged;
    sl_status st = guarded([&] {
        require(c, "cylinder");
        require(init, "initial map");
        require(opts, "options");
        require(out, "out");
        *out = nullptr;
        check_shape(init->u, c->cyl);
        SolveResult res = minimize(init->u, c->cyl, to_options(*opts));
        term = res.termination;
        if (summary) {
            summary->Jp = res.Jp;
            summary->el_residual = res.el_residual;
            summary->iters = res.iters;
            summary->converged = res.converged ? 1 : 0;
            summary->termination = term == Termination::Converged  ? SL_CONVERGED
                                   : term == Termination::MaxIters ? SL_MAX_ITERS
                                                                   : SL_LINE_SEARCH_FAILED;
        }
        *out = new sl_gridmap{std::move(res.u)};
        if (term != Termination::Converged) g_last_error = res.message;
    });
    if (st != SL_OK) return st;
    if (term == Termination::LineSearchFailed) return SL_ERR_LINE_SEARCH;
    if (term == Termination::MaxIters) return SL_ERR_NUMERICAL;
    return SL_OK;
}

sl_status sl_diagnose_json(const sl_gridmap* u, const sl_cylinder* c, double p, sl_boundary bc, const double* eps,
                           size_t n_eps, char** json_out) {
    return guarded([&] {
        require(u, "gridmap");
        require(c, "cylinder");
        require(json_out, "json_out");
        check_shape(u->u, c->cyl);
        SweepRecord rec = diagnose(u->u, c->cyl, p, eps_vector(eps, n_eps), to_bc(bc));
        *json_out = dup_string(to_json(rec).dump(2));
    });
}

void sl_sweep_options_default(sl_sweep_options* o) {
    if (!o) return;
    SweepOptions d;
    sl_solver_options_default(&o->solver);
    o->eps = nullptr;
    o->n_eps = 0;
    o->init_amplitude = d.init_amplitude;
    o->dirichlet_R0 = d.dirichlet_R0;
    o->seed = d.seed;
    o->fail_at_p = d.fail_at_p;
}

sl_status sl_sweep_json(const sl_cylinder* c, const double* p_list, size_t n_p, const sl_sweep_options* opts,
                        const char* density_dir, const char* header, char** json_out) {
    bool any_failed = false;
    sl_status st = guarded([&] {
        require(c, "cylinder");
        require(p_list, "p_list");
        require(opts, "options");
        require(json_out, "json_out");
        *json_out = nullptr;
        SweepOptions so;
        so.solver = to_options(opts->solver);
        so.eps_list = eps_vector(opts->eps, opts->n_eps);
        so.init_amplitude = opts->init_amplitude;
        so.dirichlet_R0 = opts->dirichlet_R0;
        so.seed = opts->seed;
        so.fail_at_p = opts->fail_at_p;
        std::vector<double> ps(p_list, p_list + n_p);
        std::vector<SweepRecord> recs = sweep(ps, c->cyl, so);

        json arr = json::array();
        std::string failures;
        for (const auto& r : recs) {
            json j = to_json(r);
            if (density_dir && !r.failed && r.density.Ns() > 0) {
                std::filesystem::create_directories(density_dir);
                std::ostringstream name;
                name << "density_p" << r.p << ".csv";
                std::filesystem::path path = std::filesystem::path(density_dir) / name.str();
                write_cell_csv(r.density, c->cyl, path.string(), header ? header : "");
                j["density_csv"] = path.string();
            }
            if (r.failed) {
                any_failed = true;
                failures += (failures.empty() ? "" : "; ") + std::string("p=") + std::to_string(r.p) + ": " + r.message;
            }
            arr.push_back(std::move(j));
        }
        *json_out = dup_string(arr.dump(2));
        if (any_failed) g_last_error = failures;
    });
    if (st == SL_OK && any_failed) return SL_ERR_NUMERICAL;
    return st;
}

sl_status sl_svcheck_json(int trials, const double* p_list, size_t n_p, uint64_t seed, char** json_out) {
    return guarded([&] {
        require(p_list, "p_list");
        require(json_out, "json_out");
        *json_out = nullptr;
        if (trials < 1) throw ValidationError("trials must be positive");
        if (n_p == 0) throw ValidationError("empty p list");
        std::vector<double> ps(p_list, p_list + n_p);
        SuiteReport sv = svnorm_property_suite(trials, ps, seed);
        SuiteReport pw = pointwise_suite(trials, ps, seed + 1);
        json j{{"svnorm", to_json(sv)},
               {"pointwise", to_json(pw)},
               {"all_pass", sv.all_pass() && pw.all_pass()}};
        *json_out = dup_string(j.dump(2));
    });
}

sl_status sl_profile_ivp(double p, double L, double slope0, double h, sl_profile** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        *out = new sl_profile{solve_ivp_sigma(p, L, slope0, h)};
    });
}

sl_status sl_profile_shoot(double p, double L, double h, double R0, sl_profile** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        *out = new sl_profile{shoot_dirichlet(p, L, h, R0)};
    });
}

sl_status sl_profile_limit(double s_star, double L, double h, sl_profile** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        *out = new sl_profile{limit_profile(s_star, L, h)};
    });
}

sl_status sl_limit_s_star(double L, double h, double R0, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = limit_s_star_for_R0(L, h, R0);
    });
}

void sl_profile_destroy(sl_profile* prof) { delete prof; }

size_t sl_profile_size(const sl_profile* prof) { return prof ? prof->prof.s.size() : 0; }

sl_status sl_profile_sample(const sl_profile* prof, size_t k, double* s, double* R, double* Rp, int* region) {
    return guarded([&] {
        require(prof, "profile");
        const Profile& P = prof->prof;
        if (k >= P.s.size()) throw ValidationError("sample index out of range");
        if (s) *s = P.s[k];
        if (R) *R = P.R[k];
        if (Rp) *Rp = P.Rp[k];
        if (region) *region = P.region.empty() ? 0 : P.region[k];
    });
}

sl_status sl_profile_eval(const sl_profile* prof, double x, double* R) {
    return guarded([&] {
        require(prof, "profile");
        require(R, "R");
        *R = prof->prof.eval(x);
    });
}

sl_status sl_profile_energy(const sl_profile* prof, double p, double L, double h, double* out) {
    return guarded([&] {
        require(prof, "profile");
        require(out, "out");
        *out = label_A_energy(prof->prof, p, L, h);
    });
}

sl_status sl_profile_json(const sl_profile* prof, int pairs, uint64_t seed, char** json_out) {
    return guarded([&] {
        require(prof, "profile");
        require(json_out, "json_out");
        *json_out = nullptr;
        const Profile& P = prof->prof;
        json j = profile_summary(P);
        if (P.kind != "limit" && pairs > 0) j["monotonicity"] = to_json(check_profile_monotonicity(P, pairs, seed));
        if (std::isfinite(P.p)) j["energy_half"] = number(label_A_energy(P, P.p, P.L, P.h));
        *json_out = dup_string(j.dump(2));
    });
}

sl_status sl_profile_write_csv(const sl_profile* prof, const char* path, const char* header) {
    return guarded([&] {
        require(prof, "profile");
        require(path, "path");
        std::ofstream f(path);
        if (!f) throw std::ios_base::failure(std::string("cannot open ") + path);
        f.precision(17);
        if (header && *header) f << "# " << header << "\n";
        f << "s,R,Rprime,region\n";
        const Profile& P = prof->prof;
        for (std::size_t k = 0; k < P.s.size(); ++k)
            f << P.s[k] << ',' << P.R[k] << ',' << P.Rp[k] << ',' << (P.region.empty() ? 0 : P.region[k]) << '\n';
        if (!f) throw std::ios_base::failure(std::string("write failed: ") + path);
    });
}

sl_status sl_ideal_map_json(double h, double h0, double L, double K0, double K_star, int samples,
                            const char* csv_path, const char* header, char** json_out) {
    return guarded([&] {
        require(json_out, "json_out");
        *json_out = nullptr;
        IdealMapParams prm{h, h0, L, K0, K_star};
        IdealMapReport r = ideal_map_profile(prm, samples);
        if (csv_path) {
            std::ofstream f(csv_path);
            if (!f) throw std::ios_base::failure(std::string("cannot open ") + csv_path);
            f.precision(17);
            if (header && *header) f << "# " << header << "\n";
            f << "s,R,Rprime,region,eig1,eig2\n";
            for (std::size_t k = 0; k < r.s.size(); ++k)
                f << r.s[k] << ',' << r.R[k] << ',' << r.Rp[k] << ',' << r.region[k] << ',' << r.eig1[k] << ','
                  << r.eig2[k] << '\n';
            if (!f) throw std::ios_base::failure(std::string("write failed: ") + csv_path);
        }
        *json_out = dup_string(to_json(r).dump(2));
    });
}

}  // extern "C"
