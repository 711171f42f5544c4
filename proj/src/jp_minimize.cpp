#include <cmath>
#include <sstream>

#include "stretchlab/jp_solver.hpp"

namespace stretchlab {

void SolverOptions::validate() const {
    if (!(std::isfinite(p) && p > 2.0)) throw ValidationError("solver: p must be finite and greater than 2");
    if (max_iters < 0) throw ValidationError("solver: max_iters must be non-negative");
    if (!(grad_tol > 0.0)) throw ValidationError("solver: grad_tol must be positive");
    if (!(initial_step > 0.0)) throw ValidationError("solver: initial_step must be positive");
    if (!(backtrack > 0.0 && backtrack < 1.0)) throw ValidationError("solver: backtrack must lie in (0, 1)");
    if (!(armijo > 0.0 && armijo < 1.0)) throw ValidationError("solver: armijo must lie in (0, 1)");
}

namespace {

bool is_free(const Cylinder& cyl, BoundaryKind bc, std::size_t k) {
    if (bc == BoundaryKind::Neumann) return true;
    int i = static_cast<int>(k / cyl.Nt);
    return i > 0 && i < cyl.Ns;
}

}  // namespace

SolveResult minimize(const GridMap& init, const Cylinder& cyl, const SolverOptions& opts) {
    cyl.validate();
    opts.validate();
    if (init.Ns() != cyl.Ns || init.Nt() != cyl.Nt) throw ValidationError("minimize: grid shape mismatch");

    const double p = opts.p;
    const std::vector<double> w = nodal_weights(cyl);
    const std::size_t n = init.size();

    SolveResult res;
    res.u = init;
    EnergyGradient eg = J_p_with_gradient(res.u, cyl, p);
    std::vector<MinkVec> dir(n), prev_dir;
    std::vector<MinkVec> prev_nodes;
    double tau = opts.initial_step;
    const double tau_floor = 1e-14 * opts.initial_step;

    auto finish = [&](Termination t, const std::string& msg) {
        res.termination = t;
        res.converged = t == Termination::Converged;
        res.message = msg;
        if (opts.gauge_fix && opts.bc == BoundaryKind::Neumann) gauge_fix(res.u, cyl);
        res.Jp = J_p(res.u, cyl, p);
        return res;
    };

    for (res.iters = 0;; ++res.iters) {
        if (!std::isfinite(eg.J)) throw NumericalError("minimize: J_p is not finite");
        res.el_residual = el_residual(eg, cyl, p, opts.bc);
        if (res.el_residual <= opts.grad_tol) return finish(Termination::Converged, "converged");
        if (res.iters >= opts.max_iters) return finish(Termination::MaxIters, "max_iters reached");

        // Mass-lumped descent direction -g_n / w_n, relative to p J so that step sizes do not
        // depend on the magnitude of the energy.
        const double rel = 1.0 / (p * std::abs(eg.J));
        double slope = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            dir[k] = is_free(cyl, opts.bc, k) ? MinkVec(-rel * eg.grad[k] / w[k]) : MinkVec::Zero();
            slope += mink_inner(eg.grad[k], dir[k]);
        }

        if (opts.bb_steps && !prev_dir.empty()) {
            // BB1 step from the last displacement and the change in descent direction.
            double ss = 0.0, sy = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                MinkVec s = res.u.nodes()[k].v() - prev_nodes[k];
                MinkVec y = prev_dir[k] - dir[k];
                ss += w[k] * mink_inner(s, s);
                sy += w[k] * mink_inner(s, y);
            }
            double bb = ss / sy;
            tau = (std::isfinite(bb) && bb > 0.0) ? bb : 2.0 * tau;
        }

        GridMap trial = res.u;
        std::vector<double> rnorm(n, 1.0);
        EnergyGradient eg_trial;
        bool have_trial_grad = false;
        double Jt = kInf;
        bool accepted = false;
        while (tau >= tau_floor) {
            bool ok = true;
            for (std::size_t k = 0; k < n && ok; ++k) {
                if (!is_free(cyl, opts.bc, k)) continue;
                MinkVec v = res.u.nodes()[k].v() + tau * dir[k];
                double vv = mink_inner(v, v);
                if (!(vv < 0.0 && v[2] > 0.0)) ok = false;
                else {
                    rnorm[k] = std::sqrt(-vv);
                    trial.nodes()[k] = retract(v);
                }
            }
            if (ok) {
                try {
                    Jt = J_p(trial, cyl, p);
                } catch (const NumericalError&) {
                    ok = false;
                }
            }
            if (ok && std::isfinite(Jt) && Jt <= eg.J + opts.armijo * tau * slope) {
                accepted = true;
                break;
            }
            if (ok && std::isfinite(Jt) && std::abs(Jt - eg.J) <= 1e-10 * std::abs(eg.J)) {
                // J differences at rounding level: test the Armijo condition through the
                // directional derivative at the trial point instead.
                eg_trial = J_p_with_gradient(trial, cyl, p);
                double dphi = 0.0;
                for (std::size_t k = 0; k < n; ++k) dphi += mink_inner(eg_trial.grad[k], dir[k]) / rnorm[k];
                if (dphi <= (1.0 - 2.0 * opts.armijo) * std::abs(slope)) {
                    accepted = have_trial_grad = true;
                    break;
                }
            }
            tau *= opts.backtrack;
        }
        if (!accepted) {
            std::ostringstream msg;
            msg << "line search failed at iteration " << res.iters << " (step below " << tau_floor << ")";
            return finish(Termination::LineSearchFailed, msg.str());
        }
        prev_nodes.resize(n);
        for (std::size_t k = 0; k < n; ++k) prev_nodes[k] = res.u.nodes()[k].v();
        prev_dir = dir;
        res.u = std::move(trial);
        eg = have_trial_grad ? std::move(eg_trial) : J_p_with_gradient(res.u, cyl, p);
    }
}

}  // namespace stretchlab
