#include "mcp/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Dense>

namespace mcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Flattened, solver-friendly view of a QpProblem.
struct View {
    const QpProblem* prob = nullptr;
    bool slack = false;
    bool has_centers = false;
    double C = 0.0;
    int m = 0;  // working-set entries
    int P = 0;  // manifolds
    Eigen::Index N = 0;
    std::vector<double> y;    // entry label
    std::vector<int> pidx;    // entry manifold
    std::vector<double> xsq;  // entry squared norm
    std::vector<double> yc;   // manifold label
    std::vector<double> csq;  // center squared norm
    std::vector<std::vector<int>> by_manifold;

    const Vector& x(int i) const { return (*prob).working_set[i].point; }
    const Vector& c(int p) const { return (*prob).centers[p]; }
};

View make_view(const QpProblem& prob) {
    View v;
    v.prob = &prob;
    v.slack = prob.mode == QpMode::Slack;
    v.C = prob.slack_coefficient;
    v.m = static_cast<int>(prob.working_set.size());
    v.P = prob.num_manifolds();
    v.N = prob.working_set[0].point.size();
    v.has_centers = !prob.centers.empty();
    v.y.resize(v.m);
    v.pidx.resize(v.m);
    v.xsq.resize(v.m);
    v.by_manifold.resize(v.P);
    for (int i = 0; i < v.m; ++i) {
        const auto& e = prob.working_set[i];
        v.pidx[i] = e.manifold_index;
        v.y[i] = static_cast<double>(prob.labels[e.manifold_index]);
        v.xsq[i] = e.point.squaredNorm();
        v.by_manifold[e.manifold_index].push_back(i);
    }
    v.yc.resize(v.P);
    v.csq.assign(v.P, 0.0);
    for (int p = 0; p < v.P; ++p) {
        v.yc[p] = static_cast<double>(prob.labels[p]);
        if (v.has_centers) v.csq[p] = prob.centers[p].squaredNorm();
    }
    return v;
}

struct State {
    Vector alpha;
    Vector beta;
    Vector w;
    std::vector<double> group_sum;  // sum of alpha per manifold
    double alpha_sum = 0.0;
    double beta_sum = 0.0;
};

void recompute_weights(const View& v, State& st) {
    st.w.setZero(v.N);
    for (int i = 0; i < v.m; ++i) {
        if (st.alpha[i] != 0.0) st.w += (st.alpha[i] * v.y[i]) * v.x(i);
    }
    if (v.has_centers && v.slack) {
        for (int p = 0; p < v.P; ++p) {
            if (st.beta[p] != 0.0) st.w += (st.beta[p] * v.yc[p]) * v.c(p);
        }
    }
}

void recompute_sums(const View& v, State& st) {
    st.group_sum.assign(v.P, 0.0);
    st.alpha_sum = 0.0;
    for (int i = 0; i < v.m; ++i) {
        st.group_sum[v.pidx[i]] += st.alpha[i];
        st.alpha_sum += st.alpha[i];
    }
    st.beta_sum = st.beta.size() ? st.beta.sum() : 0.0;
}

State init_state(const View& v, const DualState* dual) {
    State st;
    st.alpha.setZero(v.m);
    st.beta.setZero(v.slack && v.has_centers ? v.P : 0);
    if (dual) {
        const int na = std::min<int>(v.m, static_cast<int>(dual->alpha.size()));
        for (int i = 0; i < na; ++i) st.alpha[i] = std::max(0.0, dual->alpha[i]);
        const int nb = std::min<int>(static_cast<int>(st.beta.size()),
                                     static_cast<int>(dual->beta.size()));
        for (int p = 0; p < nb; ++p) st.beta[p] = std::max(0.0, dual->beta[p]);
    }
    recompute_sums(v, st);
    // project warm start back under the per-manifold caps
    if (v.slack) {
        for (int p = 0; p < v.P; ++p) {
            if (st.group_sum[p] > v.C && st.group_sum[p] > 0.0) {
                const double scale = v.C / st.group_sum[p];
                for (int i : v.by_manifold[p]) st.alpha[i] *= scale;
                st.group_sum[p] = 0.0;
                for (int i : v.by_manifold[p]) st.group_sum[p] += st.alpha[i];
            }
        }
        st.alpha_sum = st.alpha.sum();
    }
    recompute_weights(v, st);
    return st;
}

double dual_objective(const State& st) {
    return st.alpha_sum + st.beta_sum - 0.5 * st.w.squaredNorm();
}

Vector slacks_for(const View& v, const Vector& w) {
    Vector xi = Vector::Zero(v.P);
    if (!v.slack) return xi;
    for (int i = 0; i < v.m; ++i) {
        const double gap = 1.0 - v.y[i] * w.dot(v.x(i));
        if (gap > xi[v.pidx[i]]) xi[v.pidx[i]] = gap;
    }
    return xi;
}

// One pass of exact coordinate maximization. Returns the largest projected
// gradient seen. `full` visits every entry; otherwise only flagged ones.
double sweep(const View& v, State& st, bool full, std::vector<uint8_t>& hot) {
    double maxpg = 0.0;
    for (int i = 0; i < v.m; ++i) {
        if (!full && !hot[i]) continue;
        const double g = 1.0 - v.y[i] * st.w.dot(v.x(i));
        const int p = v.pidx[i];
        const double hi = v.slack ? st.alpha[i] + (v.C - st.group_sum[p]) : kInf;
        double pg = g;
        if (st.alpha[i] <= 0.0 && g < 0.0) pg = 0.0;
        if (st.alpha[i] >= hi && g > 0.0) pg = 0.0;
        if (full) hot[i] = (pg != 0.0) || (st.alpha[i] > 0.0);
        if (pg == 0.0) continue;
        maxpg = std::max(maxpg, std::abs(pg));
        double na;
        if (v.xsq[i] > 0.0) {
            na = std::clamp(st.alpha[i] + g / v.xsq[i], 0.0, hi);
        } else {
            na = g > 0.0 ? hi : 0.0;  // zero point: curvature-free coordinate
            if (!std::isfinite(na)) continue;
        }
        const double d = na - st.alpha[i];
        if (d == 0.0) continue;
        st.w += (d * v.y[i]) * v.x(i);
        st.alpha[i] = na;
        st.group_sum[p] += d;
        st.alpha_sum += d;
    }
    if (v.slack && v.has_centers) {
        for (int p = 0; p < v.P; ++p) {
            const double g = 1.0 - v.yc[p] * st.w.dot(v.c(p));
            double pg = g;
            if (st.beta[p] <= 0.0 && g < 0.0) pg = 0.0;
            if (pg == 0.0 || v.csq[p] <= 0.0) continue;
            maxpg = std::max(maxpg, std::abs(pg));
            const double nb = std::max(0.0, st.beta[p] + g / v.csq[p]);
            const double d = nb - st.beta[p];
            if (d == 0.0) continue;
            st.w += (d * v.yc[p]) * v.c(p);
            st.beta[p] = nb;
            st.beta_sum += d;
        }
    }
    return maxpg;
}

// SMO-style transfers inside manifolds whose cap is active: single-coordinate
// moves stall there because increasing one alpha requires decreasing another.
void pair_moves(const View& v, State& st, double tol) {
    if (!v.slack) return;
    for (int p = 0; p < v.P; ++p) {
        const auto& group = v.by_manifold[p];
        if (group.size() < 2) continue;
        if (st.group_sum[p] < v.C * (1.0 - 1e-12)) continue;
        for (std::size_t pass = 0; pass < 2 * group.size(); ++pass) {
            int up = -1, dn = -1;
            double gup = -kInf, gdn = kInf;
            for (int i : group) {
                const double g = 1.0 - v.y[i] * st.w.dot(v.x(i));
                if (g > gup) {
                    gup = g;
                    up = i;
                }
                if (st.alpha[i] > 0.0 && g < gdn) {
                    gdn = g;
                    dn = i;
                }
            }
            if (up < 0 || dn < 0 || up == dn) break;
            if (gup - gdn <= tol) break;
            const double cross = v.y[up] * v.y[dn] * v.x(up).dot(v.x(dn));
            const double curv = v.xsq[up] + v.xsq[dn] - 2.0 * cross;
            double t = curv > 1e-300 ? (gup - gdn) / curv : st.alpha[dn];
            t = std::min(t, st.alpha[dn]);
            if (t <= 0.0) break;
            st.alpha[up] += t;
            st.alpha[dn] -= t;
            st.w += (t * v.y[up]) * v.x(up) - (t * v.y[dn]) * v.x(dn);
        }
    }
}

double residual_for(const View& v, const State& st, const Vector& xi) {
    double r = 0.0;
    for (int i = 0; i < v.m; ++i) {
        const double margin = v.y[i] * st.w.dot(v.x(i)) + (v.slack ? xi[v.pidx[i]] : 0.0);
        r = std::max(r, 1.0 - margin);                       // primal feasibility
        r = std::max(r, std::abs(st.alpha[i] * (margin - 1.0)));  // complementarity
        r = std::max(r, -st.alpha[i]);
    }
    if (v.slack) {
        for (int p = 0; p < v.P; ++p) {
            r = std::max(r, st.group_sum[p] - v.C);          // dual cap
            r = std::max(r, (v.C - st.group_sum[p]) * xi[p]);  // cap complementarity
            r = std::max(r, -xi[p]);
            if (v.has_centers) {
                const double cm = v.yc[p] * st.w.dot(v.c(p));
                r = std::max(r, 1.0 - cm);
                r = std::max(r, std::abs(st.beta[p] * (cm - 1.0)));
                r = std::max(r, -st.beta[p]);
            }
        }
    }
    return r;
}

// Minimum-norm point of conv{v_i}: Gilbert's algorithm. Returns +1 when a
// strictly separating certificate appears, -1 when the hull reaches the
// origin, 0 when inconclusive within the iteration budget.
template <typename PointAt>
int separability_probe(int count, PointAt&& point_scaled, double scale,
                       std::size_t max_iters) {
    if (count == 0) return +1;
    Vector z = point_scaled(0);
    double zn = z.norm();
    for (int i = 1; i < count; ++i) {
        const Vector vi = point_scaled(i);
        if (vi.norm() < zn) {
            z = vi;
            zn = z.norm();
        }
    }
    const double inf_tol = 1e-12 * std::max(1.0, scale);
    const double sep_tol = 1e-10 * std::max(1.0, scale);
    for (std::size_t it = 0; it < max_iters; ++it) {
        zn = z.norm();
        if (zn <= inf_tol) return -1;
        double best = kInf;
        int bi = -1;
        for (int i = 0; i < count; ++i) {
            const double d = z.dot(point_scaled(i));
            if (d < best) {
                best = d;
                bi = i;
            }
        }
        if (best / zn >= sep_tol) return +1;  // z strictly separates
        const Vector vi = point_scaled(bi);
        const Vector diff = z - vi;
        const double dn = diff.squaredNorm();
        if (dn <= 0.0) return best / zn >= 0.0 ? 0 : -1;
        const double gamma = std::clamp(z.dot(diff) / dn, 0.0, 1.0);
        if (gamma <= 0.0) return 0;  // no further progress
        z = (1.0 - gamma) * z + gamma * vi;
    }
    return 0;
}

int probe_working_set(const View& v, std::size_t max_iters) {
    double scale = 0.0;
    for (int i = 0; i < v.m; ++i) scale = std::max(scale, std::sqrt(v.xsq[i]));
    return separability_probe(
        v.m, [&](int i) -> Vector { return v.y[i] * v.x(i); }, scale, max_iters);
}

int probe_centers(const View& v, std::size_t max_iters) {
    double scale = 0.0;
    for (int p = 0; p < v.P; ++p) scale = std::max(scale, std::sqrt(v.csq[p]));
    return separability_probe(
        v.P, [&](int p) -> Vector { return v.yc[p] * v.c(p); }, scale, max_iters);
}

// Active-set refinement: solve the KKT system restricted to the current
// support candidates and accept the result when it satisfies every
// inequality. Returns true when the state was replaced by the refined one.
bool polish(const View& v, State& st, double tol) {
    std::vector<int> A;  // working rows with alpha > 0 or active margins
    std::vector<int> B;  // center rows
    std::vector<int> Pos;  // manifolds with cap active and positive slack
    const Vector xi0 = slacks_for(v, st.w);
    for (int i = 0; i < v.m; ++i) {
        const double margin = v.y[i] * st.w.dot(v.x(i)) + (v.slack ? xi0[v.pidx[i]] : 0.0);
        if (st.alpha[i] > 0.0 || margin < 1.0 + 1e-9) A.push_back(i);
    }
    if (v.slack && v.has_centers) {
        for (int p = 0; p < v.P; ++p) {
            const double cm = v.yc[p] * st.w.dot(v.c(p));
            if (st.beta[p] > 0.0 || cm < 1.0 + 1e-9) B.push_back(p);
        }
    }
    if (v.slack) {
        for (int p = 0; p < v.P; ++p) {
            if (xi0[p] > 1e-12 && st.group_sum[p] >= v.C * (1.0 - 1e-9)) Pos.push_back(p);
        }
    }

    for (int round = 0; round < 60; ++round) {
        const int na = static_cast<int>(A.size());
        const int nb = static_cast<int>(B.size());
        const int nc = static_cast<int>(Pos.size());
        const int n = na + nb + nc;
        if (n == 0 || na + nb == 0) return false;
        if (n > 4000) return false;  // fall back to sweeps on huge supports

        Matrix M = Matrix::Zero(n, n);
        Vector rhs(n);
        // Gram block over [alpha_A, beta_B]
        std::vector<Vector> cols;
        cols.reserve(na + nb);
        for (int i : A) cols.push_back(v.y[i] * v.x(i));
        for (int p : B) cols.push_back(v.yc[p] * v.c(p));
        for (int r = 0; r < na + nb; ++r) {
            for (int s = r; s < na + nb; ++s) {
                const double val = cols[r].dot(cols[s]);
                M(r, s) = val;
                M(s, r) = val;
            }
            rhs[r] = 1.0;
        }
        // slack coupling: margin rows gain xi_p, cap rows sum alpha = C
        for (int t = 0; t < nc; ++t) {
            const int p = Pos[t];
            for (int r = 0; r < na; ++r) {
                if (v.pidx[A[r]] == p) {
                    M(r, na + nb + t) = 1.0;
                    M(na + nb + t, r) = 1.0;
                }
            }
            rhs[na + nb + t] = v.C;
        }

        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(M);
        const Vector z = cod.solve(rhs);
        if (!z.allFinite()) return false;
        if ((M * z - rhs).lpNorm<Eigen::Infinity>() >
            1e-9 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>())) {
            return false;  // inconsistent active set
        }

        // most negative multiplier leaves the set
        int drop_a = -1, drop_b = -1, drop_c = -1;
        double worst = -1e-11;
        for (int r = 0; r < na; ++r) {
            if (z[r] < worst) {
                worst = z[r];
                drop_a = r;
                drop_b = drop_c = -1;
            }
        }
        for (int r = 0; r < nb; ++r) {
            if (z[na + r] < worst) {
                worst = z[na + r];
                drop_b = r;
                drop_a = drop_c = -1;
            }
        }
        for (int r = 0; r < nc; ++r) {
            if (z[na + nb + r] < worst) {
                worst = z[na + nb + r];
                drop_c = r;
                drop_a = drop_b = -1;
            }
        }
        if (drop_a >= 0) {
            A.erase(A.begin() + drop_a);
            continue;
        }
        if (drop_b >= 0) {
            B.erase(B.begin() + drop_b);
            continue;
        }
        if (drop_c >= 0) {
            Pos.erase(Pos.begin() + drop_c);
            continue;
        }

        // candidate accepted by the dual; now check primal side
        State cand;
        cand.alpha.setZero(v.m);
        cand.beta.setZero(st.beta.size());
        for (int r = 0; r < na; ++r) cand.alpha[A[r]] = std::max(0.0, z[r]);
        for (int r = 0; r < nb; ++r) cand.beta[B[r]] = std::max(0.0, z[na + r]);
        recompute_sums(v, cand);
        bool cap_ok = true;
        if (v.slack) {
            for (int p = 0; p < v.P && cap_ok; ++p) {
                if (cand.group_sum[p] > v.C * (1.0 + 1e-10) + 1e-12) {
                    // cap violated: force the cap equation for p
                    if (std::find(Pos.begin(), Pos.end(), p) == Pos.end()) {
                        Pos.push_back(p);
                        cap_ok = false;
                    } else {
                        return false;
                    }
                }
            }
        }
        if (!cap_ok) continue;
        recompute_weights(v, cand);

        Vector xi = Vector::Zero(v.P);
        for (int t = 0; t < nc; ++t) xi[Pos[t]] = std::max(0.0, z[na + nb + t]);
        // violated inactive rows re-enter
        int add = -1;
        double worst_gap = tol * 0.5;
        for (int i = 0; i < v.m; ++i) {
            const double margin =
                v.y[i] * cand.w.dot(v.x(i)) + (v.slack ? xi[v.pidx[i]] : 0.0);
            const double gap = 1.0 - margin;
            if (gap > worst_gap && std::find(A.begin(), A.end(), i) == A.end()) {
                worst_gap = gap;
                add = i;
            }
        }
        if (add >= 0) {
            A.push_back(add);
            continue;
        }
        if (v.slack && v.has_centers) {
            int addc = -1;
            worst_gap = tol * 0.5;
            for (int p = 0; p < v.P; ++p) {
                const double gap = 1.0 - v.yc[p] * cand.w.dot(v.c(p));
                if (gap > worst_gap && std::find(B.begin(), B.end(), p) == B.end()) {
                    worst_gap = gap;
                    addc = p;
                }
            }
            if (addc >= 0) {
                B.push_back(addc);
                continue;
            }
        }
        st = std::move(cand);
        return true;
    }
    return false;
}

}  // namespace

void QpProblem::validate() const {
    if (working_set.empty()) throw std::invalid_argument("qp: empty working set");
    if (labels.empty()) throw std::invalid_argument("qp: no manifold labels");
    for (int lab : labels) {
        if (lab != 1 && lab != -1) throw std::invalid_argument("qp: labels must be +1/-1");
    }
    const int P = num_manifolds();
    const Eigen::Index N = working_set[0].point.size();
    for (const auto& e : working_set.entries()) {
        if (e.manifold_index < 0 || e.manifold_index >= P) {
            throw std::invalid_argument("qp: working-set manifold index out of range");
        }
        if (e.point.size() != N || !e.point.allFinite()) {
            throw std::invalid_argument("qp: bad working-set point");
        }
    }
    if (!centers.empty() && static_cast<int>(centers.size()) != P) {
        throw std::invalid_argument("qp: centers must be empty or one per manifold");
    }
    for (const auto& c : centers) {
        if (c.size() != N || !c.allFinite()) throw std::invalid_argument("qp: bad center");
    }
    if (mode == QpMode::Slack && !(slack_coefficient > 0.0)) {
        throw std::invalid_argument("qp: slack mode needs slack_coefficient > 0");
    }
}

QpSolver::QpSolver(QpOptions options) : options_(options) {}

QpSolution QpSolver::solve(const QpProblem& problem, DualState* dual) {
    problem.validate();
    const View v = make_view(problem);
    const double tol = options_.tolerance;

    if (!v.slack) {
        for (int i = 0; i < v.m; ++i) {
            if (v.xsq[i] == 0.0) {
                throw InfeasibleError(InfeasibleError::Kind::WorkingSet,
                                      "hard margin: zero point cannot satisfy its constraint");
            }
        }
    } else if (v.has_centers) {
        for (int p = 0; p < v.P; ++p) {
            if (v.csq[p] == 0.0) {
                throw InfeasibleError(InfeasibleError::Kind::Centers,
                                      "center constraint on the zero point is unsatisfiable");
            }
        }
    }

    State st = init_state(v, dual);
    std::vector<uint8_t> hot(v.m, 1);

    const std::size_t check_interval = 8;
    bool probed = false;
    double best_residual = kInf;
    std::size_t last_improvement = 0;
    std::size_t sweeps = 0;

    while (true) {
        const bool full = (sweeps % check_interval == 0);
        sweep(v, st, full, hot);
        if (v.slack) pair_moves(v, st, tol * 0.25);
        ++sweeps;

        if (full || sweeps % check_interval == 0) {
            recompute_weights(v, st);  // drop incremental drift
            const Vector xi = slacks_for(v, st.w);
            const double res = residual_for(v, st, xi);
            if (res < best_residual * (1.0 - 1e-6)) {
                best_residual = res;
                last_improvement = sweeps;
            }
            if (res <= tol) break;
            if (res <= 1e4 * tol || sweeps % 64 == 0) {
                if (polish(v, st, tol)) {
                    const Vector xi2 = slacks_for(v, st.w);
                    if (residual_for(v, st, xi2) <= tol) break;
                }
            }
        }

        const double dobj = dual_objective(st);
        const bool suspicious = dobj > std::min(1e8, options_.divergence_cap) ||
                                (sweeps > 512 && sweeps - last_improvement > 256);
        if (!probed && suspicious) {
            probed = true;
            if (!v.slack) {
                if (probe_working_set(v, 200000) < 0) {
                    throw InfeasibleError(InfeasibleError::Kind::WorkingSet,
                                          "hard margin: working set is not linearly separable");
                }
            } else if (v.has_centers) {
                if (probe_centers(v, 200000) < 0) {
                    throw InfeasibleError(InfeasibleError::Kind::Centers,
                                          "slack mode: center points are not linearly separable");
                }
            }
        }
        if (dobj > options_.divergence_cap) {
            throw InfeasibleError(!v.slack ? InfeasibleError::Kind::WorkingSet
                                           : InfeasibleError::Kind::Centers,
                                  "dual objective exceeded the divergence cap");
        }
        if (sweeps >= options_.max_sweeps) {
            if (!v.slack) {
                const int verdict = probe_working_set(v, 500000);
                if (verdict < 0 || verdict == 0) {
                    throw InfeasibleError(InfeasibleError::Kind::WorkingSet,
                                          "hard margin: no residual decrease within the sweep "
                                          "budget; working set presumed non-separable");
                }
            }
            throw std::runtime_error("qp solver stalled before reaching the KKT tolerance");
        }
    }

    recompute_weights(v, st);
    QpSolution sol;
    sol.weights = st.w;
    sol.slacks = slacks_for(v, st.w);
    sol.objective = 0.5 * st.w.squaredNorm() + (v.slack ? v.C * sol.slacks.sum() : 0.0);
    DualState out{st.alpha, st.beta};
    sol.kkt_residual = kkt_report(problem, sol, out);
    if (dual) *dual = std::move(out);
    return sol;
}

QpSolution solve_hard(const QpProblem& problem, double qp_tolerance) {
    if (problem.mode != QpMode::Hard) throw std::invalid_argument("solve_hard: mode != hard");
    QpOptions opts;
    opts.tolerance = qp_tolerance;
    return QpSolver(opts).solve(problem);
}

QpSolution solve_slack(const QpProblem& problem, double qp_tolerance) {
    if (problem.mode != QpMode::Slack) throw std::invalid_argument("solve_slack: mode != slack");
    QpOptions opts;
    opts.tolerance = qp_tolerance;
    return QpSolver(opts).solve(problem);
}

Vector recover_slacks(const QpProblem& problem, const Vector& weights) {
    const View v = make_view(problem);
    return slacks_for(v, weights);
}

double kkt_report(const QpProblem& problem, const QpSolution& solution,
                  const DualState& dual) {
    problem.validate();
    const View v = make_view(problem);
    if (dual.alpha.size() != v.m) throw std::invalid_argument("kkt_report: alpha size mismatch");
    if (solution.weights.size() != v.N) {
        throw std::invalid_argument("kkt_report: weight dimension mismatch");
    }
    const bool use_beta = v.slack && v.has_centers;
    if (use_beta && dual.beta.size() != v.P) {
        throw std::invalid_argument("kkt_report: beta size mismatch");
    }
    const Vector& w = solution.weights;
    Vector xi = Vector::Zero(v.P);
    if (v.slack) {
        if (solution.slacks.size() != v.P) {
            throw std::invalid_argument("kkt_report: slack size mismatch");
        }
        xi = solution.slacks;
    }

    double r = 0.0;
    Vector w_hat = Vector::Zero(v.N);
    std::vector<double> group(v.P, 0.0);
    for (int i = 0; i < v.m; ++i) {
        const double margin = v.y[i] * w.dot(v.x(i)) + (v.slack ? xi[v.pidx[i]] : 0.0);
        r = std::max(r, 1.0 - margin);
        r = std::max(r, -dual.alpha[i]);
        r = std::max(r, std::abs(dual.alpha[i] * (margin - 1.0)));
        group[v.pidx[i]] += dual.alpha[i];
        w_hat += (dual.alpha[i] * v.y[i]) * v.x(i);
    }
    if (v.slack) {
        for (int p = 0; p < v.P; ++p) {
            r = std::max(r, -xi[p]);
            r = std::max(r, group[p] - v.C);
            r = std::max(r, std::abs((v.C - group[p]) * xi[p]));
            if (use_beta) {
                const double cm = v.yc[p] * w.dot(v.c(p));
                r = std::max(r, 1.0 - cm);
                r = std::max(r, -dual.beta[p]);
                r = std::max(r, std::abs(dual.beta[p] * (cm - 1.0)));
                w_hat += (dual.beta[p] * v.yc[p]) * v.c(p);
            }
        }
    }
    r = std::max(r, (w - w_hat).norm());
    return r;
}

}  // namespace mcp
