#include "brute_force_qp.hpp"

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>

namespace mcp::testsupport {

BruteResult brute_force_qp(const BruteProblem& problem, double tol) {
    const Eigen::Index n = problem.hessian.rows();
    const Eigen::Index m = problem.rows.rows();
    if (m > 20) throw std::invalid_argument("brute force: too many constraints");

    BruteResult best;
    best.objective = std::numeric_limits<double>::infinity();
    const double scale = std::max(1.0, problem.bounds.size() > 0
                                           ? problem.bounds.cwiseAbs().maxCoeff()
                                           : 0.0);

    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<Eigen::Index> active;
        for (Eigen::Index r = 0; r < m; ++r) {
            if (mask & (1u << r)) active.push_back(r);
        }
        const Eigen::Index k = static_cast<Eigen::Index>(active.size());
        if (k > n) continue;  // more equalities than variables is non-generic

        // KKT system: [H -A_S'; A_S 0] [z; lambda] = [-c; b_S]
        Matrix kkt = Matrix::Zero(n + k, n + k);
        kkt.topLeftCorner(n, n) = problem.hessian;
        Vector rhs(n + k);
        rhs.head(n) = -problem.linear;
        for (Eigen::Index t = 0; t < k; ++t) {
            kkt.block(0, n + t, n, 1) = -problem.rows.row(active[t]).transpose();
            kkt.block(n + t, 0, 1, n) = problem.rows.row(active[t]);
            rhs[n + t] = problem.bounds[active[t]];
        }

        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(kkt);
        const Vector sol = cod.solve(rhs);
        if (!sol.allFinite()) continue;
        if ((kkt * sol - rhs).lpNorm<Eigen::Infinity>() > tol * scale) continue;  // inconsistent

        const Vector z = sol.head(n);
        bool ok = true;
        for (Eigen::Index t = 0; t < k && ok; ++t) {
            if (sol[n + t] < -tol) ok = false;  // dual feasibility
        }
        if (!ok) continue;
        const Vector gap = problem.rows * z - problem.bounds;
        if (gap.size() > 0 && gap.minCoeff() < -tol * scale) continue;  // primal feasibility

        const double obj = 0.5 * z.dot(problem.hessian * z) + problem.linear.dot(z);
        if (obj < best.objective) {
            best.feasible = true;
            best.objective = obj;
            best.z = z;
        }
    }
    return best;
}

BruteProblem encode_hard(const QpProblem& problem) {
    const Eigen::Index n = problem.working_set[0].point.size();
    const Eigen::Index m = static_cast<Eigen::Index>(problem.working_set.size());
    BruteProblem out;
    out.hessian = Matrix::Identity(n, n);
    out.linear = Vector::Zero(n);
    out.rows.resize(m, n);
    out.bounds = Vector::Ones(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& e = problem.working_set[static_cast<std::size_t>(i)];
        out.rows.row(i) =
            static_cast<double>(problem.labels[e.manifold_index]) * e.point.transpose();
    }
    return out;
}

BruteProblem encode_slack(const QpProblem& problem) {
    const Eigen::Index n = problem.working_set[0].point.size();
    const Eigen::Index mm = static_cast<Eigen::Index>(problem.working_set.size());
    const Eigen::Index P = problem.num_manifolds();
    const Eigen::Index nc = static_cast<Eigen::Index>(problem.centers.size());
    const Eigen::Index nz = n + P;  // variables: [w, xi]
    const Eigen::Index rows = mm + nc + P;

    BruteProblem out;
    out.hessian = Matrix::Zero(nz, nz);
    out.hessian.topLeftCorner(n, n) = Matrix::Identity(n, n);
    out.linear = Vector::Zero(nz);
    out.linear.tail(P).setConstant(problem.slack_coefficient);
    out.rows = Matrix::Zero(rows, nz);
    out.bounds = Vector::Zero(rows);

    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < mm; ++i, ++r) {
        const auto& e = problem.working_set[static_cast<std::size_t>(i)];
        out.rows.block(r, 0, 1, n) =
            static_cast<double>(problem.labels[e.manifold_index]) * e.point.transpose();
        out.rows(r, n + e.manifold_index) = 1.0;  // shared slack
        out.bounds[r] = 1.0;
    }
    for (Eigen::Index p = 0; p < nc; ++p, ++r) {
        out.rows.block(r, 0, 1, n) =
            static_cast<double>(problem.labels[p]) * problem.centers[p].transpose();
        out.bounds[r] = 1.0;  // hard center constraint, no slack column
    }
    for (Eigen::Index p = 0; p < P; ++p, ++r) {
        out.rows(r, n + p) = 1.0;  // xi_p >= 0
    }
    return out;
}

BruteResult brute_force_solve(const QpProblem& problem, double tol) {
    return brute_force_qp(
        problem.mode == QpMode::Hard ? encode_hard(problem) : encode_slack(problem), tol);
}

}  // namespace mcp::testsupport
