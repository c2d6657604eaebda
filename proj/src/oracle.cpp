#include "mcp/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcp {

namespace {

// h_i = y * R_i * <w, u_i>, the linear coefficients of the margin in s.
Vector margin_coefficients(const EllipsoidManifold& m, const Vector& w) {
    const double y = static_cast<double>(m.label());
    Vector h = m.basis().transpose() * w;
    h.array() *= y * m.radii().array();
    return h;
}

WorstPoint from_params(const EllipsoidManifold& m, const Vector& w, Vector s) {
    WorstPoint out;
    out.point = m.center() + m.basis() * m.radii().cwiseProduct(s);
    out.params = std::move(s);
    out.margin = static_cast<double>(m.label()) * w.dot(out.point);
    return out;
}

}  // namespace

WorstPoint ellipsoid_worst_point_q1(const EllipsoidManifold& m, const Vector& w) {
    if (m.q() != 1.0) throw std::invalid_argument("q1 oracle called with q != 1");
    if (!w.allFinite()) throw std::invalid_argument("oracle: non-finite weights");
    const Vector h = margin_coefficients(m, w);
    Eigen::Index best = 0;
    double best_abs = std::abs(h[0]);
    for (Eigen::Index i = 1; i < h.size(); ++i) {
        if (std::abs(h[i]) > best_abs) {  // ties keep the lowest index
            best_abs = std::abs(h[i]);
            best = i;
        }
    }
    Vector s = Vector::Zero(h.size());
    if (h[best] > 0.0) {
        s[best] = -1.0;
    } else if (h[best] < 0.0) {
        s[best] = 1.0;
    }
    return from_params(m, w, std::move(s));
}

WorstPoint ellipsoid_worst_point(const EllipsoidManifold& m, const Vector& w) {
    if (m.q() == 1.0) return ellipsoid_worst_point_q1(m, w);
    if (!w.allFinite()) throw std::invalid_argument("oracle: non-finite weights");
    const double q = m.q();
    const Vector h = margin_coefficients(m, w);
    const double hmax = h.cwiseAbs().maxCoeff();
    Vector s = Vector::Zero(h.size());
    if (hmax == 0.0) return from_params(m, w, std::move(s));  // w blind to the manifold

    // minimizer of <h,s> over ||s||_q <= 1: s_i = -sign(h_i)|h_i|^{1/(q-1)},
    // normalized onto the q-sphere. Scaling by hmax keeps the powers tame.
    const double expo = 1.0 / (q - 1.0);
    double denom = 0.0;
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        const double scaled = std::abs(h[i]) / hmax;
        if (scaled == 0.0) continue;
        const double num = std::pow(scaled, expo);
        denom += std::pow(scaled, q * expo);  // == scaled^{q/(q-1)}
        s[i] = h[i] > 0.0 ? -num : num;
    }
    s /= std::pow(denom, 1.0 / q);
    return from_params(m, w, std::move(s));
}

WorstPoint sampled_worst_point(const SampledManifold& m, const Vector& w,
                               int restarts, std::mt19937_64& rng,
                               std::optional<int> warm_start) {
    if (restarts < 1) throw std::invalid_argument("sampled oracle: restarts must be >= 1");
    const int n = static_cast<int>(m.size());
    const double y = static_cast<double>(m.label());

    std::vector<double> value(n, std::numeric_limits<double>::quiet_NaN());
    auto margin_at = [&](int i) {
        if (std::isnan(value[i])) value[i] = y * w.dot(m.points()[i]);
        return value[i];
    };

    auto descend = [&](int start) {
        int cur = start;
        double cur_v = margin_at(cur);
        while (true) {
            int next = -1;
            double next_v = cur_v;
            for (int j : m.neighbor_lists()[cur]) {
                const double vj = margin_at(j);
                if (vj < next_v) {
                    next_v = vj;
                    next = j;
                }
            }
            if (next < 0) return cur;
            cur = next;
            cur_v = next_v;
        }
    };

    std::uniform_int_distribution<int> pick(0, n - 1);
    int best = warm_start ? descend(*warm_start) : -1;
    for (int r = 0; r < restarts; ++r) {
        const int found = descend(pick(rng));
        if (best < 0 || margin_at(found) < margin_at(best)) best = found;
    }
    WorstPoint out;
    out.point = m.points()[best];
    out.params = Vector::Constant(1, static_cast<double>(best));
    out.margin = margin_at(best);
    return out;
}

SeparationOracle::SeparationOracle(std::uint64_t rng_seed, int restarts,
                                   OracleSelection selection)
    : rng_(rng_seed), restarts_(restarts), selection_(selection) {}

WorstPoint SeparationOracle::worst_point(const Manifold& m, const Vector& w,
                                         int manifold_index) {
    if (const auto* e = std::get_if<EllipsoidManifold>(&m)) {
        return ellipsoid_worst_point(*e, w);
    }
    const auto& s = std::get<SampledManifold>(m);
    if (warm_starts_.size() <= static_cast<std::size_t>(manifold_index)) {
        warm_starts_.resize(manifold_index + 1);
    }
    WorstPoint wp = sampled_worst_point(s, w, restarts_, rng_,
                                        warm_starts_[manifold_index]);
    warm_starts_[manifold_index] = static_cast<int>(wp.params[0]);
    return wp;
}

OracleResult SeparationOracle::find_violation(const std::vector<Manifold>& manifolds,
                                              const Vector& w, const Vector& xi,
                                              double delta) {
    if (xi.size() != static_cast<Eigen::Index>(manifolds.size())) {
        throw std::invalid_argument("find_violation: xi size != manifold count");
    }
    OracleResult best;
    best.found = false;
    best.violation = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < manifolds.size(); ++p) {
        WorstPoint wp = worst_point(manifolds[p], w, static_cast<int>(p));
        const double violation = 1.0 - wp.margin - xi[static_cast<Eigen::Index>(p)];
        if (violation > delta) {
            if (selection_ == OracleSelection::First) {
                return OracleResult{true, std::move(wp.point), static_cast<int>(p), violation};
            }
            if (!best.found || violation > best.violation) {
                best = OracleResult{true, std::move(wp.point), static_cast<int>(p), violation};
            }
        } else if (!best.found && violation > best.violation) {
            best.violation = violation;  // report the largest non-violation
            best.manifold_index = -1;
        }
    }
    return best;
}

}  // namespace mcp
