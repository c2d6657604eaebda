#include "mcp/ensemble.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mcp {

namespace {

void append_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void append_vector(std::string& out, const Vector& v) {
    out += '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        append_number(out, v[i]);
    }
    out += ']';
}

Vector vector_from_json(const nlohmann::json& j) {
    Vector v(j.size());
    Eigen::Index i = 0;
    for (const auto& x : j) v[i++] = x.get<double>();
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    // splitmix64 finalizer over the combined value
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<EllipsoidManifold> generate_ensemble(int ambient_dim, int num_manifolds,
                                                 int intrinsic_dim, double mean_radius,
                                                 double q, std::uint64_t seed) {
    if (ambient_dim < 1 || intrinsic_dim < 1) {
        throw std::invalid_argument("generate_ensemble: dimensions must be positive");
    }
    if (num_manifolds < 2 || num_manifolds % 2 != 0) {
        throw std::invalid_argument("generate_ensemble: P must be even and >= 2");
    }
    if (!(mean_radius > 0.0)) throw std::invalid_argument("generate_ensemble: R0 must be > 0");
    if (!(q >= 1.0)) throw std::invalid_argument("generate_ensemble: q must be >= 1");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> radius(0.5 * mean_radius, 1.5 * mean_radius);

    std::vector<EllipsoidManifold> out;
    out.reserve(num_manifolds);
    for (int p = 0; p < num_manifolds; ++p) {
        Vector center(ambient_dim);
        for (int i = 0; i < ambient_dim; ++i) center[i] = gauss(rng);
        Matrix basis(ambient_dim, intrinsic_dim);
        for (int jc = 0; jc < intrinsic_dim; ++jc) {
            for (int i = 0; i < ambient_dim; ++i) basis(i, jc) = gauss(rng);
        }
        Vector radii(intrinsic_dim);
        for (int i = 0; i < intrinsic_dim; ++i) radii[i] = radius(rng);
        const int label = p < num_manifolds / 2 ? 1 : -1;
        out.emplace_back(std::move(center), std::move(basis), std::move(radii), q, label);
    }
    return out;
}

std::vector<Manifold> as_manifolds(const std::vector<EllipsoidManifold>& ensemble) {
    std::vector<Manifold> out;
    out.reserve(ensemble.size());
    for (const auto& e : ensemble) out.emplace_back(e);
    return out;
}

std::vector<EllipsoidManifold> append_bias_coordinate(
    const std::vector<EllipsoidManifold>& ensemble) {
    std::vector<EllipsoidManifold> out;
    out.reserve(ensemble.size());
    for (const auto& e : ensemble) {
        Vector center(e.center().size() + 1);
        center << e.center(), 1.0;
        Matrix basis(e.basis().rows() + 1, e.basis().cols());
        basis << e.basis(), Eigen::RowVectorXd::Zero(e.basis().cols());
        out.emplace_back(std::move(center), std::move(basis), e.radii(), e.q(), e.label());
    }
    return out;
}

std::string ensemble_to_json(const std::vector<EllipsoidManifold>& ensemble) {
    if (ensemble.empty()) throw std::invalid_argument("ensemble_to_json: empty ensemble");
    const auto& first = ensemble.front();
    std::string out = "{\"N\":" + std::to_string(first.ambient_dim()) +
                      ",\"D\":" + std::to_string(first.intrinsic_dim()) + ",\"q\":";
    append_number(out, first.q());
    out += ",\"manifolds\":[";
    for (std::size_t p = 0; p < ensemble.size(); ++p) {
        const auto& m = ensemble[p];
        if (m.ambient_dim() != first.ambient_dim() ||
            m.intrinsic_dim() != first.intrinsic_dim() || m.q() != first.q()) {
            throw std::invalid_argument("ensemble_to_json: mixed dimensions in ensemble");
        }
        if (p) out += ',';
        out += "{\"label\":" + std::to_string(m.label()) + ",\"center\":";
        append_vector(out, m.center());
        out += ",\"radii\":";
        append_vector(out, m.radii());
        out += ",\"basis\":[";  // N rows of D values
        for (Eigen::Index i = 0; i < m.basis().rows(); ++i) {
            if (i) out += ',';
            out += '[';
            for (Eigen::Index jc = 0; jc < m.basis().cols(); ++jc) {
                if (jc) out += ',';
                append_number(out, m.basis()(i, jc));
            }
            out += ']';
        }
        out += "]}";
    }
    out += "]}";
    return out;
}

std::vector<EllipsoidManifold> ensemble_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("ensemble json: ") + e.what());
    }
    const int n = doc.at("N").get<int>();
    const int d = doc.at("D").get<int>();
    const double q = doc.at("q").get<double>();
    std::vector<EllipsoidManifold> out;
    for (const auto& jm : doc.at("manifolds")) {
        const int label = jm.at("label").get<int>();
        Vector center = vector_from_json(jm.at("center"));
        Vector radii = vector_from_json(jm.at("radii"));
        const auto& jb = jm.at("basis");
        if (static_cast<int>(jb.size()) != n) {
            throw std::runtime_error("ensemble json: basis row count != N");
        }
        Matrix basis(n, d);
        for (int i = 0; i < n; ++i) {
            const auto& row = jb[i];
            if (static_cast<int>(row.size()) != d) {
                throw std::runtime_error("ensemble json: basis row width != D");
            }
            for (int jc = 0; jc < d; ++jc) basis(i, jc) = row[jc].get<double>();
        }
        if (center.size() != n || radii.size() != d) {
            throw std::runtime_error("ensemble json: center/radii dimensions disagree with N/D");
        }
        out.emplace_back(std::move(center), std::move(basis), std::move(radii), q, label);
    }
    if (out.empty()) throw std::runtime_error("ensemble json: no manifolds");
    return out;
}

void save_ensemble(const std::string& path, const std::vector<EllipsoidManifold>& ensemble) {
    write_file(path, ensemble_to_json(ensemble) + "\n");
}

std::vector<EllipsoidManifold> load_ensemble(const std::string& path) {
    return ensemble_from_json(read_file(path));
}

std::string solution_to_json(const QpSolution& solution) {
    std::string out = "{\"weights\":";
    append_vector(out, solution.weights);
    out += ",\"slacks\":";
    append_vector(out, solution.slacks);
    out += ",\"objective\":";
    append_number(out, solution.objective);
    out += ",\"kkt_residual\":";
    append_number(out, solution.kkt_residual);
    out += "}";
    return out;
}

QpSolution solution_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("solution json: ") + e.what());
    }
    QpSolution sol;
    sol.weights = vector_from_json(doc.at("weights"));
    sol.slacks = doc.contains("slacks") ? vector_from_json(doc.at("slacks")) : Vector();
    sol.objective = doc.value("objective", 0.0);
    sol.kkt_residual = doc.value("kkt_residual", 0.0);
    return sol;
}

void save_solution(const std::string& path, const QpSolution& solution) {
    write_file(path, solution_to_json(solution) + "\n");
}

QpSolution load_solution(const std::string& path) {
    return solution_from_json(read_file(path));
}

}  // namespace mcp
