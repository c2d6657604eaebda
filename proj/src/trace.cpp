#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "mcp/types.hpp"

namespace mcp {

std::string to_string(TerminalStatus status) {
    switch (status) {
        case TerminalStatus::Converged: return "converged";
        case TerminalStatus::Infeasible: return "infeasible";
        case TerminalStatus::MaxIterations: return "max_iterations";
    }
    return "unknown";
}

std::optional<TerminalStatus> terminal_status_from_string(const std::string& s) {
    if (s == "converged") return TerminalStatus::Converged;
    if (s == "infeasible") return TerminalStatus::Infeasible;
    if (s == "max_iterations") return TerminalStatus::MaxIterations;
    return std::nullopt;
}

void RunConfig::validate() const {
    if (!(tolerance > 0.0)) throw std::invalid_argument("config: tolerance must be > 0");
    if (slack_coefficient && !(*slack_coefficient > 0.0)) {
        throw std::invalid_argument("config: slack_coefficient must be > 0 when present");
    }
    if (!(qp_tolerance > 0.0)) throw std::invalid_argument("config: qp_tolerance must be > 0");
    if (oracle_restarts < 1) throw std::invalid_argument("config: oracle_restarts must be >= 1");
    if (!(divergence_cap > 0.0)) throw std::invalid_argument("config: divergence_cap must be > 0");
}

std::size_t RunTrace::augmentations() const {
    std::size_t n = 0;
    for (const auto& it : iterations) {
        if (it.added_manifold >= 0) ++n;
    }
    return n;
}

std::string RunTrace::to_csv() const {
    std::string out = "iter,objective,violation,ws_size,added_manifold\n";
    char buf[160];
    for (std::size_t i = 0; i < iterations.size(); ++i) {
        const auto& it = iterations[i];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%zu,%d\n", i + 1, it.objective,
                      it.violation, it.working_set_size, it.added_manifold);
        out += buf;
    }
    out += "# status=" + to_string(terminal_status) + "\n";
    return out;
}

RunTrace RunTrace::from_csv(const std::string& text) {
    RunTrace trace;
    std::istringstream is(text);
    std::string line;
    bool saw_header = false;
    bool saw_status = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("# status=", 0) == 0) {
            const auto status = terminal_status_from_string(line.substr(9));
            if (!status) throw std::runtime_error("trace csv: unknown status '" + line + "'");
            trace.terminal_status = *status;
            saw_status = true;
            continue;
        }
        if (line[0] == '#') continue;
        if (!saw_header) {
            if (line.rfind("iter,", 0) != 0) {
                throw std::runtime_error("trace csv: missing header row");
            }
            saw_header = true;
            continue;
        }
        Iteration it;
        std::size_t iter = 0;
        int mi = 0;
        std::size_t ws = 0;
        if (std::sscanf(line.c_str(), "%zu,%lg,%lg,%zu,%d", &iter, &it.objective,
                        &it.violation, &ws, &mi) != 5) {
            throw std::runtime_error("trace csv: malformed row '" + line + "'");
        }
        it.working_set_size = ws;
        it.added_manifold = mi;
        trace.iterations.push_back(it);
    }
    if (!saw_status) throw std::runtime_error("trace csv: missing status line");
    return trace;
}

}  // namespace mcp
