#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "mcp/baseline.hpp"
#include "mcp/driver.hpp"
#include "mcp/harness.hpp"
#include "mcp/oracle.hpp"

using namespace mcp;

TEST_CASE("generate_ensemble shape and labels") {
    const auto ens = generate_ensemble(500, 48, 10, 20.0, 50.0, 1);
    REQUIRE(ens.size() == 48);
    int pos = 0;
    for (const auto& m : ens) {
        CHECK(m.ambient_dim() == 500);
        CHECK(m.intrinsic_dim() == 10);
        CHECK(m.q() == 50.0);
        if (m.label() == 1) ++pos;
        for (int j = 0; j < 10; ++j) {
            CHECK(m.basis().col(j).norm() == doctest::Approx(1.0));
        }
    }
    CHECK(pos == 24);
    CHECK(ens[0].label() == 1);
    CHECK(ens[47].label() == -1);

    CHECK_THROWS(generate_ensemble(10, 3, 2, 1.0, 2.0, 1));  // odd P
    CHECK_THROWS(generate_ensemble(0, 2, 2, 1.0, 2.0, 1));
}

TEST_CASE("generated radii follow the uniform law") {
    // 2000 manifolds x 5 radii = 1e4 draws
    const auto ens = generate_ensemble(3, 2000, 5, 20.0, 2.0, 99);
    double lo = 1e30, hi = 0.0, sum = 0.0;
    std::size_t count = 0;
    for (const auto& m : ens) {
        for (int i = 0; i < 5; ++i) {
            const double r = m.radii()[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            sum += r;
            ++count;
        }
    }
    CHECK(lo >= 10.0);
    CHECK(hi <= 30.0);
    CHECK(std::abs(sum / count - 20.0) <= 0.4);  // within 2% of R0
}

TEST_CASE("ensembles are seed-deterministic") {
    const auto a = generate_ensemble(6, 4, 2, 1.0, 2.0, 12345);
    const auto b = generate_ensemble(6, 4, 2, 1.0, 2.0, 12345);
    const auto c = generate_ensemble(6, 4, 2, 1.0, 2.0, 54321);
    for (std::size_t p = 0; p < a.size(); ++p) {
        CHECK((a[p].center() - b[p].center()).norm() == 0.0);
        CHECK((a[p].basis() - b[p].basis()).norm() == 0.0);
        CHECK((a[p].radii() - b[p].radii()).norm() == 0.0);
    }
    CHECK((a[0].center() - c[0].center()).norm() > 0.0);
}

TEST_CASE("bias append adds a constant coordinate") {
    const auto ens = generate_ensemble(4, 2, 2, 1.0, 2.0, 3);
    const auto biased = append_bias_coordinate(ens);
    for (std::size_t p = 0; p < ens.size(); ++p) {
        CHECK(biased[p].ambient_dim() == 5);
        CHECK(biased[p].center()[4] == 1.0);
        CHECK(biased[p].basis().row(4).norm() == 0.0);
    }
}

TEST_CASE("config json parsing and diagnostics") {
    const std::string good = R"({
        "N": 20, "P": 4, "D": 2, "R0": 0.5, "q": 2.0,
        "delta": 1e-3, "seeds": [1, 2], "budgets": [4, 8],
        "mode": "hard", "oracle_selection": "first",
        "qp_tolerance": 1e-8, "test_points": 200
    })";
    const auto cfg = ExperimentConfig::from_json(good);
    CHECK(cfg.ambient_dim == 20);
    CHECK(cfg.seeds.size() == 2);
    CHECK(cfg.resolved_budgets() == std::vector<int>{4, 8});

    // parse errors carry position info; field errors carry the field name
    try {
        ExperimentConfig::from_json("{\"N\": 20,");
        FAIL("expected parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("parse") != std::string::npos);
    }
    try {
        ExperimentConfig::from_json(R"({"N": "twenty", "P": 4, "D": 2, "R0": 1, "q": 2})");
        FAIL("expected field error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("'N'") != std::string::npos);
    }
    try {
        ExperimentConfig::from_json(R"({"N": 20, "P": 4, "D": 2, "R0": 1, "q": 2, "mode": "slack"})");
        FAIL("expected missing C error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("'C'") != std::string::npos);
    }

    // defaults come back out through to_json for the CSV header
    const auto echoed = ExperimentConfig::from_json(cfg.to_json());
    CHECK(echoed.qp_tolerance == cfg.qp_tolerance);
    CHECK(echoed.test_points == cfg.test_points);
}

TEST_CASE("trivial experiment produces a single clean row") {
    ExperimentConfig cfg;
    cfg.ambient_dim = 6;
    cfg.num_manifolds = 2;
    cfg.intrinsic_dim = 2;
    cfg.mean_radius = 0.05;
    cfg.q = 2.0;
    cfg.delta = 1e-3;
    cfg.seeds = {7};
    cfg.budgets = std::vector<int>{};  // no baseline rows
    cfg.test_points = 200;
    cfg.threads = 1;
    const auto result = run_experiment(cfg);
    REQUIRE(result.rows.size() == 1);
    CHECK(result.rows[0].method == "mcp");
    CHECK(result.rows[0].status == "converged");
    CHECK(result.rows[0].gen_error == 0.0);
    CHECK(result.rows[0].budget ==
          2 + static_cast<int>(result.traces[0].second.augmentations()));

    const auto csv = results_to_csv(cfg, result.rows);
    std::istringstream is(csv);
    std::string line;
    std::size_t rows = 0;
    bool header_comment = false, header = false;
    while (std::getline(is, line)) {
        if (line.rfind("# config:", 0) == 0) {
            header_comment = true;
        } else if (line.rfind("method,", 0) == 0) {
            header = true;
        } else if (!line.empty()) {
            ++rows;
        }
    }
    CHECK(header_comment);
    CHECK(header);
    CHECK(rows == 1);
}

TEST_CASE("experiment row count is seeds x (1 + budgets)") {
    ExperimentConfig cfg;
    cfg.ambient_dim = 8;
    cfg.num_manifolds = 2;
    cfg.intrinsic_dim = 2;
    cfg.mean_radius = 0.1;
    cfg.q = 2.0;
    cfg.delta = 1e-2;
    cfg.seeds = {1, 2};
    cfg.budgets = std::vector<int>{2, 4};
    cfg.test_points = 100;
    cfg.threads = 2;
    const auto result = run_experiment(cfg);
    CHECK(result.rows.size() == 2 * (1 + 2));
    std::set<std::string> methods;
    for (const auto& r : result.rows) methods.insert(r.method);
    CHECK(methods == std::set<std::string>{"mcp", "point_svm"});
    // rows are sorted by (method, seed, budget)
    CHECK(result.rows[0].method == "mcp");
    CHECK(result.rows[0].seed == 1);
    CHECK(result.rows[2].method == "point_svm");
    CHECK(result.rows[2].budget <= result.rows[3].budget);
}

TEST_CASE("audit of a converged run is clean and matches the oracle") {
    const auto ens = generate_ensemble(10, 4, 2, 0.3, 2.0, 21);
    const auto manifolds = as_manifolds(ens);
    RunConfig cfg;
    cfg.tolerance = 1e-3;
    const auto ws = initial_working_set(manifolds, InitialSet::Centers, 0);
    const auto run = run_simple(manifolds, ws, cfg);
    REQUIRE(run.trace.terminal_status == TerminalStatus::Converged);

    const auto report = audit_solution(run.solution, manifolds, cfg.tolerance, 100000);
    CHECK(report.violation_count == 0);
    CHECK(report.max_oracle_gap <= 1e-4);
    CHECK_FALSE(report.degenerate_weights);
    CHECK(report.summary().find("0 violation") != std::string::npos);
}

TEST_CASE("audit flags degenerate weights") {
    const auto ens = generate_ensemble(5, 2, 2, 0.2, 2.0, 4);
    QpSolution zero;
    zero.weights = Vector::Zero(5);
    zero.slacks = Vector::Zero(2);
    const auto report = audit_solution(zero, as_manifolds(ens), 1e-3, 1000);
    CHECK(report.degenerate_weights);
    CHECK(report.violation_count > 0);  // margin 0 < 1 - delta everywhere
    for (const auto& pm : report.manifolds) {
        CHECK(pm.empirical_worst_margin == doctest::Approx(0.0));
    }
}
