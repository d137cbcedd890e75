#include <doctest.h>

#include <stdexcept>

#include "lovelock/checks.hpp"
#include "lovelock/report.hpp"

using namespace lovelock;

TEST_SUITE("cli") {

TEST_CASE("seed derivation is deterministic and name-sensitive") {
    CHECK(derive_seed(42, "a") == derive_seed(42, "a"));
    CHECK(derive_seed(42, "a") != derive_seed(42, "b"));
    CHECK(derive_seed(42, "a") != derive_seed(43, "a"));
}

TEST_CASE("suite option validation") {
    SuiteOptions o;
    o.dim = 5;
    CHECK_THROWS_AS(run_suite("jet", o), std::invalid_argument);
    o.dim = 9;
    CHECK_THROWS_AS(run_suite("jet", o), std::invalid_argument);
    CHECK_THROWS_AS(run_suite("symbols", o), std::invalid_argument);
    CHECK_THROWS_AS(run_suite("nope", SuiteOptions{}), std::invalid_argument);
    SuiteOptions r;
    r.dim = 4;
    r.r = 3;
    CHECK_THROWS_AS(run_suite("lovelock", r), std::invalid_argument);
}

TEST_CASE("status follows the tolerance") {
    SuiteOptions o;
    o.dim = 3;
    o.seed = 1;
    const auto rep = run_suite("symbols", o);
    REQUIRE(rep.passed());
    o.tol = -1.0;
    CHECK_THROWS(run_suite("symbols", o));
    SuiteOptions f;
    f.dim = 3;
    f.seed = 1;
    f.tol = 0.0;
    for (const auto& c : run_suite("forms", f).checks)
        CHECK((c.status == CheckStatus::Fail) == (c.max_deviation > 0.0));
}

TEST_CASE("report payload") {
    SuiteOptions o;
    o.seed = 9;
    o.samples = 20;
    const auto rep = run_suite("hodge", o);
    const auto j = report_to_json(rep);
    CHECK(j["suite"] == "hodge");
    CHECK(j["environment"]["seed"] == 9);
    CHECK(j["environment"]["dims"][0] == 5);
    for (const auto& c : j["checks"]) {
        CHECK(c.contains("name"));
        CHECK(c.contains("status"));
        CHECK(c.contains("max_deviation"));
        CHECK(c.contains("tolerance"));
        CHECK(c.contains("samples"));
        CHECK(c.contains("elapsed_ms"));
    }
    CHECK(j["fitted_constants"].size() >= 1u);
    CHECK_FALSE(report_to_json(rep, false)["checks"][0].contains("elapsed_ms"));
    CHECK(report_to_json(run_suite("hodge", o), false) == report_to_json(rep, false));
}

TEST_CASE("evaluate") {
    EvalRequest q;
    q.what = "tensor";
    q.metric = "minkowski";
    q.point = std::vector<double>{0, 0, 0, 0};
    CHECK(evaluate(q)["max_abs"] == 0.0);

    q.metric = "schwarzschild";
    q.params = {{"M", "1"}};
    q.point = std::vector<double>{0, 10, 1.0, 0.5};
    CHECK(evaluate(q)["max_abs"].get<double>() < 1e-8);

    q.metric = "random-poly";
    q.params = {};
    q.r = 2;
    q.point = std::vector<double>{0.1, 0.2, 0.3, 0.4};
    CHECK(evaluate(q)["max_abs"] == 0.0);

    q.what = "bogus";
    CHECK_THROWS(evaluate(q));
    q.what = "density";
    q.point = std::vector<double>{0.1};
    CHECK_THROWS(evaluate(q));
}

}
