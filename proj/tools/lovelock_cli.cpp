#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lovelock/checks.hpp"
#include "lovelock/report.hpp"

namespace {

constexpr int kUsage = 2;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("LOVELOCK_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw std::invalid_argument("LOVELOCK_SEED is not an unsigned integer");
    }
    return 0;
}

void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lovelock gravity verification toolkit"};
    app.require_subcommand(1);

    std::string suite;
    lovelock::SuiteOptions opt;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::string check_out;
    auto* check = app.add_subcommand("check", "Run an invariant suite");
    check->add_option("suite", suite, "symbols | forms | jet | hodge | lovelock | all")
        ->required()
        ->check(CLI::IsMember({"symbols", "forms", "jet", "hodge", "lovelock", "all"}));
    check->add_option("--dim", opt.dim, "Base dimension m");
    check->add_option("--r", opt.r, "Lovelock order");
    check->add_option("--seed", seed, "Random seed (default: $LOVELOCK_SEED or 0)");
    check->add_option("--samples", opt.samples, "Samples per check");
    check->add_option("--tol", tol, "Override every tolerance");
    check->add_option("--out", check_out, "Write the JSON report here");

    lovelock::EvalRequest req;
    std::vector<std::string> params;
    std::vector<double> point;
    std::string eval_out;
    auto* eval = app.add_subcommand("eval", "Evaluate a quantity for a metric");
    eval->add_option("what", req.what, "density | tensor | psi | divergence | eds")
        ->required()
        ->check(CLI::IsMember({"density", "tensor", "psi", "divergence", "eds"}));
    eval->add_option("--metric", req.metric, "Built-in name or tabulated JSON file")->required();
    eval->add_option("--params", params, "key=value pairs");
    eval->add_option("--r", req.r, "Lovelock order");
    eval->add_option("--point", point, "Coordinates of the evaluation point");
    eval->add_option("--step", req.step, "Finite-difference step");
    eval->add_option("--out", eval_out, "Write the JSON result here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    if (check->parsed()) {
        lovelock::SuiteReport rep;
        try {
            opt.seed = seed ? *seed : default_seed();
            opt.tol = tol;
            rep = lovelock::run_suite(suite, opt);
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kUsage;
        }
        std::cout << lovelock::report_summary(rep);
        const auto j = lovelock::report_to_json(rep);
        try {
            if (!check_out.empty()) write_json(j, check_out);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kUsage;
        }
        return rep.passed() ? 0 : 1;
    }

    try {
        for (const auto& p : params) {
            const auto eq = p.find('=');
            if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--params expects key=value, got " + p);
            req.params[p.substr(0, eq)] = p.substr(eq + 1);
        }
        if (!point.empty()) req.point = point;
        const auto j = lovelock::evaluate(req);
        if (eval_out.empty()) std::cout << j.dump(2) << '\n';
        else {
            write_json(j, eval_out);
            std::cout << "wrote " << eval_out << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return 0;
}
