// Acceptance runner: one PASS/FAIL line per criterion, exit 1 when any fails.
// Usage: acceptance [path-to-cli]; with a CLI path the determinism criterion runs the binary twice.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lovelock/checks.hpp"
#include "lovelock/gravity.hpp"
#include "lovelock/metrics.hpp"
#include "lovelock/report.hpp"

using namespace lovelock;

namespace {

struct Verdict {
    bool pass = true;
    std::string text;

    void require(bool ok, const std::string& what) {
        if (!text.empty()) text += "; ";
        text += what;
        if (!ok) {
            pass = false;
            text += " [x]";
        }
    }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Strict bound, as the criteria are phrased.
bool below(const CheckOutcome& o, double tol) { return !o.skipped && o.max_deviation < tol; }
bool exact(const CheckOutcome& o) { return !o.skipped && o.max_deviation == 0.0; }

Verdict symbols() {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    bool ok = true;
    for (int m = 1; m <= 5; ++m) {
        for (const auto& o : {check_eps_delta(m), check_antisymmetrizer_delta(m, 11), check_determinant_epsilon(m, 3, 12),
                              check_gkdelta_determinant_form(m)}) {
            ok = ok && exact(o) && o.detail.empty();
            worst = std::max(worst, o.max_deviation);
        }
    }
    const double t = seconds_since(t0);
    v.require(ok, "m=1..5 exact, worst " + sci(worst));
    v.require(t < 30.0, "runtime " + sci(t) + " s");
    return v;
}

Verdict hodge() {
    Verdict v;
    double dw = 0.0, ds = 0.0;
    bool ok = true;
    for (int m = 1; m <= 5; ++m)
        for (const auto& eta : {Signature::lorentzian(m), Signature::euclidean(m)}) {
            const auto a = check_hodge_defining(m, eta, 100, 21 + m);
            const auto b = check_double_star(m, eta);
            ok = ok && below(a, 1e-12) && below(b, 1e-12);
            dw = std::max(dw, a.max_deviation);
            ds = std::max(ds, b.max_deviation);
        }
    v.require(ok, "defining property " + sci(dw) + ", double star " + sci(ds));
    return v;
}

Verdict sparling() {
    Verdict v;
    auto run = [&](int m, int n, std::uint64_t seed) {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        bool ok = true;
        for (const auto& o : {check_sparling_item1(m, n, seed), check_sparling_item2(m, n, seed + 1),
                              check_sparling_item3(m, n, seed + 2), check_sparling_contraction(m, n, seed + 3)}) {
            ok = ok && below(o, 1e-10);
            worst = std::max(worst, o.max_deviation);
        }
        const double t = seconds_since(t0);
        v.require(ok, "m=" + std::to_string(m) + " x" + std::to_string(n) + " " + sci(worst));
        return t;
    };
    run(3, 20, 31);
    const double t4 = run(4, 3, 41);
    v.require(t4 < 300.0, "m=4 runtime " + sci(t4) + " s");
    return v;
}

Verdict vertical_lift() {
    Verdict v;
    const auto outs = check_vertical_lift(3, 10, 51);
    const char* names[] = {"theta", "omega", "curvature"};
    for (std::size_t i = 0; i < outs.size(); ++i) {
        std::string what = std::string(names[i]) + " " + sci(outs[i].max_deviation);
        if (!outs[i].detail.empty()) what += " (" + outs[i].detail + ")";
        v.require(below(outs[i], 1e-12), what);
    }
    return v;
}

Verdict torsion() {
    Verdict v;
    const auto a = check_torsion_closed_form(3, 20, 61);
    const auto b = check_structure_equation(3, 20, 62);
    v.require(below(a, 1e-12), "closed form " + sci(a.max_deviation));
    v.require(below(b, 1e-10), "structure equation " + sci(b.max_deviation));
    return v;
}

Verdict dlambda() {
    Verdict v;
    const auto a = check_dlambda(3, 1, 20, 71);
    const auto b = check_omega_swap(3, 1, 20, 72);
    v.require(below(a, 1e-10) && a.samples == 20, "dlambda " + sci(a.max_deviation));
    v.require(below(b, 1e-9) && b.samples > 0, "swap lemma " + sci(b.max_deviation) + " (" + b.detail + ")");
    return v;
}

Verdict pairing() {
    Verdict v;
    for (auto [m, r] : {std::pair{3, 1}, std::pair{4, 1}}) {
        const auto o = check_xi_pairing(m, r, 10, 81 + m);
        const double c = o.constants.empty() ? 0.0 : o.constants.front().value;
        v.require(below(o, 1e-9) && !o.constants.empty(),
                  "(" + std::to_string(m) + "," + std::to_string(r) + ") c=" + sci(c) + " spread " + sci(o.max_deviation));
    }
    return v;
}

Verdict psi() {
    Verdict v;
    for (auto [m, r] : {std::pair{4, 1}, std::pair{5, 1}, std::pair{4, 2}}) {
        const auto a = check_psi_lemma(m, r, 10, 91 + m * r);
        const auto b = check_psi_alternative(m, r, 10, 92 + m * r);
        const std::string tag = "(" + std::to_string(m) + "," + std::to_string(r) + ")";
        v.require(below(a, 1e-9) && a.samples == 10, tag + " lemma " + sci(a.max_deviation));
        v.require(below(b, 1e-10), tag + " alternative " + sci(b.max_deviation));
    }
    return v;
}

Verdict tensor() {
    Verdict v;
    bool sym = true, vanish = true;
    for (int m = 2; m <= 5; ++m)
        for (int r = 1; 2 * r <= m; ++r) sym = sym && exact(check_tensor_symmetry(m, r, 3, 101 + m));
    for (int m = 2; m <= 5; ++m) vanish = vanish && exact(check_tensor_vanishing(m, 3, 111 + m));
    const auto e = check_einstein_fit(4, 12, 121);
    const auto s = check_schwarzschild_tensor();
    v.require(sym, "symmetry exact");
    v.require(vanish, "zero for 2r+1>m");
    v.require(below(e, 1e-9), "Einstein fit " + sci(e.max_deviation) + " over " + std::to_string(e.samples) + " metrics");
    v.require(below(s, 1e-8), "Schwarzschild " + sci(s.max_deviation));
    return v;
}

Verdict divergence() {
    Verdict v;
    const auto outs = check_divergence(4, 1, 5, 1e-3, 131);
    v.require(below(outs[0], 1e-5), "residual " + sci(outs[0].max_deviation));
    v.require(!outs[1].skipped && outs[1].max_deviation <= 0.5, outs[1].detail);
    return v;
}

Verdict eds() {
    Verdict v;
    std::mt19937_64 rng(141);
    double tors = 0.0, metr = 0.0, bian = 0.0;
    for (int n = 0; n < 5; ++n) {
        const int m = 4;
        const Signature eta = Signature::lorentzian(m);
        const auto src = make_random_poly_metric(m, rng(), 0.1, eta);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        std::vector<double> x(m);
        for (auto& c : x) c = u(rng);
        const auto ms = src->sample(x);
        const auto cd = curvature(ms);
        for (const auto& e : eds_residuals(1, vielbein_from_metric(ms.g, eta), cd, ms)) {
            if (e.name == "torsion") tors = std::max(tors, e.residual);
            if (e.name.find("metricity") != std::string::npos) metr = std::max(metr, e.residual);
            if (e.name.find("theta^l") != std::string::npos) bian = std::max(bian, e.residual);
        }
    }
    v.require(tors < 1e-12 && metr < 1e-12, "torsion " + sci(tors) + ", metricity " + sci(metr));
    v.require(bian < 1e-10, "Bianchi " + sci(bian));
    const auto s = check_eds_schwarzschild();
    v.require(!s.skipped && s.max_deviation <= 1.0, "Schwarzschild " + s.detail);
    return v;
}

std::string without_timing(std::string text) {
    auto j = nlohmann::json::parse(text);
    for (auto& c : j["checks"]) c.erase("elapsed_ms");
    return j.dump();
}

Verdict determinism(const std::string& cli) {
    Verdict v;
    SuiteOptions opt;
    opt.seed = 42;
    if (cli.empty()) {
        const auto a = report_to_json(run_suite("all", opt), false).dump();
        const auto b = report_to_json(run_suite("all", opt), false).dump();
        v.require(a == b, "in-process payloads identical");
        return v;
    }
    std::string payload[2];
    for (int i = 0; i < 2; ++i) {
        const std::string out = "acceptance_all_" + std::to_string(i) + ".json";
        const std::string cmd = "\"" + cli + "\" check all --seed 42 --out " + out + " > /dev/null";
        const int rc = std::system(cmd.c_str());
        std::ifstream f(out);
        std::stringstream ss;
        ss << f.rdbuf();
        if (rc == -1 || ss.str().empty()) {
            v.require(false, "cli run " + std::to_string(i) + " produced no report");
            return v;
        }
        payload[i] = without_timing(ss.str());
        std::remove(out.c_str());
    }
    v.require(payload[0] == payload[1], "cli payloads identical modulo elapsed_ms");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"symbol identities", symbols},
        {"hodge defining property", hodge},
        {"sparling proposition", sparling},
        {"vertical lift contractions", vertical_lift},
        {"torsion and structure equation", torsion},
        {"dlambda pullback and swap lemma", dlambda},
        {"invariant vs coordinate Lagrangian", pairing},
        {"psi vs Euler-Lagrange tensor", psi},
        {"Lovelock tensor properties", tensor},
        {"divergence", divergence},
        {"EDS residuals", eds},
        {"determinism", [&] { return determinism(cli); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.pass = false;
            v.text = std::string("exception: ") + e.what();
        }
        std::printf("%s %2zu %-36s %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.text.c_str());
        std::fflush(stdout);
        failed += v.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
