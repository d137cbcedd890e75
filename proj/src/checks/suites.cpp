#include <chrono>
#include <functional>
#include <future>
#include <stdexcept>
#include <string>
#include <vector>

#include "lovelock/checks.hpp"

namespace lovelock {

namespace {

constexpr double kAlgebraic = 1e-10;
constexpr double kCurvature = 1e-8;
constexpr double kFiniteDifference = 1e-5;

struct Entry {
    std::vector<std::string> names;  // one per outcome
    std::vector<double> tolerances;
    std::function<std::vector<CheckOutcome>(std::uint64_t)> run;
};

Entry single(std::string name, double tol, std::function<CheckOutcome(std::uint64_t)> f) {
    return {{std::move(name)}, {tol}, [f = std::move(f)](std::uint64_t s) { return std::vector<CheckOutcome>{f(s)}; }};
}

struct Config {
    int m;
    int r;
    int samples;
};

std::vector<Entry> symbols_entries(const Config& c) {
    const int m = c.m;
    return {
        single("eps_delta_contraction", 0.0, [m](auto) { return check_eps_delta(m); }),
        single("antisymmetrizer_delta", 0.0, [m](auto s) { return check_antisymmetrizer_delta(m, s); }),
        single("determinant_epsilon", 0.0, [m, n = c.samples](auto s) { return check_determinant_epsilon(m, n, s); }),
        single("gkdelta_determinant_form", 0.0, [m](auto) { return check_gkdelta_determinant_form(m); }),
    };
}

std::vector<Entry> forms_entries(const Config& c) {
    const int n = c.m, k = c.samples;
    return {
        single("wedge_associativity", 1e-12, [=](auto s) { return check_wedge_associativity(n, k, s); }),
        single("graded_commutativity", 1e-12, [=](auto s) { return check_graded_commutativity(n, std::max(1, k / 20), s); }),
        single("interior_nilpotent", 1e-12, [=](auto s) { return check_interior_nilpotent(n, k, s); }),
        single("interior_antiderivation", 1e-12, [=](auto s) { return check_interior_antiderivation(n, k, s); }),
        single("pullback_functoriality", 1e-12, [=](auto s) { return check_pullback_functoriality(n, k, s); }),
        single("dense_oracle", 1e-12, [=](auto s) { return check_dense_oracle(n, std::max(1, k / 4), s); }),
        single("bracket_expansion", 1e-12, [=](auto s) { return check_bracket_expansion(std::min(n, 4), std::max(1, k / 20), s); }),
    };
}

std::vector<Entry> jet_entries(const Config& c) {
    const int m = c.m, r = c.r, k = c.samples;
    std::vector<Entry> out{
        single("sparling_item1", kAlgebraic, [=](auto s) { return check_sparling_item1(m, k, s); }),
        single("sparling_item2", kAlgebraic, [=](auto s) { return check_sparling_item2(m, k, s); }),
        single("sparling_item3", kAlgebraic, [=](auto s) { return check_sparling_item3(m, k, s); }),
        single("sparling_contraction", 1e-12, [=](auto s) { return check_sparling_contraction(m, k, s); }),
        {{"vertical_lift_theta", "vertical_lift_omega", "vertical_lift_curvature"},
         {1e-12, 1e-12, 1e-12},
         [=](std::uint64_t s) { return check_vertical_lift(m, k, s); }},
        single("torsion_closed_form", 1e-12, [=](auto s) { return check_torsion_closed_form(m, k, s); }),
        single("first_structure_equation", kAlgebraic, [=](auto s) { return check_structure_equation(m, k, s); }),
        single("t0_projection", 1e-12, [=](auto s) { return check_t0_projection(m, k, s); }),
        single("dlambda_identity", m <= 3 ? kAlgebraic : 1e-9, [=](auto s) { return check_dlambda(m, r, k, s); }),
        single("omega_swap_lemma", 1e-9, [=](auto s) { return check_omega_swap(m, r, k, s); }),
    };
    return out;
}

std::vector<Entry> hodge_entries(const Config& c) {
    const int m = c.m, r = c.r, k = c.samples;
    std::vector<Entry> out{
        single("hodge_defining_lorentzian", 1e-12, [=](auto s) { return check_hodge_defining(m, Signature::lorentzian(m), k, s); }),
        single("hodge_defining_euclidean", 1e-12, [=](auto s) { return check_hodge_defining(m, Signature::euclidean(m), k, s); }),
        single("double_star_lorentzian", 1e-12, [=](auto) { return check_double_star(m, Signature::lorentzian(m)); }),
        single("double_star_euclidean", 1e-12, [=](auto) { return check_double_star(m, Signature::euclidean(m)); }),
        single("cartan_projectors", 1e-12, [=](auto s) { return check_cartan_projectors(m, k, s); }),
    };
    // The invariant Lagrangian lives on the jet space, which caps its dimension at 4.
    std::vector<int> jet_dims;
    for (int d = std::max(3, 2 * r); d <= std::min(m, 4); ++d) jet_dims.push_back(d);
    if (jet_dims.empty() && 2 * r <= std::min(m, 4)) jet_dims.push_back(std::min(m, 4));
    const int xs = std::max(2, std::min(k, 10));
    for (int d : jet_dims) {
        const std::string tag = "_m" + std::to_string(d) + "_r" + std::to_string(r);
        out.push_back(single("xi_paths" + tag, kAlgebraic, [=](auto s) { return check_xi_paths(d, r, std::max(1, xs / 3), s); }));
        out.push_back(single("xi_pairing" + tag, 1e-9, [=](auto s) { return check_xi_pairing(d, r, xs, s); }));
    }
    return out;
}

std::vector<Entry> lovelock_entries(const Config& c) {
    const int m = c.m, r = c.r, k = c.samples;
    std::vector<Entry> out{
        single("christoffel_metricity", kAlgebraic, [=](auto s) { return check_metricity(m, k, s); }),
        single("sphere_curvature", kCurvature, [](auto) { return check_sphere_curvature(); }),
        single("schwarzschild_ricci_flat", kCurvature, [](auto) { return check_schwarzschild_ricci(); }),
        single("density_scalar_fit", 1e-9, [=](auto s) { return check_density_fit(m, std::max(k, 2), s); }),
        single("gauss_bonnet_sphere_product", kAlgebraic, [](auto) { return check_gauss_bonnet_product(); }),
        single("reference_vs_pruned_loops", 1e-12, [=](auto s) { return check_fast_paths(m, r, std::max(1, k / 5), s); }),
        single("tensor_symmetry", 0.0, [=](auto s) { return check_tensor_symmetry(m, r, k, s); }),
        single("tensor_vanishing_high_order", 0.0, [=](auto s) { return check_tensor_vanishing(m, std::max(1, k / 5), s); }),
        single("einstein_proportionality", 1e-9, [=](auto s) { return check_einstein_fit(m, std::max(k, 10), s); }),
        single("schwarzschild_tensor", kCurvature, [](auto) { return check_schwarzschild_tensor(); }),
        {{"divergence_residual", "divergence_convergence_ratio"},
         {kFiniteDifference, 0.5},
         [=](std::uint64_t s) { return check_divergence(m, r, std::max(1, k / 5), 1e-3, s); }},
        single("psi_lemma", 1e-9, [=](auto s) { return check_psi_lemma(m, r, k, s); }),
        single("psi_alternative", kAlgebraic, [=](auto s) { return check_psi_alternative(m, r, k, s); }),
        single("frame_covariance", 1e-9, [=](auto s) { return check_frame_covariance(m, r, k, s); }),
        single("coordinate_scaling", kAlgebraic, [=](auto s) { return check_scaling(m, r, s); }),
        single("eds_levi_civita", 1.0, [=](auto s) { return check_eds_levi_civita(m, k, s); }),
        single("eds_schwarzschild", 1.0, [](auto) { return check_eds_schwarzschild(); }),
    };
    return out;
}

struct SuiteDef {
    std::string name;
    int default_dim;
    int min_dim;
    int max_dim;
    int default_samples;
    bool uses_r;
    std::vector<Entry> (*entries)(const Config&);
};

const std::vector<SuiteDef>& suite_defs() {
    static const std::vector<SuiteDef> defs{
        {"symbols", 5, 1, 6, 3, false, symbols_entries},
        {"forms", 6, 2, 6, 200, false, forms_entries},
        {"jet", 3, 2, 4, 20, true, jet_entries},
        {"hodge", 5, 2, 6, 100, true, hodge_entries},
        {"lovelock", 4, 2, 6, 10, true, lovelock_entries},
    };
    return defs;
}

const SuiteDef& find_def(const std::string& name) {
    for (const auto& d : suite_defs())
        if (d.name == name) return d;
    throw std::invalid_argument("unknown suite '" + name + "'");
}

Config resolve(const SuiteDef& def, const SuiteOptions& opt) {
    Config c{opt.dim ? opt.dim : def.default_dim, opt.r ? opt.r : 1, opt.samples ? opt.samples : def.default_samples};
    if (c.m < def.min_dim || c.m > def.max_dim)
        throw std::invalid_argument("suite " + def.name + ": --dim must be in [" + std::to_string(def.min_dim) + ", " +
                                    std::to_string(def.max_dim) + "], got " + std::to_string(c.m));
    if (def.uses_r && (c.r < 1 || 2 * c.r > c.m))
        throw std::invalid_argument("suite " + def.name + ": --r must satisfy 1 <= r and 2r <= dim");
    if (c.samples < 1) throw std::invalid_argument("--samples must be positive");
    return c;
}

void run_into(const SuiteDef& def, const Config& cfg, const SuiteOptions& opt, const std::string& prefix, SuiteReport& rep) {
    const auto entries = def.entries(cfg);
    std::vector<std::future<std::pair<std::vector<CheckOutcome>, double>>> jobs;
    jobs.reserve(entries.size());
    for (const auto& entry : entries) {
        const std::uint64_t s = derive_seed(opt.seed, def.name + "." + entry.names.front());
        jobs.push_back(std::async(std::launch::async, [&entry, s] {
            const auto t0 = std::chrono::steady_clock::now();
            auto res = entry.run(s);
            const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            return std::pair{std::move(res), ms};
        }));
    }
    // Assembly in declaration order.
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto [outcomes, elapsed] = jobs[i].get();
        for (std::size_t j = 0; j < outcomes.size(); ++j) {
            const auto& o = outcomes[j];
            CheckResult cr;
            cr.name = prefix + entries[i].names[j];
            cr.tolerance = opt.tol ? *opt.tol : entries[i].tolerances[j];
            cr.max_deviation = o.max_deviation;
            cr.samples = o.samples;
            cr.elapsed_ms = elapsed / static_cast<double>(outcomes.size());
            cr.detail = o.detail;
            if (o.skipped) cr.status = CheckStatus::Skipped;
            else cr.status = o.max_deviation <= cr.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
            rep.checks.push_back(std::move(cr));
            rep.constants.insert(rep.constants.end(), o.constants.begin(), o.constants.end());
        }
    }
}

}  // namespace

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Skipped: return "skipped";
    }
    return "fail";
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& name) {
    // FNV-1a over the name, mixed with the seed by splitmix64.
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : name) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (h | 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

bool SuiteReport::passed() const {
    for (const auto& c : checks)
        if (c.status == CheckStatus::Fail) return false;
    return true;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& d : suite_defs()) n.push_back(d.name);
        return n;
    }();
    return names;
}

int suite_default_dim(const std::string& suite) { return find_def(suite).default_dim; }
int suite_max_dim(const std::string& suite) { return find_def(suite).max_dim; }

SuiteReport run_suite(const std::string& suite, const SuiteOptions& opt) {
    if (opt.tol && !(*opt.tol >= 0.0)) throw std::invalid_argument("--tol must be non-negative");
    SuiteReport rep;
    rep.suite = suite;
    rep.seed = opt.seed;
    if (suite == "all") {
        std::vector<std::pair<const SuiteDef*, Config>> plan;
        for (const auto& def : suite_defs()) plan.emplace_back(&def, resolve(def, opt));  // validate everything first
        for (const auto& [def, cfg] : plan) {
            rep.dims.push_back(cfg.m);
            rep.rs.push_back(def->uses_r ? cfg.r : 0);
            run_into(*def, cfg, opt, def->name + ".", rep);
        }
        rep.samples = opt.samples;
        return rep;
    }
    const SuiteDef& def = find_def(suite);
    const Config cfg = resolve(def, opt);
    rep.dims = {cfg.m};
    if (def.uses_r) rep.rs = {cfg.r};
    rep.samples = cfg.samples;
    run_into(def, cfg, opt, "", rep);
    return rep;
}

}  // namespace lovelock
