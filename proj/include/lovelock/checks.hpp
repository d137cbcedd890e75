#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lovelock/signature.hpp"

namespace lovelock {

// Outcome of one identity check before naming and timing.
struct FittedConstant {
    std::string name;
    int m = 0;
    int r = 0;
    double value = 0.0;
    double variance = 0.0;
    int samples = 0;
};

struct CheckOutcome {
    double max_deviation = 0.0;
    int samples = 0;
    bool skipped = false;
    std::string detail;
    std::vector<FittedConstant> constants;
};

enum class CheckStatus { Pass, Fail, Skipped };
const char* to_string(CheckStatus s);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    int samples = 0;
    double elapsed_ms = 0.0;
    std::string detail;
};

// Deterministic per-check seed derived from the suite seed and the check name.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& name);

// alt
CheckOutcome check_eps_delta(int m);
CheckOutcome check_antisymmetrizer_delta(int m, std::uint64_t seed);
CheckOutcome check_determinant_epsilon(int m, int samples, std::uint64_t seed);
CheckOutcome check_gkdelta_determinant_form(int m);

// xalg
CheckOutcome check_wedge_associativity(int n, int samples, std::uint64_t seed);
CheckOutcome check_graded_commutativity(int n, int samples, std::uint64_t seed);
CheckOutcome check_interior_nilpotent(int n, int samples, std::uint64_t seed);
CheckOutcome check_interior_antiderivation(int n, int samples, std::uint64_t seed);
CheckOutcome check_pullback_functoriality(int n, int samples, std::uint64_t seed);
CheckOutcome check_dense_oracle(int n, int samples, std::uint64_t seed);
CheckOutcome check_bracket_expansion(int m, int samples, std::uint64_t seed);

// jetforms
CheckOutcome check_sparling_item1(int m, int samples, std::uint64_t seed);
CheckOutcome check_sparling_item2(int m, int samples, std::uint64_t seed);
CheckOutcome check_sparling_item3(int m, int samples, std::uint64_t seed);
CheckOutcome check_sparling_contraction(int m, int samples, std::uint64_t seed);
// One outcome per identity: theta, omega, curvature.
std::vector<CheckOutcome> check_vertical_lift(int m, int samples, std::uint64_t seed);
CheckOutcome check_torsion_closed_form(int m, int samples, std::uint64_t seed);
CheckOutcome check_structure_equation(int m, int samples, std::uint64_t seed);
CheckOutcome check_t0_projection(int m, int samples, std::uint64_t seed);
CheckOutcome check_dlambda(int m, int r, int samples, std::uint64_t seed);
// Premise |Omega^q_l ^ theta^l| and the swap identity, from Levi-Civita data of random metrics.
CheckOutcome check_omega_swap(int m, int r, int samples, std::uint64_t seed);

// valg
CheckOutcome check_hodge_defining(int m, const Signature& eta, int pairs, std::uint64_t seed);
CheckOutcome check_double_star(int m, const Signature& eta);
CheckOutcome check_cartan_projectors(int m, int samples, std::uint64_t seed);
CheckOutcome check_xi_paths(int m, int r, int samples, std::uint64_t seed);
// Deviation is the larger of the fit residual and the relative spread of c across points.
CheckOutcome check_xi_pairing(int m, int r, int samples, std::uint64_t seed);

// lovelock
CheckOutcome check_metricity(int m, int samples, std::uint64_t seed);
CheckOutcome check_sphere_curvature();
CheckOutcome check_schwarzschild_ricci();
CheckOutcome check_density_fit(int m, int samples, std::uint64_t seed);
CheckOutcome check_gauss_bonnet_product();
CheckOutcome check_fast_paths(int m, int r, int samples, std::uint64_t seed);
CheckOutcome check_tensor_symmetry(int m, int r, int samples, std::uint64_t seed);
CheckOutcome check_tensor_vanishing(int m, int samples, std::uint64_t seed);
CheckOutcome check_einstein_fit(int m, int samples, std::uint64_t seed);
CheckOutcome check_schwarzschild_tensor();
// Two outcomes: residual at h, and |ratio - 4| for the halved step.
std::vector<CheckOutcome> check_divergence(int m, int r, int samples, double h, std::uint64_t seed);
CheckOutcome check_psi_lemma(int m, int r, int samples, std::uint64_t seed);
CheckOutcome check_psi_alternative(int m, int r, int samples, std::uint64_t seed);
CheckOutcome check_frame_covariance(int m, int r, int samples, std::uint64_t seed);
CheckOutcome check_scaling(int m, int r, std::uint64_t seed);
// Largest residual/tolerance ratio over the evaluated EDS generators.
CheckOutcome check_eds_levi_civita(int m, int samples, std::uint64_t seed);
CheckOutcome check_eds_schwarzschild();

struct SuiteOptions {
    int dim = 0;       // 0: suite default
    int r = 0;         // 0: suite default
    std::uint64_t seed = 0;
    int samples = 0;   // 0: suite default
    std::optional<double> tol;  // overrides every tolerance when set
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<int> dims;
    std::vector<int> rs;
    int samples = 0;
    std::vector<CheckResult> checks;
    std::vector<FittedConstant> constants;

    bool passed() const;
};

const std::vector<std::string>& suite_names();  // without "all"
int suite_default_dim(const std::string& suite);
int suite_max_dim(const std::string& suite);

// Runs checks in parallel and assembles results in declaration order.
// Throws std::invalid_argument on an unknown suite or out-of-range options.
SuiteReport run_suite(const std::string& suite, const SuiteOptions& opt);

}  // namespace lovelock
