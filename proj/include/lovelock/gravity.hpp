#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lovelock/metrics.hpp"
#include "lovelock/signature.hpp"
#include "lovelock/tensor.hpp"
#include "lovelock/xalg.hpp"

namespace lovelock {

struct Connection {
    int m = 0;
    Tensor gamma;   // Gamma^mu_{nu sigma} at (mu, nu, sigma)
    Tensor dgamma;  // d_rho Gamma^mu_{nu sigma} at (rho, mu, nu, sigma)
};

struct CurvatureData {
    int m = 0;
    Connection conn;
    Tensor riemann;  // R^sigma_{rho mu nu} at (sigma, rho, mu, nu)
    Tensor raised;   // R^{sigma tau}_{mu nu} at (sigma, tau, mu, nu)
    Eigen::MatrixXd ricci;  // R_{rho nu} = R^sigma_{rho sigma nu}
    double scalar = 0.0;
};

Connection christoffel(const MetricSample& ms);
// Throws std::runtime_error when an invariant fails beyond 1e-8.
CurvatureData riemann(const Connection& conn, const MetricSample& ms);
CurvatureData curvature(const MetricSample& ms);

struct Vielbein {
    Eigen::MatrixXd coframe;  // e^a_mu at (a, mu)
    Eigen::MatrixXd frame;    // e^mu_a at (mu, a)
    Signature eta;
    double det = 0.0;         // det of the coframe matrix
};

Vielbein vielbein_from_metric(const Eigen::MatrixXd& g, const Signature& eta);
// Coframe replaced by lambda * coframe.
Vielbein transform_frame(const Vielbein& vb, const Eigen::MatrixXd& lambda);

// sqrt|g| delta^{mu1 nu1 ..}_{a1 b1 ..} R^{a1 b1}_{mu1 nu1} ...
double lovelock_density(int r, const MetricSample& ms, const CurvatureData& cd);
double lovelock_density_fast(int r, const MetricSample& ms, const CurvatureData& cd);

// (delta^{mu a1 b1..}_{rho l1 t1..} g^{rho nu} + (mu <-> nu)) R^{l1 t1}_{a1 b1} ...
Eigen::MatrixXd lovelock_tensor(int r, const MetricSample& ms, const CurvatureData& cd);
Eigen::MatrixXd lovelock_tensor_fast(int r, const MetricSample& ms, const CurvatureData& cd);

Eigen::MatrixXd einstein_tensor(const MetricSample& ms, const CurvatureData& cd);  // G^{mu nu}

struct DivergenceResult {
    std::vector<double> residual;       // step h
    std::vector<double> residual_half;  // step h/2
    double max_residual = 0.0;
    double max_residual_half = 0.0;
    std::optional<double> ratio;        // max_residual / max_residual_half
};

DivergenceResult divergence_lovelock(int r, const MetricSource& source, std::span<const double> x, double h);

// Forms on the base space R^m.
std::vector<SparseAltForm> base_coframe(const Vielbein& vb);
// Omega^{ab} = R^{st}_{mu nu} e^a_s e^b_t dx^mu ^ dx^nu, summed over all (mu, nu).
std::vector<SparseAltForm> base_curvature_upper(const Vielbein& vb, const CurvatureData& cd);

std::vector<SparseAltForm> psi_form_base(int r, const Vielbein& vb, const CurvatureData& cd);
// -(1/2r) (eta^{il} theta^j + eta^{jl} theta^i) ^ theta_{l I J} ^ Omega^{IJ}
std::vector<SparseAltForm> psi_form_alternative(int r, const Vielbein& vb, const CurvatureData& cd);
// e^mu_a Psi^{ab} e^nu_b as the coefficient of dx^0 ^ ... ^ dx^{m-1}.
Eigen::MatrixXd psi_contracted(const std::vector<SparseAltForm>& psi, const Vielbein& vb);

struct EdsEntry {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool structural = false;  // satisfied by construction, no residual evaluated
};

std::vector<EdsEntry> eds_residuals(int r, const Vielbein& vb, const CurvatureData& cd, const MetricSample& ms);

}  // namespace lovelock
