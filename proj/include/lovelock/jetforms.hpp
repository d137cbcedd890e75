#pragma once

#include <Eigen/Dense>

#include <random>
#include <span>
#include <vector>

#include "lovelock/alt.hpp"
#include "lovelock/signature.hpp"
#include "lovelock/xalg.hpp"

namespace lovelock {

// Covector layout on the first jet space of the frame bundle:
//   dx^mu            -> mu
//   de^mu_k          -> m + mu*m + k
//   de^mu_{k sigma}  -> m + m^2 + (mu*m + k)*m + sigma
struct JetLayout {
    int m;
    int dim() const { return m + m * m + m * m * m; }
    int dx(int mu) const { return mu; }
    int de(int mu, int k) const { return m + mu * m + k; }
    int djet(int mu, int k, int sigma) const { return m + m * m + (mu * m + k) * m + sigma; }
};

struct JetPoint {
    int m = 0;
    std::vector<double> x;
    Eigen::MatrixXd frame;    // e^mu_k at (mu, k)
    Eigen::MatrixXd coframe;  // e^k_mu at (k, mu), inverse of frame
    std::vector<double> jet;  // e^mu_{k sigma} at (mu*m + k)*m + sigma
    double condition = 1.0;

    double ejet(int mu, int k, int sigma) const { return jet[static_cast<std::size_t>((mu * m + k) * m + sigma)]; }
    JetLayout layout() const { return {m}; }
};

JetPoint make_jet_point(std::vector<double> x, const Eigen::MatrixXd& e, std::vector<double> ejet);

// e = I + 0.3 U(-1,1) (redrawn while cond > 100), ejet ~ U(-1,1), x ~ U(-1,1).
JetPoint random_jet_point(int m, std::mt19937_64& rng);
JetPoint random_t0_point(int m, std::mt19937_64& rng);

struct CanonicalForms {
    int m = 0;
    std::vector<SparseAltForm> theta;      // theta^k
    std::vector<SparseAltForm> dtheta;     // d theta^k
    std::vector<SparseAltForm> omega;      // omega^i_j at i*m + j
    std::vector<SparseAltForm> domega;     // d omega^i_j
    std::vector<SparseAltForm> curvature;  // Omega^i_j
    std::vector<SparseAltForm> torsion;    // T^k

    const SparseAltForm& w(int i, int j) const { return omega[static_cast<std::size_t>(i * m + j)]; }
    const SparseAltForm& dw(int i, int j) const { return domega[static_cast<std::size_t>(i * m + j)]; }
    const SparseAltForm& curv(int i, int j) const { return curvature[static_cast<std::size_t>(i * m + j)]; }
};

CanonicalForms canonical_forms(const JetPoint& jp);

// Same building blocks pulled back along a linear map (see t0_tangent_map).
CanonicalForms pullback(const Eigen::MatrixXd& L, const CanonicalForms& cf);

// 1/2 e^k_mu (e^mu_{i nu} e^i_sigma - e^mu_{i sigma} e^i_nu) dx^sigma ^ dx^nu.
SparseAltForm torsion_closed_form(const JetPoint& jp, int k);

// e^mu_{i nu} e^i_sigma - e^mu_{i sigma} e^i_nu at (mu*m + nu)*m + sigma.
std::vector<double> torsion_zero_residual(const JetPoint& jp);
double torsion_zero_norm(const JetPoint& jp);

// Gamma^mu_{nu sigma} = -e^k_nu e^mu_{k sigma} at (mu*m + nu)*m + sigma.
std::vector<double> jet_connection(const JetPoint& jp);
JetPoint project_to_T0(const JetPoint& jp);

// Tangent map of the chart (x, e, Gamma_sym) -> jet space of the torsion-free submanifold.
// Columns: x (m), e (m^2), Gamma^mu_{nu sigma} with nu <= sigma (m * m(m+1)/2).
Eigen::MatrixXd t0_tangent_map(const JetPoint& jp);

// theta_I = 1/(m-p)! eps_{I K} theta^{k_1} ^ ... literal sum over K.
SparseAltForm sparling(std::span<const SparseAltForm> theta, std::span<const int> indices);
SparseAltForm sparling(const JetPoint& jp, std::span<const int> indices);
// X_{i_p} _| ... _| X_{i_1} _| (theta^1 ^ ... ^ theta^m) with theta^j(X_i) = delta^j_i.
SparseAltForm sparling_via_contraction(const JetPoint& jp, std::span<const int> indices);

// Sparling forms and their differentials cached per index set.
class SparlingTable {
public:
    SparlingTable(std::span<const SparseAltForm> theta, std::span<const SparseAltForm> dtheta);

    int m() const { return m_; }
    SparseAltForm form(std::span<const int> indices) const;
    // d theta_I by the Leibniz rule on d theta^k.
    SparseAltForm differential(std::span<const int> indices) const;

private:
    int m_;
    int space_dim_;
    std::vector<SparseAltForm> forms_;  // indexed by subset bitmask of [0,m)
    std::vector<SparseAltForm> diffs_;
};

// e^r_sigma e^mu_t d/d e^mu_{s sigma}.
TangentVector vertical_lift_vector(const JetPoint& jp, int r, int s, int t);

struct LagrangianForm {
    SparseAltForm form;
    bool degenerate = false;  // 2r > m, returned as zero
};

// sum_{I,J} theta_{IJ} ^ Omega^{i1 j1} ^ ... ^ Omega^{ir jr}, Omega^{ij} = eta^{jq} Omega^i_q.
LagrangianForm lagrangian_from_blocks(const CanonicalForms& cf, int r, const Signature& eta);
LagrangianForm lovelock_lagrangian_form(const JetPoint& jp, int r, const Signature& eta);

struct DLambdaReport {
    double max_deviation = 0.0;
    double lhs_norm = 0.0;
    double rhs_norm = 0.0;
    double ratio = 0.0;            // least-squares lhs/rhs, flags a constant-factor mismatch
    double ratio_residual = 0.0;   // residual after removing that factor
};

// Both sides of the pulled-back identity for d lambda on the torsion-free submanifold.
DLambdaReport dlambda_check(const JetPoint& jp, int r, const Signature& eta);

}  // namespace lovelock
