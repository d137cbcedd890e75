#pragma once

#include <Eigen/Dense>

#include "lovelock/jetforms.hpp"
#include "lovelock/signature.hpp"
#include "lovelock/xalg.hpp"

namespace lovelock {

// k-vectors on R^m reuse SparseAltForm with space_dim = m; basis e_{i1} ^ ... ^ e_{ik}.

// Bilinear extension of det[eta(a_i, b_j)] on elementary k-vectors.
double eta_hat(const SparseAltForm& alpha, const SparseAltForm& beta, const Signature& eta);

SparseAltForm hodge_star(const SparseAltForm& beta, const Signature& eta);

// Matrix of the star from Lambda^k to Lambda^(m-k) in lexicographic bases.
Eigen::MatrixXd hodge_matrix(int k, const Signature& eta);

enum class CartanPart { K, P };

// pi_k(A) = (A - eta A^T eta)/2, pi_p(A) = (A + eta A^T eta)/2.
Eigen::MatrixXd cartan_project(const Eigen::MatrixXd& a, CartanPart part, const Signature& eta);
VectorValuedForm cartan_project(const VectorValuedForm& a, CartanPart part, const Signature& eta);

// theta^(k) = sum over i1 < ... < ik of theta^{i1} ^ ... ^ theta^{ik} (x) e_{i1} ^ ... ^ e_{ik}.
VectorValuedForm theta_power(std::span<const SparseAltForm> theta, int k);

// The map Lambda^{2r} -> Lambda^r (x) (Lambda^r)* on elementary 2r-vectors, lexicographic bases.
// The default places the flat on the first r factors; flat_on_last places it on the last r.
Eigen::MatrixXd ar_map(int m, int r, const Signature& eta, bool flat_on_last = false);

// det(eta)/(2r)! eta^{i_{r+1} j_{r+1}} ... theta_{i1..i2r} (x) e_{j_{r+1}..j_{2r}} (x) e^{i1..ir},
// summed over all index tuples.
VectorValuedForm xi_r(const CanonicalForms& cf, int r, const Signature& eta);
VectorValuedForm xi_r(const JetPoint& jp, int r, const Signature& eta);
// A_r(star theta^(m-2r)) through hodge_matrix and ar_map.
VectorValuedForm xi_r_via_hodge(const CanonicalForms& cf, int r, const Signature& eta, bool flat_on_last = false);

// Omega^r as an End(Lambda^r)-valued 2r-form through the symmetrized product.
VectorValuedForm curvature_power(const CanonicalForms& cf, int r);

struct XiPairing {
    double constant = 0.0;      // least-squares c with pairing ~ c * lambda
    double residual = 0.0;      // max |pairing - c lambda| / max(1, |pairing|)
    double lambda_norm = 0.0;
    bool degenerate = false;    // lambda vanishes at the point
};

XiPairing xi_pairing_check(const JetPoint& jp, int r, const Signature& eta);

}  // namespace lovelock
