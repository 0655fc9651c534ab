#pragma once

#include <vector>

#include "gigo/types.hpp"

namespace gigo {

/// Conserved quantities of the (eta_mu, eta_sigma)-twisted Gaussian
/// manifold, evaluated from a state and the actual geodesic velocity
/// (mu_dot, sigma_dot):
///   J_mu    = (1/eta_mu) Sigma^-1 mu_dot
///   J_sigma = Sigma^-1 ((1/eta_mu) mu_dot mu^T + (1/eta_sigma) sigma_dot)
/// With eta_mu = eta_sigma = 1 this is the untwisted form.
NoetherInvariants noether_invariants(const GaussianState& state, const TangentVector& velocity,
                                     const LearningRates& rates);

/// Velocity of the twisted geodesic with invariants `inv` as it passes
/// through `state`:
///   mu_dot    = eta_mu Sigma J_mu
///   sigma_dot = eta_sigma Sigma (J_sigma - J_mu mu^T), symmetrized.
/// Off the exact geodesic (e.g. at an Euler endpoint) the symmetrization
/// absorbs the first-order integration error.
TangentVector geodesic_velocity(const GaussianState& state, const NoetherInvariants& inv,
                                const LearningRates& rates);

/// One GIGO step by forward-Euler integration of the twisted geodesic ODEs
/// in the (mu, Sigma) chart. `speed` is the IGO speed (natural gradient);
/// the twisted initial velocity is (eta_mu v_mu, eta_sigma v_sigma).
/// If the final Sigma is not SPD the whole integration is retried with the
/// step count multiplied by cfg.reduction_factor, up to cfg.max_retries.
GaussianState gigo_sigma_exp(const GaussianState& state, const TangentVector& speed,
                             const LearningRates& rates, double dt, const EulerConfig& cfg);

/// One GIGO step by forward-Euler integration on (mu, A) with
/// Sigma = A A^T:
///   mu_dot = eta_mu A A^T J_mu,  A_dot = (eta_sigma/2) (J_sigma - J_mu mu^T)^T A.
GaussianState gigo_a_exp(const GaussianState& state, const TangentVector& speed,
                         const LearningRates& rates, double dt, const EulerConfig& cfg);

/// Exact exponential map of the twisted Gaussian manifold (closed-form
/// geodesics). `speed` is the IGO speed; learning rates are folded in by
/// the rescaling mu <- lambda mu, v_mu <- eta_mu lambda v_mu,
/// v_sigma <- eta_sigma v_sigma with lambda = sqrt(eta_sigma/eta_mu), which
/// reduces the twisted problem to the untwisted closed form. The result
/// does not depend on the square root stored for Sigma, and no square root
/// of G^2 is ever formed (all series are even in G).
GaussianState exact_exp(const GaussianState& state, const TangentVector& speed,
                        const LearningRates& rates, double dt);

/// Even-series evaluation of the hyperbolic factors of the closed-form
/// geodesic:
///   C1 = ch(s G / 2)        = sum_k (s/2)^(2k)   (G^2)^k / (2k)!
///   C2 = sh(s G / 2) G^-1   = sum_k (s/2)^(2k+1) (G^2)^k / (2k+1)!
/// G^2 may be any square matrix. Terms are added until the latest one is
/// below tol times the accumulated max-norm.
struct ChShc {
    MatrixXd c1;
    MatrixXd c2;
};
ChShc taylor_ch_shc(const MatrixXd& g2, double s, double tol);

/// One GIGO step on the spherical-covariance manifold, using the
/// half-plane geodesics in closed form. (y_mu, y_sigma) is the spherical
/// IGO speed; rates are applied internally. Zero speed returns the state
/// unchanged; y_mu = 0 takes the vertical-geodesic branch without forming
/// a unit direction.
SphericalGaussianState spherical_exp(const SphericalGaussianState& state, const VectorXd& y_mu,
                                     double y_sigma, const LearningRates& rates, double dt);

/// Product-manifold exponential: applies the 1-D geodesic map independently
/// per coordinate.
std::vector<GaussianState> separable_exp(const std::vector<GaussianState>& states,
                                         const std::vector<TangentVector>& speeds,
                                         const LearningRates& rates, double dt);

/// Matrix exponential of a symmetric matrix by spectral decomposition.
/// Fixed-mean geodesics are A exp(t M) A^T in this form.
MatrixXd sym_expm(const MatrixXd& symmetric);

}  // namespace gigo
