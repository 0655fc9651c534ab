#pragma once

#include "gigo/types.hpp"

namespace gigo::analysis {

enum class TrajectoryKind { gigo, xnes, cma };

/// One point of an update trajectory: the position the named algorithm
/// reaches from a shared (state, IGO speed) after time dt. The CMA path may
/// leave the SPD cone; the result is returned as-is with sigma_spd = false.
struct TrajectoryPoint {
    double dt = 0.0;
    VectorXd mu;
    MatrixXd sigma;
    bool sigma_spd = true;
};

TrajectoryPoint trajectory(TrajectoryKind kind, const GaussianState& state,
                           const TangentVector& speed, const LearningRates& rates, double dt);

/// Closed-form second derivatives of the three trajectory maps at dt = 0:
///   mu''_gigo    = eta_mu eta_sigma v_sigma Sigma^-1 v_mu
///   sigma''_gigo = eta_sigma^2 v_sigma Sigma^-1 v_sigma - eta_mu eta_sigma v_mu v_mu^T
///   sigma''_xnes = eta_sigma^2 v_sigma Sigma^-1 v_sigma
/// with mu''_xnes = mu''_cma = 0 and sigma''_cma = 0.
struct SecondDerivatives {
    VectorXd mu_gigo;
    VectorXd mu_xnes;
    VectorXd mu_cma;
    MatrixXd sigma_gigo;
    MatrixXd sigma_xnes;
    MatrixXd sigma_cma;
};

SecondDerivatives second_derivatives(const GaussianState& state, const TangentVector& speed,
                                     const LearningRates& rates);

/// Standard normal CDF, density, and quantile (absolute error well below
/// 1e-10 on (1e-8, 1 - 1e-8)).
double norm_cdf(double x);
double norm_pdf(double x);
double norm_quantile(double p);

/// Coefficients of the infinite-sample IGO flow on a linear function with
/// truncation selection 1_{q <= q0}:
///   alpha(q0, d) = (1/2d) (int_0^q0 F^-1(u)^2 du - q0)   (adaptive quadrature)
///   beta(q0)     = E[N 1_{N <= F^-1(q0)}] = -phi(F^-1(q0)) (closed form)
struct AlphaBeta {
    double alpha = 0.0;
    double beta = 0.0;
};

AlphaBeta linear_flow_alpha_beta(double q0, int d);

struct CriticalDtInputs {
    double q0 = 0.25;
    int d = 1;
    double k = 4.0;  // weight amplitude of w = k 1_{q <= q0}
    LearningRates rates{1.0, 1.8};

    void validate() const {
        if (!(q0 > 0.0 && q0 < 0.5))
            throw std::domain_error("critical_dt: q0 must lie in (0, 0.5)");
        if (d < 1) throw InputError("critical_dt: dimension must be >= 1");
        if (!(k > 0.0)) throw InputError("critical_dt: weight amplitude must be > 0");
    }
};

struct CriticalDtResult {
    double alpha = 0.0;
    double beta = 0.0;
    double u = 0.0;
    double v = 0.0;
    double dt_cr = 0.0;
};

/// Closed-form critical step size on g(x) = -x_1:
///   u = sqrt(eta_mu / (2 d eta_sigma)) beta / alpha
///   v = sqrt(eta_sigma^2 alpha^2 + (eta_mu eta_sigma / 2d) beta^2)
///   dt_cr = (1/k)(1/v) ln((sqrt(1+u^2)+1)/(sqrt(1+u^2)-1))
CriticalDtResult critical_dt_detail(const CriticalDtInputs& inputs);
double critical_dt(const CriticalDtInputs& inputs);

/// One step of the infinite-sample spherical GIGO update on g(x) = -x_1
/// from sigma = 1: returns the per-step sigma multiplier f(dt). Equal to 1
/// exactly at dt = dt_cr.
double spherical_linear_step_ratio(double dt, const CriticalDtInputs& inputs);

/// Infinite-sample twisted IGO flow on the linear function, first
/// coordinate only:
///   sigma_t = sigma0 exp(eta_sigma alpha t)
///   mu_t    = mu0 + (eta_mu beta / (eta_sigma alpha)) (sigma_t - sigma0)
/// The mu expression integrates mu_dot = eta_mu beta sigma_t, so that
/// mu_0 = mu0 holds exactly.
struct LinearFlowPoint {
    double mu = 0.0;
    double sigma = 0.0;
};

LinearFlowPoint linear_igo_flow(double t, double q0, int d, const LearningRates& rates,
                                double mu0, double sigma0);

}  // namespace gigo::analysis
