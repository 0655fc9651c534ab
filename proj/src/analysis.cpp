#include "gigo/analysis.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "gigo/geodesics.hpp"

namespace gigo::analysis {

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fb, double fm, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, fm, flm, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, fb, frm, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return adaptive_simpson(f, a, b, fa, fb, fm, tol, 48);
}

}  // namespace

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("norm_quantile: p must be in (0, 1)");
    // Acklam's rational approximation, then two Newton refinements.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    for (int i = 0; i < 2; ++i) x -= (norm_cdf(x) - p) / norm_pdf(x);
    return x;
}

TrajectoryPoint trajectory(TrajectoryKind kind, const GaussianState& state,
                           const TangentVector& speed, const LearningRates& rates, double dt) {
    TrajectoryPoint point;
    point.dt = dt;
    switch (kind) {
        case TrajectoryKind::gigo: {
            const GaussianState end = exact_exp(state, speed, rates, dt);
            point.mu = end.mu();
            point.sigma = end.sigma();
            break;
        }
        case TrajectoryKind::xnes: {
            const MatrixXd& a = state.cov_root();
            const MatrixXd a_inv = a.partialPivLu().inverse();
            const MatrixXd arg =
                dt * rates.eta_sigma * (a_inv * speed.v_sigma * a_inv.transpose());
            point.mu = state.mu() + dt * rates.eta_mu * speed.v_mu;
            point.sigma = a * sym_expm(0.5 * (arg + arg.transpose())) * a.transpose();
            break;
        }
        case TrajectoryKind::cma: {
            point.mu = state.mu() + dt * rates.eta_mu * speed.v_mu;
            point.sigma = state.sigma() + dt * rates.eta_sigma * speed.v_sigma;
            Eigen::LLT<MatrixXd> llt(point.sigma);
            point.sigma_spd = llt.info() == Eigen::Success;
            break;
        }
    }
    return point;
}

SecondDerivatives second_derivatives(const GaussianState& state, const TangentVector& speed,
                                     const LearningRates& rates) {
    const int d = state.dim();
    const MatrixXd sigma_inv =
        state.sigma().llt().solve(MatrixXd::Identity(d, d));
    SecondDerivatives out;
    out.mu_gigo = rates.eta_mu * rates.eta_sigma * (speed.v_sigma * (sigma_inv * speed.v_mu));
    out.mu_xnes = VectorXd::Zero(d);
    out.mu_cma = VectorXd::Zero(d);
    out.sigma_xnes =
        rates.eta_sigma * rates.eta_sigma * (speed.v_sigma * sigma_inv * speed.v_sigma);
    out.sigma_gigo = out.sigma_xnes -
                     rates.eta_mu * rates.eta_sigma * (speed.v_mu * speed.v_mu.transpose());
    out.sigma_cma = MatrixXd::Zero(d, d);
    return out;
}

AlphaBeta linear_flow_alpha_beta(double q0, int d) {
    if (!(q0 > 0.0 && q0 < 1.0)) throw std::domain_error("alpha/beta: q0 must be in (0, 1)");
    if (d < 1) throw InputError("alpha/beta: dimension must be >= 1");
    const double a = norm_quantile(q0);
    // int_0^q0 F^-1(u)^2 du after the substitution u = F(x); the integrand
    // x^2 phi(x) is smooth and negligible below -12.
    const double moment =
        integrate([](double x) { return x * x * norm_pdf(x); }, -12.0, a, 1e-12);
    AlphaBeta out;
    out.alpha = (moment - q0) / (2.0 * d);
    out.beta = -norm_pdf(a);
    return out;
}

CriticalDtResult critical_dt_detail(const CriticalDtInputs& inputs) {
    inputs.validate();
    const AlphaBeta ab = linear_flow_alpha_beta(inputs.q0, inputs.d);
    if (!(ab.alpha > 0.0))
        throw std::domain_error("critical_dt: alpha <= 0, the linear-flow analysis breaks down");
    const double eta_mu = inputs.rates.eta_mu;
    const double eta_sigma = inputs.rates.eta_sigma;
    const double two_d = 2.0 * inputs.d;

    CriticalDtResult out;
    out.alpha = ab.alpha;
    out.beta = ab.beta;
    out.u = std::sqrt(eta_mu / (two_d * eta_sigma)) * ab.beta / ab.alpha;
    out.v = std::sqrt(eta_sigma * eta_sigma * ab.alpha * ab.alpha +
                      (eta_mu * eta_sigma / two_d) * ab.beta * ab.beta);
    const double root = std::sqrt(1.0 + out.u * out.u);
    out.dt_cr = (1.0 / inputs.k) * (1.0 / out.v) * std::log((root + 1.0) / (root - 1.0));
    return out;
}

double critical_dt(const CriticalDtInputs& inputs) { return critical_dt_detail(inputs).dt_cr; }

double spherical_linear_step_ratio(double dt, const CriticalDtInputs& inputs) {
    inputs.validate();
    const AlphaBeta ab = linear_flow_alpha_beta(inputs.q0, inputs.d);
    // Infinite-sample IGO speed of w = k 1_{q <= q0} on g(x) = -x_1 at
    // sigma = 1: Y = (k beta sigma e_1, k alpha sigma).
    const SphericalGaussianState state(VectorXd::Zero(inputs.d), 1.0);
    VectorXd y_mu = VectorXd::Zero(inputs.d);
    y_mu(0) = inputs.k * ab.beta;
    const double y_sigma = inputs.k * ab.alpha;
    const SphericalGaussianState moved =
        spherical_exp(state, y_mu, y_sigma, inputs.rates, dt);
    return moved.sigma / state.sigma;
}

LinearFlowPoint linear_igo_flow(double t, double q0, int d, const LearningRates& rates,
                                double mu0, double sigma0) {
    const AlphaBeta ab = linear_flow_alpha_beta(q0, d);
    LinearFlowPoint out;
    out.sigma = sigma0 * std::exp(rates.eta_sigma * ab.alpha * t);
    out.mu = mu0 + (rates.eta_mu * ab.beta / (rates.eta_sigma * ab.alpha)) * (out.sigma - sigma0);
    return out;
}

}  // namespace gigo::analysis
