#include "gigo/geodesics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>

namespace gigo {

namespace {

MatrixXd spd_inverse(const MatrixXd& sigma) {
    Eigen::LLT<MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw DegenerateStateError("covariance is not positive definite");
    return llt.solve(MatrixXd::Identity(sigma.rows(), sigma.cols()));
}

// Positive definiteness of the symmetrized matrix, by attempting the
// Cholesky factorization. Forward-Euler iterates carry an O(h) asymmetry,
// so only the symmetric part is judged.
bool is_spd(const MatrixXd& m) {
    if (!m.allFinite()) return false;
    Eigen::LLT<MatrixXd> llt(0.5 * (m + m.transpose()));
    return llt.info() == Eigen::Success;
}

void require_symmetric_speed(const TangentVector& speed) {
    if (!speed.v_sigma.isApprox(speed.v_sigma.transpose(), 1e-9))
        throw InputError("tangent vector: v_sigma must be symmetric");
}

// Untwisted closed-form geodesic step from (mu, A) with pre-scaled initial
// velocity (v_mu, v_sigma) already containing dt and the learning rates.
// Follows the explicit-solution pipeline: never forms G, only G^2.
void exact_step_unit_time(VectorXd& mu, MatrixXd& a, const VectorXd& v_mu,
                          const MatrixXd& v_sigma) {
    Eigen::PartialPivLU<MatrixXd> a_lu(a);
    const MatrixXd a_inv = a_lu.inverse();
    const MatrixXd b = a_inv * v_sigma * a_inv.transpose();  // A^-1 v_sigma A^-T
    const MatrixXd g2 =
        b * b + 2.0 * (a_inv * v_mu) * (a_inv * v_mu).transpose();

    const ChShc series = taylor_ch_shc(g2, 1.0, 1e-16);
    const MatrixXd m = series.c1 - b * series.c2;
    Eigen::FullPivLU<MatrixXd> m_lu(m);
    if (!m_lu.isInvertible())
        throw ExpMapFailure("exact exponential map: singular hyperbolic factor");
    const MatrixXd r = m_lu.inverse().transpose();

    mu += 2.0 * a * r * series.c2 * (a_inv * v_mu);
    a = a * r;
}

}  // namespace

NoetherInvariants noether_invariants(const GaussianState& state, const TangentVector& velocity,
                                     const LearningRates& rates) {
    require_symmetric_speed(velocity);
    const MatrixXd sigma_inv = spd_inverse(state.sigma());
    NoetherInvariants inv;
    inv.j_mu = (1.0 / rates.eta_mu) * (sigma_inv * velocity.v_mu);
    inv.j_sigma = sigma_inv * ((1.0 / rates.eta_mu) * velocity.v_mu * state.mu().transpose() +
                               (1.0 / rates.eta_sigma) * velocity.v_sigma);
    return inv;
}

TangentVector geodesic_velocity(const GaussianState& state, const NoetherInvariants& inv,
                                const LearningRates& rates) {
    const MatrixXd sigma = state.sigma();
    TangentVector velocity;
    velocity.v_mu = rates.eta_mu * (sigma * inv.j_mu);
    const MatrixXd raw =
        rates.eta_sigma * (sigma * (inv.j_sigma - inv.j_mu * state.mu().transpose()));
    velocity.v_sigma = 0.5 * (raw + raw.transpose());
    return velocity;
}

GaussianState gigo_sigma_exp(const GaussianState& state, const TangentVector& speed,
                             const LearningRates& rates, double dt, const EulerConfig& cfg) {
    cfg.validate();
    require_symmetric_speed(speed);
    if (speed.is_zero() || dt == 0.0) return state;

    const int d = state.dim();
    const MatrixXd sigma0 = state.sigma();
    const MatrixXd sigma_inv = spd_inverse(sigma0);
    // Invariants of the twisted geodesic with initial velocity
    // (eta_mu v_mu, eta_sigma v_sigma); the eta factors cancel.
    const VectorXd j_mu = sigma_inv * speed.v_mu;
    const MatrixXd j_sigma =
        sigma_inv * (speed.v_mu * state.mu().transpose() + speed.v_sigma);

    VectorXd mu(d);
    MatrixXd sigma(d, d);
    double step_count = cfg.steps;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        mu = state.mu();
        sigma = sigma0;
        const long n = static_cast<long>(step_count);
        const double h = dt / static_cast<double>(n);
        VectorXd mu_next(d);
        MatrixXd sigma_next(d, d);
        MatrixXd m(d, d);
        for (long i = 0; i < n; ++i) {
            m = j_sigma;
            m.noalias() -= j_mu * mu.transpose();
            mu_next = mu;
            mu_next.noalias() += (h * rates.eta_mu) * (sigma * j_mu);
            sigma_next = sigma;
            sigma_next.noalias() += (h * rates.eta_sigma) * (sigma * m);
            mu.swap(mu_next);
            sigma.swap(sigma_next);
        }
        if (is_spd(sigma)) return GaussianState::from_sigma(mu, 0.5 * (sigma + sigma.transpose()));
        step_count *= cfg.reduction_factor;
    }
    throw IntegrationFailure(
        "gigo_sigma_exp: covariance not positive definite after retry budget");
}

GaussianState gigo_a_exp(const GaussianState& state, const TangentVector& speed,
                         const LearningRates& rates, double dt, const EulerConfig& cfg) {
    cfg.validate();
    require_symmetric_speed(speed);
    if (speed.is_zero() || dt == 0.0) return state;

    const int d = state.dim();
    const MatrixXd sigma_inv = spd_inverse(state.sigma());
    const VectorXd j_mu = sigma_inv * speed.v_mu;
    const MatrixXd j_sigma =
        sigma_inv * (speed.v_mu * state.mu().transpose() + speed.v_sigma);

    VectorXd mu = state.mu();
    MatrixXd a = state.cov_root();
    const long n = cfg.steps;
    const double h = dt / static_cast<double>(n);
    VectorXd mu_next(d);
    MatrixXd a_next(d, d);
    MatrixXd m(d, d);
    MatrixXd drift(d, d);
    VectorXd at_j(d);
    for (long i = 0; i < n; ++i) {
        m = j_sigma;
        m.noalias() -= j_mu * mu.transpose();
        drift.noalias() = m.transpose() * a;
        at_j.noalias() = a.transpose() * j_mu;
        mu_next = mu;
        mu_next.noalias() += (h * rates.eta_mu) * (a * at_j);
        a_next = a;
        a_next.noalias() += (0.5 * h * rates.eta_sigma) * drift;
        mu.swap(mu_next);
        a.swap(a_next);
    }
    if (!a.allFinite())
        throw IntegrationFailure("gigo_a_exp: covariance root diverged during integration");
    try {
        return GaussianState(mu, a);
    } catch (const DegenerateStateError&) {
        throw IntegrationFailure("gigo_a_exp: covariance root became degenerate");
    }
}

ChShc taylor_ch_shc(const MatrixXd& g2, double s, double tol) {
    if (g2.rows() != g2.cols()) throw InputError("taylor_ch_shc: G^2 must be square");
    const int d = static_cast<int>(g2.rows());
    const double half = s / 2.0;

    ChShc out;
    out.c1 = MatrixXd::Identity(d, d);
    out.c2 = half * MatrixXd::Identity(d, d);
    MatrixXd power = MatrixXd::Identity(d, d);  // (s/2)^(2k) (G^2)^k / (2k)!
    constexpr int kMaxTerms = 300;
    for (int k = 1; k <= kMaxTerms; ++k) {
        power = (power * g2 * (half * half / ((2.0 * k - 1.0) * (2.0 * k)))).eval();
        const MatrixXd c2_term = power * (half / (2.0 * k + 1.0));
        out.c1 += power;
        out.c2 += c2_term;
        if (!power.allFinite())
            throw NumericError("taylor_ch_shc: series diverged; ||G^2|| too large");
        const double size = std::max(power.cwiseAbs().maxCoeff(), c2_term.cwiseAbs().maxCoeff());
        const double scale =
            std::max(out.c1.cwiseAbs().maxCoeff(), out.c2.cwiseAbs().maxCoeff());
        if (size < tol * scale) return out;
    }
    throw NumericError("taylor_ch_shc: no convergence within the term cap");
}

GaussianState exact_exp(const GaussianState& state, const TangentVector& speed,
                        const LearningRates& rates, double dt) {
    require_symmetric_speed(speed);
    if (speed.is_zero() || dt == 0.0) return state;

    // Reduce the twisted problem to the untwisted closed form.
    const double lambda = std::sqrt(rates.eta_sigma / rates.eta_mu);
    VectorXd mu = lambda * state.mu();
    MatrixXd a = state.cov_root();
    VectorXd v_mu = (dt * rates.eta_mu * lambda) * speed.v_mu;
    MatrixXd v_sigma = (dt * rates.eta_sigma) * speed.v_sigma;

    // Subdivide the geodesic when the series argument gets large; the
    // composition of exact sub-steps along one geodesic is exact. The
    // endpoint velocity of each sub-step comes from the conserved
    // invariants.
    Eigen::PartialPivLU<MatrixXd> a_lu(a);
    const MatrixXd a_inv = a_lu.inverse();
    const MatrixXd b = a_inv * v_sigma * a_inv.transpose();
    const MatrixXd g2 = b * b + 2.0 * (a_inv * v_mu) * (a_inv * v_mu).transpose();
    // G^2 is a congruence of a PSD matrix and its trace (twice the squared
    // metric speed) is conserved along the geodesic, so a trace-derived
    // sub-step count keeps every sub-step's series argument small.
    const double g2_norm = g2.cwiseAbs().maxCoeff();
    const int substeps =
        g2_norm > 30.0 ? static_cast<int>(std::ceil(std::sqrt(g2.trace() / 30.0))) : 1;

    const LearningRates unit_rates;  // the rescaled problem is untwisted
    GaussianState rescaled(mu, a);
    TangentVector velocity{v_mu, v_sigma};
    const NoetherInvariants inv = noether_invariants(rescaled, velocity, unit_rates);
    const double fraction = 1.0 / static_cast<double>(substeps);
    for (int step = 0; step < substeps; ++step) {
        VectorXd mu_cur = rescaled.mu();
        MatrixXd a_cur = rescaled.cov_root();
        exact_step_unit_time(mu_cur, a_cur, (fraction * velocity.v_mu).eval(),
                             (fraction * velocity.v_sigma).eval());
        rescaled = GaussianState(mu_cur, a_cur);
        if (step + 1 < substeps) velocity = geodesic_velocity(rescaled, inv, unit_rates);
    }

    return GaussianState(rescaled.mu() / lambda, rescaled.cov_root());
}

SphericalGaussianState spherical_exp(const SphericalGaussianState& state, const VectorXd& y_mu,
                                     double y_sigma, const LearningRates& rates, double dt) {
    if (y_mu.size() != state.dim()) throw InputError("spherical_exp: dimension mismatch");
    const int d = state.dim();
    const double lambda = std::sqrt(2.0 * d * rates.eta_mu / rates.eta_sigma);
    const double v_r = (rates.eta_mu / lambda) * y_mu.norm();
    const double v_sig = rates.eta_sigma * y_sigma;
    const double v = std::sqrt((v_r * v_r + v_sig * v_sig) / (state.sigma * state.sigma));
    if (v == 0.0 || dt == 0.0) return state;

    const double sigma_sq = state.sigma * state.sigma;
    const double s0 = v_sig / (v * sigma_sq);
    const double m0 = v_r / (v * sigma_sq);
    const double root = std::sqrt(m0 * m0 + s0 * s0);
    const double c = std::sqrt(std::max(0.0, (root - s0) / 2.0));
    const double dd = std::sqrt((root + s0) / 2.0);

    // z = sigma (d i e^{v dt} - c) / (c i e^{v dt} + d) on the half-plane.
    // For v dt >= 0 both sides are scaled by e^{-v dt}, keeping every
    // exponent non-positive so large steps saturate toward the half-circle
    // endpoint instead of overflowing.
    std::complex<double> z;
    if (v * dt >= 0.0) {
        const double shrink = std::exp(-v * dt);
        z = state.sigma * std::complex<double>(-c * shrink, dd) /
            std::complex<double>(dd * shrink, c);
    } else {
        const double growth = std::exp(v * dt);
        z = state.sigma * std::complex<double>(-c, dd * growth) /
            std::complex<double>(dd, c * growth);
    }

    const double new_sigma = z.imag();
    if (!(new_sigma > 0.0))
        throw ExpMapFailure("spherical_exp: geodesic left the upper half-plane numerically");
    VectorXd new_mu = state.mu;
    if (v_r > 0.0) new_mu += (lambda * z.real() / y_mu.norm()) * y_mu;
    return SphericalGaussianState(new_mu, new_sigma);
}

MatrixXd sym_expm(const MatrixXd& symmetric) {
    if (!symmetric.isApprox(symmetric.transpose(), 1e-9))
        throw InputError("sym_expm: matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (symmetric + symmetric.transpose()));
    return eig.eigenvectors() * eig.eigenvalues().array().exp().matrix().asDiagonal() *
           eig.eigenvectors().transpose();
}

std::vector<GaussianState> separable_exp(const std::vector<GaussianState>& states,
                                         const std::vector<TangentVector>& speeds,
                                         const LearningRates& rates, double dt) {
    if (states.size() != speeds.size())
        throw InputError("separable_exp: state and speed lists must have equal length");
    std::vector<GaussianState> result;
    result.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].dim() != 1 || speeds[i].v_mu.size() != 1)
            throw InputError("separable_exp: components must be one-dimensional");
        const double sigma = std::abs(states[i].cov_root()(0, 0));
        // Chart change Sigma = sigma^2: v_sigma_full = 2 sigma y_sigma.
        const double y_sigma = speeds[i].v_sigma(0, 0) / (2.0 * sigma);
        const SphericalGaussianState point(states[i].mu(), sigma);
        const SphericalGaussianState moved =
            spherical_exp(point, speeds[i].v_mu, y_sigma, rates, dt);
        MatrixXd root(1, 1);
        root(0, 0) = moved.sigma;
        result.emplace_back(moved.mu, root);
    }
    return result;
}

}  // namespace gigo
