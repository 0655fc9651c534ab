#pragma once

#include <Eigen/Core>
#include <Eigen/Cholesky>
#include <stdexcept>
#include <string>
#include <utility>

namespace gigo {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// A search-distribution parameter is degenerate: the covariance root lost
/// rank (smallest singular value below 1e-12 times the largest).
struct DegenerateStateError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Euler integration of a geodesic could not produce an SPD covariance
/// within the configured retry budget.
struct IntegrationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The closed-form exponential map hit a singular linear system; the
/// geodesic left the numerical range of the chart.
struct ExpMapFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The pure rank-mu CMA update produced a covariance that is not positive
/// definite. This is a legal algorithm outcome, reported with the step index.
struct CmaBreakdown : std::runtime_error {
    int step_index;
    explicit CmaBreakdown(int step)
        : std::runtime_error("covariance not positive definite after rank-mu update at step " +
                             std::to_string(step)),
          step_index(step) {}
};

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A truncated series or iteration failed to converge.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Learning rates of the twisted Fisher metric. Both strictly positive.
struct LearningRates {
    double eta_mu = 1.0;
    double eta_sigma = 1.0;

    LearningRates() = default;
    LearningRates(double mu_rate, double sigma_rate) : eta_mu(mu_rate), eta_sigma(sigma_rate) {
        if (!(eta_mu > 0.0) || !(eta_sigma > 0.0))
            throw InputError("learning rates must be strictly positive");
    }
};

/// Tangent vector in the (mu, Sigma) chart; v_sigma must be symmetric.
struct TangentVector {
    VectorXd v_mu;
    MatrixXd v_sigma;

    bool is_zero() const { return v_mu.isZero(0.0) && v_sigma.isZero(0.0); }
};

/// Quantities conserved along geodesics of the (twisted) Gaussian manifold.
struct NoetherInvariants {
    VectorXd j_mu;
    MatrixXd j_sigma;
};

/// Forward-Euler settings for the geodesic integrators. `steps` is the base
/// step count over the full geodesic time; on an SPD failure the count is
/// multiplied by `reduction_factor` and the step retried, up to `max_retries`.
struct EulerConfig {
    int steps = 100;
    double reduction_factor = 4.0;
    int max_retries = 8;

    void validate() const {
        if (steps < 1) throw InputError("EulerConfig: steps must be >= 1");
        if (!(reduction_factor > 1.0)) throw InputError("EulerConfig: reduction factor must be > 1");
        if (max_retries < 0) throw InputError("EulerConfig: max_retries must be >= 0");
    }
};

/// Gaussian search distribution, stored as mean plus a covariance root A
/// with Sigma = A * A^T. Immutable after construction.
class GaussianState {
  public:
    GaussianState(VectorXd mu, MatrixXd cov_root) : mu_(std::move(mu)), a_(std::move(cov_root)) {
        if (a_.rows() != a_.cols() || a_.rows() != mu_.size())
            throw InputError("GaussianState: cov_root must be square and match the mean length");
        if (!mu_.allFinite() || !a_.allFinite())
            throw InputError("GaussianState: parameters must be finite");
        ensure_nondegenerate();
    }

    /// Build from a covariance matrix; the stored root is the lower
    /// Cholesky factor.
    static GaussianState from_sigma(VectorXd mu, const MatrixXd& sigma) {
        if (sigma.rows() != sigma.cols() || sigma.rows() != mu.size())
            throw InputError("GaussianState: sigma must be square and match the mean length");
        Eigen::LLT<MatrixXd> llt(sigma);
        if (llt.info() != Eigen::Success)
            throw DegenerateStateError("GaussianState: covariance is not positive definite");
        return GaussianState(std::move(mu), llt.matrixL());
    }

    static GaussianState standard(int dim) {
        return GaussianState(VectorXd::Zero(dim), MatrixXd::Identity(dim, dim));
    }

    const VectorXd& mu() const { return mu_; }
    const MatrixXd& cov_root() const { return a_; }
    MatrixXd sigma() const { return a_ * a_.transpose(); }
    int dim() const { return static_cast<int>(mu_.size()); }

  private:
    void ensure_nondegenerate() const;

    VectorXd mu_;
    MatrixXd a_;
};

/// Gaussian with covariance sigma^2 * I; the point (mu, sigma) of the
/// spherical-covariance manifold.
struct SphericalGaussianState {
    VectorXd mu;
    double sigma;

    SphericalGaussianState(VectorXd mean, double stddev) : mu(std::move(mean)), sigma(stddev) {
        if (!(sigma > 0.0)) throw std::domain_error("SphericalGaussianState: sigma must be > 0");
        if (!mu.allFinite() || !std::isfinite(sigma))
            throw InputError("SphericalGaussianState: parameters must be finite");
    }

    int dim() const { return static_cast<int>(mu.size()); }
};

}  // namespace gigo
