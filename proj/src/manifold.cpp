#include "gigo/manifold.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace gigo {

void GaussianState::ensure_nondegenerate() const {
    Eigen::JacobiSVD<MatrixXd> svd(a_);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || !(sv(sv.size() - 1) > 1e-12 * sv(0)))
        throw DegenerateStateError("covariance root is numerically singular");
}

MatrixXd fisher_metric_1d(double mu, double sigma) {
    (void)mu;  // the metric does not depend on the mean
    if (!(sigma > 0.0)) throw std::domain_error("fisher_metric_1d: sigma must be > 0");
    MatrixXd metric = MatrixXd::Zero(2, 2);
    metric(0, 0) = 1.0 / (sigma * sigma);
    metric(1, 1) = 2.0 / (sigma * sigma);
    return metric;
}

MatrixXd fisher_metric_general(const GaussianChart& chart, const VectorXd& theta) {
    const int p = static_cast<int>(theta.size());
    const GaussianMoments center = chart(theta);
    const int d = static_cast<int>(center.mu.size());

    Eigen::LLT<MatrixXd> llt(center.sigma);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("fisher_metric_general: Sigma(theta) is not positive definite");
    const MatrixXd sigma_inv = llt.solve(MatrixXd::Identity(d, d));

    std::vector<VectorXd> dmu(p);
    std::vector<MatrixXd> dsigma(p);
    for (int i = 0; i < p; ++i) {
        const double h = 1e-5 * (1.0 + std::abs(theta(i)));
        VectorXd plus = theta, minus = theta;
        plus(i) += h;
        minus(i) -= h;
        const GaussianMoments hi = chart(plus);
        const GaussianMoments lo = chart(minus);
        dmu[i] = (hi.mu - lo.mu) / (2.0 * h);
        dsigma[i] = (hi.sigma - lo.sigma) / (2.0 * h);
    }

    MatrixXd metric(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            const double mean_part = dmu[i].dot(sigma_inv * dmu[j]);
            const double cov_part =
                0.5 * (sigma_inv * dsigma[i] * sigma_inv * dsigma[j]).trace();
            metric(i, j) = mean_part + cov_part;
            metric(j, i) = metric(i, j);
        }
    }
    return metric;
}

MatrixXd twist_metric(const MatrixXd& metric, int mu_block_dim, const LearningRates& rates) {
    if (metric.rows() != metric.cols()) throw InputError("twist_metric: metric must be square");
    if (mu_block_dim < 0 || mu_block_dim > metric.rows())
        throw InputError("twist_metric: mu block size out of range");
    const int k = mu_block_dim;
    const int m = static_cast<int>(metric.rows()) - k;
    MatrixXd twisted = metric;
    twisted.topLeftCorner(k, k) /= rates.eta_mu;
    twisted.bottomRightCorner(m, m) /= rates.eta_sigma;
    return twisted;
}

double RandomStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; consumes exactly two uniforms per pair.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

VectorXd RandomStream::normal_vector(int n) {
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = normal();
    return v;
}

Population sample_population(const GaussianState& state, int n, RandomStream& rng) {
    if (n < 1) throw InputError("sample_population: need at least one sample");
    const int d = state.dim();
    Population pop;
    pop.z.resize(d, n);
    pop.x.resize(d, n);
    for (int i = 0; i < n; ++i) {
        for (int r = 0; r < d; ++r) pop.z(r, i) = rng.normal();
    }
    pop.x.noalias() = state.cov_root() * pop.z;
    pop.x.colwise() += state.mu();
    return pop;
}

}  // namespace gigo
