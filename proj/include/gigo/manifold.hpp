#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "gigo/types.hpp"

namespace gigo {

/// Fisher metric of the 1-D Gaussian family in the (mu, sigma) chart:
/// diag(1/sigma^2, 2/sigma^2).
MatrixXd fisher_metric_1d(double mu, double sigma);

/// Moments of the Gaussian a chart point maps to.
struct GaussianMoments {
    VectorXd mu;
    MatrixXd sigma;
};

/// Differentiable chart theta -> N(mu(theta), Sigma(theta)).
using GaussianChart = std::function<GaussianMoments(const VectorXd&)>;

/// Fisher metric of an arbitrary chart, by central finite differences of
/// the chart with step 1e-5 * (1 + |theta_i|):
///   I_ij = dmu_i^T Sigma^-1 dmu_j + 1/2 tr(Sigma^-1 dSigma_i Sigma^-1 dSigma_j).
/// Intended as a reference implementation, not a hot path.
MatrixXd fisher_metric_general(const GaussianChart& chart, const VectorXd& theta);

/// Scale the mu-block of a metric by 1/eta_mu and the Sigma-block by
/// 1/eta_sigma. The chart must split cleanly: the first `mu_block_dim`
/// parameters move only the mean, the rest only the covariance (the cross
/// blocks of such a metric are zero).
MatrixXd twist_metric(const MatrixXd& metric, int mu_block_dim, const LearningRates& rates);

/// Deterministic random stream owned by a single run. Standard normals come
/// from a Box-Muller pair on top of mt19937_64, so the draw sequence is
/// fixed by the seed alone.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double normal();

    /// Vector of i.i.d. standard normals.
    VectorXd normal_vector(int n);

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// One sampling batch: z holds i.i.d. standard-normal columns, x = A z + mu
/// columnwise. Both are kept so algorithms needing z (xNES) and x (CMA,
/// GIGO) share a single draw.
struct Population {
    MatrixXd z;  // d x n
    MatrixXd x;  // d x n

    int size() const { return static_cast<int>(z.cols()); }
};

Population sample_population(const GaussianState& state, int n, RandomStream& rng);

}  // namespace gigo
