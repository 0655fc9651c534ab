#pragma once

#include <functional>
#include <variant>

#include "gigo/types.hpp"

namespace gigo {

/// Rank-based selection: either a non-increasing weight function over
/// fitness quantiles, or a direct per-rank weight vector w_1 >= ... >= w_N.
class SelectionScheme {
  public:
    using WeightFunction = std::function<double(double)>;

    static SelectionScheme quantile(WeightFunction w) {
        SelectionScheme s;
        s.scheme_ = std::move(w);
        return s;
    }

    static SelectionScheme direct(VectorXd weights) {
        for (int i = 1; i < weights.size(); ++i)
            if (weights(i) > weights(i - 1))
                throw InputError("SelectionScheme: direct weights must be non-increasing");
        SelectionScheme s;
        s.scheme_ = std::move(weights);
        return s;
    }

    /// w(q) = k * 1_{q <= q0}, the truncation scheme of the step-size analysis.
    static SelectionScheme truncation(double k, double q0) {
        return quantile([k, q0](double q) { return q <= q0 ? k : 0.0; });
    }

    bool is_direct() const { return std::holds_alternative<VectorXd>(scheme_); }
    const VectorXd& direct_weights() const { return std::get<VectorXd>(scheme_); }
    const WeightFunction& weight_function() const { return std::get<WeightFunction>(scheme_); }

  private:
    SelectionScheme() = default;
    std::variant<WeightFunction, VectorXd> scheme_;
};

/// Per-sample weights w_hat aligned with sample indices. They depend on the
/// samples only through fitness ranks.
struct RankedWeights {
    VectorXd w_hat;

    bool all_zero() const { return w_hat.isZero(0.0); }
};

/// Assign rank-based weights: position p (0-based, best first) carries
/// w((p + 1/2)/N) / N under a quantile scheme, or the (p+1)-th direct
/// weight. Tied fitness values share the mean weight of their rank block.
RankedWeights compute_rank_weights(const VectorXd& fitness, const SelectionScheme& scheme);

/// IGO speed (natural gradient) of the full Gaussian family in the
/// (mu, Sigma) chart:
///   v_mu    = sum_i w_i (x_i - mu)
///   v_sigma = sum_i w_i ((x_i - mu)(x_i - mu)^T - Sigma)
TangentVector igo_speed_full(const GaussianState& state, const MatrixXd& samples_x,
                             const RankedWeights& weights);

/// IGO speed in the spherical-covariance manifold.
struct SphericalSpeed {
    VectorXd y_mu;
    double y_sigma = 0.0;
};

/// Y_mu = sum_i w_i (x_i - mu),
/// Y_sigma = sum_i w_i ((x_i - mu)^T (x_i - mu) / (2 d sigma) - sigma / 2).
SphericalSpeed igo_speed_spherical(const SphericalGaussianState& state, const MatrixXd& samples_x,
                                   const RankedWeights& weights);

}  // namespace gigo
