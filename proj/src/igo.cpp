#include "gigo/igo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace gigo {

RankedWeights compute_rank_weights(const VectorXd& fitness, const SelectionScheme& scheme) {
    const int n = static_cast<int>(fitness.size());
    if (n < 1) throw InputError("compute_rank_weights: empty fitness vector");
    for (int i = 0; i < n; ++i)
        if (std::isnan(fitness(i))) throw InputError("compute_rank_weights: NaN fitness");
    if (scheme.is_direct() && scheme.direct_weights().size() != n)
        throw InputError("compute_rank_weights: direct weight vector length must equal N");

    // Lower fitness is better: position 0 holds the best sample.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fitness(a) < fitness(b); });

    VectorXd position_weight(n);
    for (int p = 0; p < n; ++p) {
        if (scheme.is_direct()) {
            position_weight(p) = scheme.direct_weights()(p);
        } else {
            const double q = (static_cast<double>(p) + 0.5) / n;
            position_weight(p) = scheme.weight_function()(q) / n;
        }
    }

    // Average the position weights over each block of tied fitness values.
    RankedWeights result;
    result.w_hat.resize(n);
    int block_start = 0;
    while (block_start < n) {
        int block_end = block_start + 1;
        while (block_end < n && fitness(order[block_end]) == fitness(order[block_start]))
            ++block_end;
        const double mean_weight =
            position_weight.segment(block_start, block_end - block_start).mean();
        for (int p = block_start; p < block_end; ++p) result.w_hat(order[p]) = mean_weight;
        block_start = block_end;
    }
    return result;
}

TangentVector igo_speed_full(const GaussianState& state, const MatrixXd& samples_x,
                             const RankedWeights& weights) {
    const int d = state.dim();
    const int n = static_cast<int>(samples_x.cols());
    if (samples_x.rows() != d) throw InputError("igo_speed_full: sample dimension mismatch");
    if (weights.w_hat.size() != n) throw InputError("igo_speed_full: weight count mismatch");

    TangentVector speed;
    speed.v_mu = VectorXd::Zero(d);
    speed.v_sigma = MatrixXd::Zero(d, d);
    const MatrixXd sigma = state.sigma();
    const double weight_sum = weights.w_hat.sum();
    for (int i = 0; i < n; ++i) {
        const VectorXd centered = samples_x.col(i) - state.mu();
        speed.v_mu += weights.w_hat(i) * centered;
        speed.v_sigma += weights.w_hat(i) * (centered * centered.transpose());
    }
    speed.v_sigma -= weight_sum * sigma;
    speed.v_sigma = 0.5 * (speed.v_sigma + speed.v_sigma.transpose()).eval();
    return speed;
}

SphericalSpeed igo_speed_spherical(const SphericalGaussianState& state, const MatrixXd& samples_x,
                                   const RankedWeights& weights) {
    const int d = state.dim();
    const int n = static_cast<int>(samples_x.cols());
    if (samples_x.rows() != d) throw InputError("igo_speed_spherical: sample dimension mismatch");
    if (weights.w_hat.size() != n) throw InputError("igo_speed_spherical: weight count mismatch");
    if (!(state.sigma > 0.0)) throw std::domain_error("igo_speed_spherical: sigma must be > 0");

    SphericalSpeed speed;
    speed.y_mu = VectorXd::Zero(d);
    speed.y_sigma = 0.0;
    for (int i = 0; i < n; ++i) {
        const VectorXd centered = samples_x.col(i) - state.mu;
        speed.y_mu += weights.w_hat(i) * centered;
        speed.y_sigma += weights.w_hat(i) * (centered.squaredNorm() / (2.0 * d * state.sigma) -
                                             state.sigma / 2.0);
    }
    return speed;
}

}  // namespace gigo
