#pragma once

// Small fixtures shared by the unit tests and the acceptance binary.

#include "pairlearn/experiments.hpp"
#include "pairlearn/random.hpp"

#include <vector>

namespace pairlearn::testing {

inline InputPoint random_point(Rng &rng, Eigen::Index d, double scale = 1.0) {
    InputPoint x(d);
    for (Eigen::Index c = 0; c < d; ++c) { x[c] = rng.uniform(-scale, scale); }
    return x;
}

inline PairPoint random_pair(Rng &rng, Eigen::Index d, double scale = 1.0) {
    return {random_point(rng, d, scale), random_point(rng, d, scale)};
}

inline std::vector<PairPoint> random_pairs(Rng &rng, std::size_t m, Eigen::Index d, double scale = 1.0) {
    std::vector<PairPoint> out;
    for (std::size_t i = 0; i < m; ++i) { out.push_back(random_pair(rng, d, scale)); }
    return out;
}

inline RplModel random_model(Rng &rng, const PairKernel &k, std::size_t m, Eigen::Index d, double scale = 1.0) {
    Eigen::VectorXd a(static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < a.size(); ++i) { a[i] = rng.normal(); }
    return RplModel(k, 0.1, "test", d, random_pairs(rng, m, d, scale), a);
}

/// Uniform-weight dataset with inputs in the unit cube scaled into the unit ball.
inline WeightedDataset random_dataset(Rng &rng, std::size_t n, Eigen::Index d, double noise = 0.3) {
    std::vector<InputPoint> xs;
    std::vector<double> ys;
    const double shrink = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < n; ++i) {
        InputPoint x = random_point(rng, d, shrink);
        ys.push_back(x.sum() + noise * rng.normal());
        xs.push_back(std::move(x));
    }
    return WeightedDataset::uniform(xs, ys);
}

/// Dataset with random (non-uniform) weights.
inline WeightedDataset random_weighted(Rng &rng, std::size_t n, Eigen::Index d) {
    const WeightedDataset u = random_dataset(rng, n, d);
    std::vector<Sample> s = u.samples();
    double total = 0.0;
    for (auto &p : s) {
        p.w = rng.uniform(0.2, 1.0);
        total += p.w;
    }
    for (auto &p : s) { p.w /= total; }
    return WeightedDataset(std::move(s));
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace pairlearn::testing
