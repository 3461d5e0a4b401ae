#include "pairlearn/types.hpp"

#include <cmath>
#include <numeric>

namespace pairlearn {

void require_finite(const InputPoint &x, const char *what) {
    if (x.size() < 1) { throw InvalidInput(std::string(what) + ": empty input point"); }
    if (!x.allFinite()) { throw InvalidInput(std::string(what) + ": non-finite coordinate"); }
}

WeightedDataset::WeightedDataset(std::vector<Sample> samples)
    : samples_(std::move(samples)) {
    if (samples_.empty()) { throw InvalidInput("dataset: no samples"); }
    const Eigen::Index d = samples_.front().x.size();
    double total = 0.0;
    for (const auto &s : samples_) {
        require_finite(s.x, "dataset");
        if (s.x.size() != d) { throw InvalidInput("dataset: inconsistent input dimension"); }
        if (!std::isfinite(s.y)) { throw InvalidInput("dataset: non-finite response"); }
        if (!std::isfinite(s.w) || s.w < 0.0) { throw InvalidInput("dataset: negative or non-finite weight"); }
        total += s.w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw InvalidInput("dataset: weights must sum to 1 (got " + std::to_string(total) + ")");
    }
}

WeightedDataset WeightedDataset::uniform(const std::vector<InputPoint> &xs, const std::vector<double> &ys) {
    if (xs.size() != ys.size()) { throw InvalidInput("dataset: x and y lengths differ"); }
    if (xs.empty()) { throw InvalidInput("dataset: no samples"); }
    const double w = 1.0 / static_cast<double>(xs.size());
    std::vector<Sample> samples;
    samples.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) { samples.push_back({xs[i], ys[i], w}); }
    return WeightedDataset(std::move(samples));
}

Eigen::MatrixXd WeightedDataset::x_matrix() const {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(samples_.size()), dim());
    for (std::size_t i = 0; i < samples_.size(); ++i) { X.row(static_cast<Eigen::Index>(i)) = samples_[i].x.transpose(); }
    return X;
}

Eigen::VectorXd WeightedDataset::y_vector() const {
    Eigen::VectorXd y(static_cast<Eigen::Index>(samples_.size()));
    for (std::size_t i = 0; i < samples_.size(); ++i) { y[static_cast<Eigen::Index>(i)] = samples_[i].y; }
    return y;
}

Eigen::VectorXd WeightedDataset::w_vector() const {
    Eigen::VectorXd w(static_cast<Eigen::Index>(samples_.size()));
    for (std::size_t i = 0; i < samples_.size(); ++i) { w[static_cast<Eigen::Index>(i)] = samples_[i].w; }
    return w;
}

}  // namespace pairlearn
