#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pairlearn {

// Error taxonomy. Every failure that a caller can act on is one of these.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class IncompatibleModels : public Error {
public:
    using Error::Error;
};

class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

/// Raised when a loss value is not finite; carries the offending pair index.
class NumericOverflow : public NumericError {
public:
    NumericOverflow(const std::string &what, std::size_t pair_index)
        : NumericError(what), pair_index_(pair_index) {}
    [[nodiscard]] std::size_t pair_index() const { return pair_index_; }

private:
    std::size_t pair_index_;
};

/// Raised when an iterative solver runs out of iterations.
class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string &what, double last_residual)
        : NumericError(what), last_residual_(last_residual) {}
    [[nodiscard]] double last_residual() const { return last_residual_; }

private:
    double last_residual_;
};

using InputPoint = Eigen::VectorXd;

struct PairPoint {
    InputPoint first;
    InputPoint second;

    [[nodiscard]] Eigen::Index dim() const { return first.size(); }
};

struct Sample {
    InputPoint x;
    double y = 0.0;
    double w = 0.0;
};

/// Weighted sample set representing a probability measure on X x Y.
class WeightedDataset {
public:
    WeightedDataset() = default;
    /// Validates finiteness, dimension consistency and that weights sum to one.
    explicit WeightedDataset(std::vector<Sample> samples);

    /// Uniform weights 1/n.
    static WeightedDataset uniform(const std::vector<InputPoint> &xs, const std::vector<double> &ys);

    [[nodiscard]] std::size_t size() const { return samples_.size(); }
    [[nodiscard]] bool empty() const { return samples_.empty(); }
    [[nodiscard]] Eigen::Index dim() const { return samples_.empty() ? 0 : samples_.front().x.size(); }
    [[nodiscard]] const Sample &operator[](std::size_t i) const { return samples_[i]; }
    [[nodiscard]] const std::vector<Sample> &samples() const { return samples_; }

    /// Inputs stacked as rows (n x d).
    [[nodiscard]] Eigen::MatrixXd x_matrix() const;
    [[nodiscard]] Eigen::VectorXd y_vector() const;
    [[nodiscard]] Eigen::VectorXd w_vector() const;

private:
    std::vector<Sample> samples_;
};

void require_finite(const InputPoint &x, const char *what);

}  // namespace pairlearn
