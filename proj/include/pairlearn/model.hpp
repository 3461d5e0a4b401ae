#pragma once

#include "pairlearn/kernel.hpp"

#include <string>
#include <vector>

namespace pairlearn {

/// Element f = sum_p alpha_p k(., z_p) of the RKHS of a pair kernel.
///
/// The same type carries trained estimators, gradients, influence functions and
/// any linear combination of those; lambda and loss_tag are bookkeeping of the
/// problem the element belongs to.
class RplModel {
public:
    RplModel(PairKernel kernel, double lambda, std::string loss_tag, Eigen::Index dim,
             std::vector<PairPoint> expansion_points, Eigen::VectorXd coefficients);

    static RplModel zero(PairKernel kernel, double lambda, std::string loss_tag, Eigen::Index dim);

    [[nodiscard]] const PairKernel &kernel() const { return kernel_; }
    [[nodiscard]] double lambda() const { return lambda_; }
    [[nodiscard]] const std::string &loss_tag() const { return loss_tag_; }
    [[nodiscard]] Eigen::Index dim() const { return dim_; }
    [[nodiscard]] std::size_t size() const { return points_.size(); }
    [[nodiscard]] const std::vector<PairPoint> &expansion_points() const { return points_; }
    [[nodiscard]] const Eigen::VectorXd &coefficients() const { return coefficients_; }

    [[nodiscard]] RplModel with_coefficients(Eigen::VectorXd coefficients) const;

private:
    PairKernel kernel_;
    double lambda_;
    std::string loss_tag_;
    Eigen::Index dim_;
    std::vector<PairPoint> points_;
    Eigen::VectorXd coefficients_;
};

/// f(x, x') by direct summation over the expansion.
[[nodiscard]] double evaluate(const RplModel &f, const InputPoint &x, const InputPoint &xp);

/// E(a, b) = f(first.row(a), second.row(b)). Uses the kernel's separable
/// structure, so it costs O(|first| |second|) per unique expansion coordinate
/// rather than one kernel evaluation per (query, expansion point).
[[nodiscard]] Eigen::MatrixXd evaluate_grid(const RplModel &f, const Eigen::MatrixXd &first,
                                            const Eigen::MatrixXd &second);

[[nodiscard]] Eigen::VectorXd evaluate_pairs(const RplModel &f, const std::vector<PairPoint> &queries);

/// <f, g>_H = alpha^T K beta, computed from the separable structure of the kernel.
[[nodiscard]] double h_inner(const RplModel &f, const RplModel &g);
[[nodiscard]] double h_norm(const RplModel &f);
/// ||f - g||_H
[[nodiscard]] double h_distance(const RplModel &f, const RplModel &g);

/// sum_i scalars[i] * models[i]; expansion points are concatenated in order.
[[nodiscard]] RplModel model_combine(const std::vector<RplModel> &models, const std::vector<double> &scalars);

/// Merges expansion points with bit-identical coordinates (first occurrence order kept).
[[nodiscard]] RplModel compact(const RplModel &f);

/// max |f| over all pairs of probe points (rows of `probe`).
[[nodiscard]] double sup_probe(const RplModel &f, const Eigen::MatrixXd &probe);

void require_same_kernel(const RplModel &f, const RplModel &g);

namespace detail {

/// f written as sum_{a,b} C(a,b) k(., (U1.row(a), U2.row(b))) over unique coordinates.
struct Factored {
    Eigen::MatrixXd U1;
    Eigen::MatrixXd U2;
    Eigen::MatrixXd C;
};

[[nodiscard]] Factored factor(const RplModel &f);
[[nodiscard]] double factored_inner(const PairKernel &k, const Factored &a, const Factored &b);
[[nodiscard]] Eigen::MatrixXd factored_eval_grid(const PairKernel &k, const Factored &f, const Eigen::MatrixXd &first,
                                                 const Eigen::MatrixXd &second);

}  // namespace detail

}  // namespace pairlearn
