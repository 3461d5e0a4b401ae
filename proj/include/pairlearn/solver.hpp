#pragma once

#include "pairlearn/loss.hpp"
#include "pairlearn/model.hpp"
#include "pairlearn/pair_gram.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pairlearn {

struct TrainConfig {
    double lambda = 0.1;
    /// Newton iterations (smooth losses).
    std::size_t max_iters = 200;
    /// Target for ||gradient||_H (smooth losses).
    double grad_tol = 1e-10;
    /// Coordinate sweeps and duality-gap target of the hinge solver.
    std::size_t max_sweeps = 20000;
    double gap_tol = 1e-12;
    std::optional<std::size_t> pair_subsample;
    PairMode pair_mode = PairMode::v_statistic;
    std::uint64_t seed = 0;
    /// Optional warm start over the pairs of the design.
    std::optional<Eigen::VectorXd> initial_coefficients;

    void validate() const;
};

struct TrainResult {
    RplModel model;
    PairDesign design;
    std::size_t iterations = 0;
    /// ||gradient||_H at the returned model, or the duality gap for hinge.
    double residual = 0.0;
};

struct RiskReport {
    double shifted_risk = 0.0;
    double regularized_risk = 0.0;
    double unshifted_risk_at_zero = 0.0;
    double h_norm = 0.0;
};

/// Weighted pair statistic sum_p omega_p L(x_i, y_i, x_j, y_j, f(x_i, x_j)) over a design
/// (the full V-statistic D x D when no design is given).
[[nodiscard]] double empirical_risk(const RplModel &f, const WeightedDataset &data, const PairwiseLoss &L,
                                    bool shifted);
[[nodiscard]] double empirical_risk(const RplModel &f, const WeightedDataset &data, const PairDesign &design,
                                    const PairwiseLoss &L, bool shifted);

[[nodiscard]] RiskReport risk_report(const RplModel &f, const WeightedDataset &data, const PairwiseLoss &L,
                                     double lambda);

/// Gradient in H of the regularized shifted risk: 2 lambda f + sum_p omega_p D5L(.., f(z_p)) Phi(z_p).
[[nodiscard]] RplModel risk_gradient(const RplModel &f, const WeightedDataset &data, const PairwiseLoss &L,
                                     double lambda);
[[nodiscard]] RplModel risk_gradient(const RplModel &f, const WeightedDataset &data, const PairDesign &design,
                                     const PairwiseLoss &L, double lambda);

/// Exact minimizer for ls_rank: (lambda diag(1/omega) + G) alpha = y_i - y_j over the pairs.
[[nodiscard]] TrainResult train_ls_closed_form(const WeightedDataset &data, const PairKernel &k, double lambda,
                                               PairMode mode = PairMode::v_statistic);

/// Damped Newton with Armijo backtracking on the pair coefficients, for convex
/// differentiable losses. Throws ConvergenceError when max_iters is exhausted.
[[nodiscard]] TrainResult train_convex(const WeightedDataset &data, const PairKernel &k, const PairwiseLoss &L,
                                       const TrainConfig &cfg);

/// Hinge-phi losses: dual coordinate ascent on the box-constrained dual
///   max_{beta in [0,1]^N} sum_p omega_p beta_p - ||sum_p omega_p s_p beta_p Phi_p||^2_H / (4 lambda)
/// with f = -(2 lambda)^{-1} sum_p omega_p s_p beta_p Phi_p, stopped on the duality gap.
[[nodiscard]] TrainResult train_hinge(const WeightedDataset &data, const PairKernel &k, const PairwiseLoss &L,
                                      const TrainConfig &cfg);

/// Dispatches to train_hinge or train_convex.
[[nodiscard]] TrainResult train(const WeightedDataset &data, const PairKernel &k, const PairwiseLoss &L,
                                const TrainConfig &cfg);

struct RepresenterReport {
    double residual_norm = 0.0;  // ||f + (2 lambda)^{-1} sum omega_p h_p Phi_p||_H
    double h_sup = 0.0;          // max_p |h_p|
};

[[nodiscard]] RepresenterReport representer_residual(const RplModel &f, const WeightedDataset &data,
                                                     const PairwiseLoss &L, double lambda);
[[nodiscard]] RepresenterReport representer_residual(const RplModel &f, const WeightedDataset &data,
                                                     const PairDesign &design, const PairwiseLoss &L,
                                                     double lambda);

struct BoundCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
};

struct NormBoundReport {
    std::vector<BoundCheck> checks;
    [[nodiscard]] bool all_satisfied() const;
    [[nodiscard]] const BoundCheck &at(const std::string &name) const;
};

/// Absolute slack allowed in every inequality of check_norm_bounds.
inline constexpr double kBoundSlack = 1e-9;

/// Random probe points spanning the data (and inside the kernel's domain).
[[nodiscard]] Eigen::MatrixXd probe_points(const PairKernel &k, const WeightedDataset &data,
                                           std::size_t extra = 100, std::uint64_t seed = 7);

/// Inequalities satisfied by the regularized shifted-risk minimizer of a Lipschitz loss:
///   lambda ||f||^2 <= -R*(f) <= R(0),  0 <= -R*_reg(f) <= R(0),
///   sup |f| <= ||k|| ||f||_H,  sup |f| <= |L|_1 ||k||^2 / lambda,  |R*(f)| <= |L|_1^2 ||k||^2 / lambda.
/// The sup is taken over all pairs of `probe` rows (probe_points() when empty).
[[nodiscard]] NormBoundReport check_norm_bounds(const RplModel &f, const WeightedDataset &data,
                                                const PairwiseLoss &L, double lambda,
                                                const Eigen::MatrixXd &probe = {});
[[nodiscard]] NormBoundReport check_norm_bounds(const RplModel &f, const WeightedDataset &data,
                                                const PairDesign &design, const PairwiseLoss &L, double lambda,
                                                const Eigen::MatrixXd &probe = {});

/// Models trained inside a routine and how many of them failed check_norm_bounds.
struct TrainAudit {
    std::size_t models = 0;
    std::size_t violations = 0;

    void record(bool bounds_ok) {
        ++models;
        violations += bounds_ok ? 0 : 1;
    }
    void merge(const TrainAudit &other) {
        models += other.models;
        violations += other.violations;
    }
};

/// check_norm_bounds of a training result against the design it was trained on.
/// Losses without a global Lipschitz constant have no bounds to check and pass.
[[nodiscard]] bool norm_bounds_hold(const TrainResult &result, const WeightedDataset &data, const PairwiseLoss &L,
                                    double lambda);

}  // namespace pairlearn
