#pragma once

#include "pairlearn/solver.hpp"

#include <vector>

namespace pairlearn {

/// P_eps = (1 - eps) P + eps Q.
struct ContaminationSpec {
    WeightedDataset base;
    WeightedDataset contaminant;
    double epsilon = 0.0;
};

/// Base samples with weights (1 - eps) w_i followed by contaminant samples with eps v_j.
/// eps = 0 returns the base unchanged.
[[nodiscard]] WeightedDataset contaminate(const ContaminationSpec &spec);

/// Dirac measure at (x0, y0).
[[nodiscard]] WeightedDataset point_mass(const InputPoint &x0, double y0);

/// (8 / lambda) ||k|| |L|_1. Throws UnsupportedOperation for losses without a global Lipschitz constant.
[[nodiscard]] double maxbias_constant(const PairKernel &k, const PairwiseLoss &L, double lambda);

struct BiasRow {
    double epsilon = 0.0;
    double bias = 0.0;   // ||f_P - f_{P_eps}||_H
    double bound = 0.0;  // maxbias_constant * eps
    bool satisfied = false;
};

struct BiasSweepResult {
    std::vector<BiasRow> rows;
    double constant = 0.0;
    TrainAudit audit;
    [[nodiscard]] bool all_satisfied() const;
};

/// Tolerance added to the maxbias bound (solver error of two trainings).
inline constexpr double kBiasSlack = 1e-8;

[[nodiscard]] BiasSweepResult bias_sweep(const WeightedDataset &P, const WeightedDataset &Q, const PairKernel &k,
                                         const PairwiseLoss &L, const TrainConfig &cfg,
                                         const std::vector<double> &epsilons);

struct FdRow {
    double epsilon = 0.0;
    double error = 0.0;  // ||(f_{P_eps} - f_P) / eps - IF||_H
    double ratio = 0.0;  // error of the previous row / error, 0 on the first row
};

struct InfluenceResult {
    RplModel if_element;
    RplModel f_P;
    double operator_residual = 0.0;  // ||M IF + T||_H
    double if_norm = 0.0;
    double t_norm = 0.0;             // ||T||_H
    std::vector<FdRow> fd_table;
    TrainAudit audit;  // models trained here (f_P when not supplied, plus the FD retrainings)
};

/// Residual tolerance for the operator equation, relative to 1 + ||IF||_H.
inline constexpr double kOperatorTolerance = 1e-6;

/// Derivative of Q -> S((1 - eps) P + eps Q) at eps = 0, the solution of M(P) g = -T(Q; P) with
///   M(P) g  = 2 lambda g + sum_p omega_p D5D5L(.., f_P(z_p)) g(z_p) Phi(z_p)
///   T(Q; P) = E_{P x Q}[D5L Phi] + E_{Q x P}[D5L Phi] - 2 E_{P x P}[D5L Phi].
/// When `fd_epsilons` is non-empty each eps retrains on P_eps and fills fd_table.
[[nodiscard]] InfluenceResult gateaux_derivative(const WeightedDataset &P, const WeightedDataset &Q,
                                                 const PairKernel &k, const PairwiseLoss &L, const TrainConfig &cfg,
                                                 const std::vector<double> &fd_epsilons = {});

/// Same with a trained f_P (full V-statistic design over P) supplied by the caller.
[[nodiscard]] InfluenceResult gateaux_derivative(const RplModel &f_P, const WeightedDataset &P,
                                                 const WeightedDataset &Q, const PairwiseLoss &L,
                                                 const TrainConfig &cfg,
                                                 const std::vector<double> &fd_epsilons = {});

/// Gateaux derivative in the direction of the Dirac measure at (x0, y0).
[[nodiscard]] InfluenceResult influence_function(const WeightedDataset &P, const InputPoint &x0, double y0,
                                                 const PairKernel &k, const PairwiseLoss &L, const TrainConfig &cfg,
                                                 const std::vector<double> &fd_epsilons = {});

/// M(P) g for the model f_P trained on P.
[[nodiscard]] RplModel apply_m_operator(const RplModel &f_P, const WeightedDataset &P, const PairwiseLoss &L,
                                        const RplModel &g);

/// (2 lambda)^{-1} 4 c_L1 ||k||, the a-priori cap on ||IF||_H.
[[nodiscard]] double influence_norm_cap(const PairKernel &k, const PairwiseLoss &L, double lambda);

/// FD rows must shrink by a factor in [lo, hi] per halving of eps.
[[nodiscard]] bool fd_ratios_within(const std::vector<FdRow> &rows, double lo = 1.5, double hi = 2.5);

struct SecantRow {
    double epsilon = 0.0;
    double slope = 0.0;  // ||f_{P_eps} - f_P||_H / eps
};

struct SecantReport {
    std::vector<SecantRow> rows;
    double derivative_norm = 0.0;
    TrainAudit audit;
    /// |slope - derivative_norm| / derivative_norm at the smallest eps.
    [[nodiscard]] double relative_gap() const;
};

[[nodiscard]] SecantReport secant_slopes(const WeightedDataset &P, const WeightedDataset &Q, const PairKernel &k,
                                         const PairwiseLoss &L, const TrainConfig &cfg,
                                         const std::vector<double> &epsilons);

}  // namespace pairlearn
