#pragma once

#include "pairlearn/robustness.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pairlearn {

enum class Truth { linear, sine };
enum class NoiseKind { gaussian, cauchy, truncated_cauchy };

/// y = score(x) + noise with x uniform on [-1, 1]^d and uniform weights.
struct SyntheticSpec {
    std::size_t n = 20;
    Eigen::Index d = 1;
    Truth truth = Truth::linear;
    NoiseKind noise = NoiseKind::gaussian;
    double noise_scale = 0.1;  // sigma for gaussian, gamma for cauchy
    double truncation = 5.0;   // |noise| <= truncation * noise_scale for truncated_cauchy
    std::uint64_t seed = 0;

    void validate() const;
};

/// Univariate score: sum_k x_k, or sin(pi sum_k x_k).
[[nodiscard]] double truth_score(Truth truth, const InputPoint &x);
[[nodiscard]] WeightedDataset gen_synthetic(const SyntheticSpec &spec);

[[nodiscard]] std::string to_string(Truth t);
[[nodiscard]] Truth truth_from_string(const std::string &s);
[[nodiscard]] std::string to_string(NoiseKind k);
[[nodiscard]] NoiseKind noise_from_string(const std::string &s);

struct InvariantCheck {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double reference = 0.0;
};

/// Tabular result of an experiment plus the invariants it asserts.
struct ExperimentReport {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<InvariantCheck> checks;
    std::vector<std::pair<std::string, double>> stats;
    std::uint64_t seed = 0;
    std::size_t models_trained = 0;
    std::size_t norm_bound_violations = 0;

    [[nodiscard]] bool all_passed() const;
    [[nodiscard]] const InvariantCheck &check(const std::string &name) const;
    [[nodiscard]] double stat(const std::string &name) const;
};

/// Trains and runs check_norm_bounds on the result, counting violations into `report`.
[[nodiscard]] RplModel train_audited(const WeightedDataset &data, const PairKernel &k, const PairwiseLoss &L,
                                     const TrainConfig &cfg, ExperimentReport &report);

struct ConsistencySpec {
    SyntheticSpec data;  // n is taken from n_grid
    std::vector<std::size_t> n_grid{10, 20, 40, 80};
    double lambda_c = 1.0;
    double lambda_exponent = 0.25;  // lambda_n = c n^{-exponent}; 0 keeps lambda fixed at c
    std::size_t seeds = 5;
    std::size_t test_pairs = 10000;
    double bayes_t_max = 20.0;      // Bayes proxy: per-pair minimum of L* over t in [-t_max, t_max]
    std::size_t bayes_t_steps = 401;
    TrainConfig train;
};

/// Rows: (seed, n, lambda, test shifted risk, standard error, running min, bayes proxy, bayes se).
[[nodiscard]] ExperimentReport consistency_experiment(const ConsistencySpec &spec, const PairKernel &k,
                                                      const PairwiseLoss &L, std::uint64_t seed);

struct ContinuitySpec {
    std::vector<double> delta_grid{0.4, 0.2, 0.1, 0.05, 0.025, 0.0125, 0.0};
    std::size_t index = 0;        // sample that is perturbed
    double outlier_shift = 1e6;   // |delta y| of the outlier check
    TrainConfig train;
};

/// Moves x_index by -delta sign(x_index) / sqrt(d) and y_index by delta, retrains and
/// records ||f' - f||_H. Rows: (delta, ||delta f||_H).
[[nodiscard]] ExperimentReport continuity_experiment(const WeightedDataset &data, const PairKernel &k,
                                                     const PairwiseLoss &L, const ContinuitySpec &spec);

/// 2 mean ||a - b|| - mean ||a - a'|| - mean ||b - b'|| over exact H-distances (all ordered pairs).
[[nodiscard]] double energy_distance_h(const std::vector<RplModel> &A, const std::vector<RplModel> &B);

struct QualRobustSpec {
    SyntheticSpec data;
    std::vector<double> delta_grid{0.5, 0.25, 0.125, 0.0};
    double outlier_x = 0.9;   // every coordinate of the contaminating input
    double outlier_y = 50.0;
    std::size_t reps = 20;
    std::size_t seeds = 5;
    TrainConfig train;
};

/// Estimator clouds under P^n and Q(delta)^n with Q(delta) = (1 - delta) P + delta point mass.
/// Rows: (seed, delta, energy distance, split-half noise floor).
[[nodiscard]] ExperimentReport qual_robustness_experiment(const QualRobustSpec &spec, const PairKernel &k,
                                                          const PairwiseLoss &L, std::uint64_t seed);

struct BootstrapSpec {
    SyntheticSpec data;
    std::vector<std::size_t> n_grid{15, 30, 60};
    std::size_t reps = 30;
    std::size_t base_samples = 4;  // independent samples D per n, each with its own bootstrap cloud
    std::size_t seeds = 5;
    TrainConfig train;
};

/// Resampling with replacement as a weighted dataset over the unique drawn samples.
[[nodiscard]] WeightedDataset bootstrap_resample(const WeightedDataset &data, std::uint64_t seed);

/// Bootstrap clouds of base_samples independent samples against one fresh-sample cloud;
/// the distance is averaged over the base samples.
/// Rows: (seed, n, mean energy distance, its standard error, split-half noise floor, max ||f||_H).
[[nodiscard]] ExperimentReport bootstrap_experiment(const BootstrapSpec &spec, const PairKernel &k,
                                                    const PairwiseLoss &L, std::uint64_t seed);

/// A trend holds when at least 3 of every 5 seeds show it (rounded up).
[[nodiscard]] constexpr std::size_t trend_quorum(std::size_t seeds) { return (3 * seeds + 4) / 5; }

}  // namespace pairlearn
