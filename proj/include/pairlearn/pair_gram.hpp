#pragma once

#include "pairlearn/kernel.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pairlearn {

enum class PairMode {
    v_statistic,  // all ordered pairs including i = j, weights w_i w_j (the product measure D x D)
    u_statistic   // i != j only, weights renormalized
};

/// Weighted set of ordered sample pairs over which a pairwise risk is taken.
struct PairDesign {
    std::size_t n = 0;                 // number of samples
    std::vector<std::size_t> first;    // sample index of x
    std::vector<std::size_t> second;   // sample index of x'
    Eigen::VectorXd weight;            // omega_p, sums to one
    bool full_grid = false;            // pair p = first + n * second for all n^2 pairs

    [[nodiscard]] std::size_t size() const { return first.size(); }
};

/// Largest sample count accepted by the pair solvers.
inline constexpr std::size_t kMaxSamples = 100;
/// Largest number of pairs accepted by the pair solvers.
inline constexpr std::size_t kMaxPairs = kMaxSamples * kMaxSamples;

/// Pairs of `data` in grid order. With `subsample`, keeps that many pairs drawn
/// uniformly without replacement among pairs of positive weight and renormalizes.
[[nodiscard]] PairDesign make_pair_design(const WeightedDataset &data, PairMode mode = PairMode::v_statistic,
                                          std::optional<std::size_t> subsample = std::nullopt,
                                          std::uint64_t seed = 0);

[[nodiscard]] std::vector<PairPoint> design_points(const WeightedDataset &data, const PairDesign &design);

/// Gram matrix of a pair kernel over the pair points of a design, as an operator.
///
/// Full-grid designs never form the n^2 x n^2 matrix: products use the kernel's
/// separable structure (e.g. K V K for the product kernel) at O(n^3).
class PairGram {
public:
    PairGram(const PairKernel &kernel, const WeightedDataset &data, const PairDesign &design);

    [[nodiscard]] Eigen::Index size() const { return size_; }
    [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd &v) const;
    [[nodiscard]] Eigen::VectorXd column(Eigen::Index p) const;
    [[nodiscard]] Eigen::VectorXd diagonal() const;
    [[nodiscard]] Eigen::MatrixXd dense() const;

private:
    [[nodiscard]] double entry(Eigen::Index p, Eigen::Index q) const;

    KernelStructure structure_;
    Eigen::MatrixXd base_;  // base kernel over the samples
    std::vector<std::size_t> first_;
    std::vector<std::size_t> second_;
    Eigen::Index n_ = 0;
    Eigen::Index size_ = 0;
    bool grid_ = false;
    std::optional<Eigen::MatrixXd> dense_;
};

/// Solves (2 lambda I + diag(d) G) u = rhs for d >= 0 through the symmetric system
/// (2 lambda I + S G S) with S = diag(sqrt(d)), whose spectrum is bounded below by 2 lambda.
/// Dense Cholesky for small systems, conjugate gradients otherwise.
[[nodiscard]] Eigen::VectorXd solve_shifted_system(const PairGram &G, const Eigen::VectorXd &d, double lambda,
                                                   const Eigen::VectorXd &rhs);

}  // namespace pairlearn
