#pragma once

#include "pairlearn/types.hpp"

#include <string>
#include <vector>

namespace pairlearn {

enum class KernelKind { rbf_concat, linear_concat, ranking_difference };
enum class BaseKernel { linear, rbf };

/// How a pair kernel is assembled from a kernel g on X:
///   product:    k((x,x'),(u,u')) = g(x,u) g(x',u')
///   sum:        k((x,x'),(u,u')) = g(x,u) + g(x',u')
///   difference: k((x,x'),(u,u')) = g(x,u) - g(x,u') - g(x',u) + g(x',u')
enum class KernelStructure { product, sum, difference };

/// Symmetric positive semi-definite kernel on X^2 x X^2 with a certified bound
/// on sup sqrt(k(z,z)).
///
/// rbf_concat is exp(-gamma * ||(x,x') - (u,u')||^2) and is bounded by one
/// everywhere. linear_concat and ranking_difference with a linear base are
/// unbounded on R^d, so their certificate assumes ||x||_2 <= domain_bound for
/// every input; see check_domain().
class PairKernel {
public:
    static PairKernel rbf_concat(double gamma);
    static PairKernel linear_concat(double domain_bound);
    static PairKernel ranking_difference(BaseKernel base, double base_gamma = 1.0, double domain_bound = 1.0);

    [[nodiscard]] KernelKind kind() const { return kind_; }
    [[nodiscard]] BaseKernel base() const { return base_; }
    [[nodiscard]] double gamma() const { return gamma_; }
    [[nodiscard]] double domain_bound() const { return domain_bound_; }
    [[nodiscard]] double sup_bound() const { return sup_bound_; }
    [[nodiscard]] KernelStructure structure() const;
    /// True when the certificate in sup_bound() depends on domain_bound().
    [[nodiscard]] bool needs_domain_bound() const;

    /// Kernel g on X from which the pair kernel is built (see KernelStructure).
    [[nodiscard]] double base_eval(const InputPoint &a, const InputPoint &b) const;
    /// Matrix of base_eval over the rows of A and B.
    [[nodiscard]] Eigen::MatrixXd base_gram(const Eigen::MatrixXd &A, const Eigen::MatrixXd &B) const;

    [[nodiscard]] std::string describe() const;

    friend bool operator==(const PairKernel &, const PairKernel &) = default;

private:
    PairKernel(KernelKind kind, BaseKernel base, double gamma, double domain_bound);

    KernelKind kind_ = KernelKind::rbf_concat;
    BaseKernel base_ = BaseKernel::rbf;
    double gamma_ = 1.0;
    double domain_bound_ = 1.0;
    double sup_bound_ = 1.0;
};

[[nodiscard]] double kernel_eval(const PairKernel &k, const PairPoint &z, const PairPoint &zp);

/// G[i][j] = kernel_eval(k, A[i], B[j]).
[[nodiscard]] Eigen::MatrixXd gram(const PairKernel &k, const std::vector<PairPoint> &A, const std::vector<PairPoint> &B);

/// Throws InvalidInput if a point lies outside the domain the sup bound is certified for.
void check_domain(const PairKernel &k, const WeightedDataset &data);
void check_domain(const PairKernel &k, const InputPoint &x);

[[nodiscard]] std::string to_string(KernelKind kind);
[[nodiscard]] KernelKind kernel_kind_from_string(const std::string &s);
[[nodiscard]] std::string to_string(BaseKernel base);
[[nodiscard]] BaseKernel base_kernel_from_string(const std::string &s);

}  // namespace pairlearn
