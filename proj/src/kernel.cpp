#include "pairlearn/kernel.hpp"

#include <cmath>
#include <sstream>

namespace pairlearn {

namespace {

double squared_distance(const InputPoint &a, const InputPoint &b) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return s;
}

double dot(const InputPoint &a, const InputPoint &b) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) { s += a[i] * b[i]; }
    return s;
}

void check_dims(const PairPoint &z, const PairPoint &zp) {
    const Eigen::Index d = z.first.size();
    if (d < 1 || z.second.size() != d || zp.first.size() != d || zp.second.size() != d) {
        throw InvalidInput("kernel: pair point dimension mismatch");
    }
}

}  // namespace

PairKernel::PairKernel(KernelKind kind, BaseKernel base, double gamma, double domain_bound)
    : kind_(kind), base_(base), gamma_(gamma), domain_bound_(domain_bound) {
    if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) { throw InvalidInput("kernel: gamma must be positive"); }
    if (!(domain_bound_ > 0.0) || !std::isfinite(domain_bound_)) {
        throw InvalidInput("kernel: domain bound must be positive");
    }
    switch (kind_) {
        case KernelKind::rbf_concat: sup_bound_ = 1.0; break;
        // k(z,z) = |x|^2 + |x'|^2 <= 2R^2
        case KernelKind::linear_concat: sup_bound_ = std::sqrt(2.0) * domain_bound_; break;
        case KernelKind::ranking_difference:
            // k(z,z) = g(x,x) - 2g(x,x') + g(x',x'): |x - x'|^2 <= 4R^2 for linear g, 2 - 2g <= 2 for rbf g
            sup_bound_ = base_ == BaseKernel::linear ? 2.0 * domain_bound_ : std::sqrt(2.0);
            break;
    }
}

PairKernel PairKernel::rbf_concat(double gamma) { return {KernelKind::rbf_concat, BaseKernel::rbf, gamma, 1.0}; }

PairKernel PairKernel::linear_concat(double domain_bound) {
    return {KernelKind::linear_concat, BaseKernel::linear, 1.0, domain_bound};
}

PairKernel PairKernel::ranking_difference(BaseKernel base, double base_gamma, double domain_bound) {
    return {KernelKind::ranking_difference, base, base_gamma, domain_bound};
}

KernelStructure PairKernel::structure() const {
    switch (kind_) {
        case KernelKind::rbf_concat: return KernelStructure::product;
        case KernelKind::linear_concat: return KernelStructure::sum;
        case KernelKind::ranking_difference: return KernelStructure::difference;
    }
    return KernelStructure::product;
}

bool PairKernel::needs_domain_bound() const {
    return kind_ == KernelKind::linear_concat ||
           (kind_ == KernelKind::ranking_difference && base_ == BaseKernel::linear);
}

double PairKernel::base_eval(const InputPoint &a, const InputPoint &b) const {
    if (base_ == BaseKernel::linear) { return dot(a, b); }
    return std::exp(-gamma_ * squared_distance(a, b));
}

Eigen::MatrixXd PairKernel::base_gram(const Eigen::MatrixXd &A, const Eigen::MatrixXd &B) const {
    if (A.cols() != B.cols()) { throw InvalidInput("kernel: dimension mismatch"); }
    if (base_ == BaseKernel::linear) { return A * B.transpose(); }
    Eigen::MatrixXd K(A.rows(), B.rows());
    for (Eigen::Index j = 0; j < B.rows(); ++j) {
        for (Eigen::Index i = 0; i < A.rows(); ++i) { K(i, j) = std::exp(-gamma_ * (A.row(i) - B.row(j)).squaredNorm()); }
    }
    return K;
}

std::string PairKernel::describe() const {
    std::ostringstream os;
    os << to_string(kind_);
    if (kind_ == KernelKind::ranking_difference) { os << "(" << to_string(base_) << ")"; }
    if (base_ == BaseKernel::rbf) { os << " gamma=" << gamma_; }
    if (needs_domain_bound()) { os << " R=" << domain_bound_; }
    return os.str();
}

double kernel_eval(const PairKernel &k, const PairPoint &z, const PairPoint &zp) {
    check_dims(z, zp);
    switch (k.kind()) {
        case KernelKind::rbf_concat:
            return std::exp(-k.gamma() * (squared_distance(z.first, zp.first) + squared_distance(z.second, zp.second)));
        case KernelKind::linear_concat: return dot(z.first, zp.first) + dot(z.second, zp.second);
        case KernelKind::ranking_difference: {
            // grouped so that swapping z and zp is bit-identical
            const double same = k.base_eval(z.first, zp.first) + k.base_eval(z.second, zp.second);
            const double cross = k.base_eval(z.first, zp.second) + k.base_eval(z.second, zp.first);
            return same - cross;
        }
    }
    return 0.0;
}

Eigen::MatrixXd gram(const PairKernel &k, const std::vector<PairPoint> &A, const std::vector<PairPoint> &B) {
    Eigen::MatrixXd G(static_cast<Eigen::Index>(A.size()), static_cast<Eigen::Index>(B.size()));
    for (std::size_t j = 0; j < B.size(); ++j) {
        for (std::size_t i = 0; i < A.size(); ++i) {
            G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = kernel_eval(k, A[i], B[j]);
        }
    }
    return G;
}

void check_domain(const PairKernel &k, const InputPoint &x) {
    if (!k.needs_domain_bound()) { return; }
    if (x.norm() > k.domain_bound() * (1.0 + 1e-12)) {
        throw InvalidInput("kernel: input point outside the declared domain bound R=" +
                           std::to_string(k.domain_bound()));
    }
}

void check_domain(const PairKernel &k, const WeightedDataset &data) {
    for (const auto &s : data.samples()) { check_domain(k, s.x); }
}

std::string to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::rbf_concat: return "rbf_concat";
        case KernelKind::linear_concat: return "linear_concat";
        case KernelKind::ranking_difference: return "ranking_difference";
    }
    return "?";
}

KernelKind kernel_kind_from_string(const std::string &s) {
    if (s == "rbf_concat") { return KernelKind::rbf_concat; }
    if (s == "linear_concat") { return KernelKind::linear_concat; }
    if (s == "ranking_difference") { return KernelKind::ranking_difference; }
    throw InvalidInput("unknown kernel kind '" + s + "'");
}

std::string to_string(BaseKernel base) { return base == BaseKernel::linear ? "linear" : "rbf"; }

BaseKernel base_kernel_from_string(const std::string &s) {
    if (s == "linear") { return BaseKernel::linear; }
    if (s == "rbf") { return BaseKernel::rbf; }
    throw InvalidInput("unknown base kernel '" + s + "'");
}

}  // namespace pairlearn
