#include "pairlearn/pair_gram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace pairlearn {

namespace {

// Above this many pairs the Newton-type systems are solved by conjugate gradients.
constexpr Eigen::Index kDenseSolveLimit = 1024;

}  // namespace

PairDesign make_pair_design(const WeightedDataset &data, PairMode mode, std::optional<std::size_t> subsample,
                            std::uint64_t seed) {
    const std::size_t n = data.size();
    if (n == 0) { throw InvalidInput("pair design: empty dataset"); }
    if (n > kMaxSamples) {
        throw InvalidInput("pair design: n = " + std::to_string(n) + " exceeds the cap of " +
                           std::to_string(kMaxSamples) + " samples (pair Gram is O(n^4))");
    }
    const Eigen::VectorXd w = data.w_vector();
    PairDesign d;
    d.n = n;
    d.full_grid = true;
    d.first.resize(n * n);
    d.second.resize(n * n);
    d.weight.resize(static_cast<Eigen::Index>(n * n));
    const double off_diagonal_mass = 1.0 - w.squaredNorm();
    if (mode == PairMode::u_statistic && !(off_diagonal_mass > 0.0)) {
        throw InvalidInput("pair design: U-statistic needs at least two samples of positive weight");
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t p = i + n * j;
            d.first[p] = i;
            d.second[p] = j;
            double omega = w[static_cast<Eigen::Index>(i)] * w[static_cast<Eigen::Index>(j)];
            if (mode == PairMode::u_statistic) { omega = i == j ? 0.0 : omega / off_diagonal_mass; }
            d.weight[static_cast<Eigen::Index>(p)] = omega;
        }
    }
    if (!subsample) { return d; }

    std::vector<std::size_t> candidates;
    for (std::size_t p = 0; p < d.size(); ++p) {
        if (d.weight[static_cast<Eigen::Index>(p)] > 0.0) { candidates.push_back(p); }
    }
    if (*subsample == 0) { throw InvalidInput("pair design: subsample size must be positive"); }
    if (*subsample >= candidates.size()) { return d; }
    std::mt19937_64 rng(seed);
    // partial Fisher-Yates, then restore grid order for determinism of downstream sums
    for (std::size_t k = 0; k < *subsample; ++k) {
        const std::size_t span = candidates.size() - k;
        const std::size_t pick = k + static_cast<std::size_t>(rng() % span);
        std::swap(candidates[k], candidates[pick]);
    }
    candidates.resize(*subsample);
    std::sort(candidates.begin(), candidates.end());
    PairDesign s;
    s.n = n;
    s.full_grid = false;
    s.weight.resize(static_cast<Eigen::Index>(candidates.size()));
    double total = 0.0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        s.first.push_back(d.first[candidates[k]]);
        s.second.push_back(d.second[candidates[k]]);
        s.weight[static_cast<Eigen::Index>(k)] = d.weight[static_cast<Eigen::Index>(candidates[k])];
        total += s.weight[static_cast<Eigen::Index>(k)];
    }
    s.weight /= total;
    return s;
}

std::vector<PairPoint> design_points(const WeightedDataset &data, const PairDesign &design) {
    std::vector<PairPoint> pts;
    pts.reserve(design.size());
    for (std::size_t p = 0; p < design.size(); ++p) { pts.push_back({data[design.first[p]].x, data[design.second[p]].x}); }
    return pts;
}

PairGram::PairGram(const PairKernel &kernel, const WeightedDataset &data, const PairDesign &design)
    : structure_(kernel.structure()),
      first_(design.first),
      second_(design.second),
      n_(static_cast<Eigen::Index>(design.n)),
      size_(static_cast<Eigen::Index>(design.size())),
      grid_(design.full_grid) {
    if (design.n != data.size()) { throw InvalidInput("pair gram: design does not match dataset"); }
    const Eigen::MatrixXd X = data.x_matrix();
    base_ = kernel.base_gram(X, X);
    if (!grid_ || size_ <= kDenseSolveLimit) {
        Eigen::MatrixXd G(size_, size_);
        for (Eigen::Index q = 0; q < size_; ++q) {
            for (Eigen::Index p = q; p < size_; ++p) {
                G(p, q) = entry(p, q);
                G(q, p) = G(p, q);
            }
        }
        dense_ = std::move(G);
    }
}

double PairGram::entry(Eigen::Index p, Eigen::Index q) const {
    const auto i = static_cast<Eigen::Index>(first_[static_cast<std::size_t>(p)]);
    const auto j = static_cast<Eigen::Index>(second_[static_cast<std::size_t>(p)]);
    const auto a = static_cast<Eigen::Index>(first_[static_cast<std::size_t>(q)]);
    const auto b = static_cast<Eigen::Index>(second_[static_cast<std::size_t>(q)]);
    switch (structure_) {
        case KernelStructure::product: return base_(i, a) * base_(j, b);
        case KernelStructure::sum: return base_(i, a) + base_(j, b);
        case KernelStructure::difference: return (base_(i, a) + base_(j, b)) - (base_(i, b) + base_(j, a));
    }
    return 0.0;
}

Eigen::VectorXd PairGram::apply(const Eigen::VectorXd &v) const {
    if (v.size() != size_) { throw InvalidInput("pair gram: vector size mismatch"); }
    if (dense_) { return (*dense_) * v; }
    // grid order: pair (i, j) sits at i + n j, so v viewed column-major is V(i, j)
    const Eigen::Map<const Eigen::MatrixXd> V(v.data(), n_, n_);
    Eigen::VectorXd out(size_);
    Eigen::Map<Eigen::MatrixXd> W(out.data(), n_, n_);
    switch (structure_) {
        case KernelStructure::product: W.noalias() = base_ * V * base_; break;
        case KernelStructure::sum: {
            const Eigen::VectorXd u = base_ * V.rowwise().sum();
            const Eigen::VectorXd c = base_ * V.colwise().sum().transpose();
            W = u.replicate(1, n_) + c.transpose().replicate(n_, 1);
            break;
        }
        case KernelStructure::difference: {
            const Eigen::VectorXd phi = base_ * (V.rowwise().sum() - V.colwise().sum().transpose());
            W = phi.replicate(1, n_) - phi.transpose().replicate(n_, 1);
            break;
        }
    }
    return out;
}

Eigen::VectorXd PairGram::column(Eigen::Index q) const {
    if (dense_) { return dense_->col(q); }
    Eigen::VectorXd c(size_);
    for (Eigen::Index p = 0; p < size_; ++p) { c[p] = entry(p, q); }
    return c;
}

Eigen::VectorXd PairGram::diagonal() const {
    Eigen::VectorXd d(size_);
    for (Eigen::Index p = 0; p < size_; ++p) { d[p] = entry(p, p); }
    return d;
}

Eigen::MatrixXd PairGram::dense() const {
    if (dense_) { return *dense_; }
    Eigen::MatrixXd G(size_, size_);
    for (Eigen::Index q = 0; q < size_; ++q) {
        for (Eigen::Index p = 0; p < size_; ++p) { G(p, q) = entry(p, q); }
    }
    return G;
}

Eigen::VectorXd solve_shifted_system(const PairGram &G, const Eigen::VectorXd &d, double lambda,
                                     const Eigen::VectorXd &rhs) {
    const Eigen::Index N = G.size();
    if (d.size() != N || rhs.size() != N) { throw InvalidInput("shifted system: size mismatch"); }
    if ((d.array() < 0.0).any()) { throw NumericError("shifted system: negative curvature weight"); }
    const double two_lambda = 2.0 * lambda;
    const Eigen::VectorXd s = d.cwiseSqrt();
    // (2 lambda I + D G)^{-1} rhs = (rhs - S B^{-1} S G rhs) / (2 lambda),  B = 2 lambda I + S G S
    const Eigen::VectorXd b = s.cwiseProduct(G.apply(rhs));
    Eigen::VectorXd y;
    if (N <= kDenseSolveLimit) {
        Eigen::MatrixXd B = s.asDiagonal() * G.dense() * s.asDiagonal();
        B.diagonal().array() += two_lambda;
        Eigen::LLT<Eigen::MatrixXd> llt(B);
        if (llt.info() != Eigen::Success) {
            B.diagonal().array() += 1e-12 * B.trace() / static_cast<double>(N);
            llt.compute(B);
            if (llt.info() != Eigen::Success) { throw NumericError("shifted system: factorization failed"); }
        }
        y = llt.solve(b);
    } else {
        const auto op = [&](const Eigen::VectorXd &v) -> Eigen::VectorXd {
            return two_lambda * v + s.cwiseProduct(G.apply(s.cwiseProduct(v)));
        };
        y = Eigen::VectorXd::Zero(N);
        Eigen::VectorXd r = b;
        Eigen::VectorXd p = r;
        double rr = r.squaredNorm();
        const double stop = 1e-28 * std::max(b.squaredNorm(), 1e-300);
        const Eigen::Index max_iter = std::min<Eigen::Index>(N, 2000);
        for (Eigen::Index it = 0; it < max_iter && rr > stop; ++it) {
            const Eigen::VectorXd Bp = op(p);
            const double step = rr / p.dot(Bp);
            y += step * p;
            r -= step * Bp;
            const double rr_next = r.squaredNorm();
            p = r + (rr_next / rr) * p;
            rr = rr_next;
        }
    }
    return (rhs - s.cwiseProduct(y)) / two_lambda;
}

}  // namespace pairlearn
