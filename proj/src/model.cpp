#include "pairlearn/model.hpp"

#include <cmath>
#include <map>

namespace pairlearn {

namespace {

using Key = std::vector<double>;

Key key_of(const InputPoint &x) { return {x.data(), x.data() + x.size()}; }

struct PairKey {
    Key first;
    Key second;
    friend bool operator<(const PairKey &a, const PairKey &b) {
        return a.first != b.first ? a.first < b.first : a.second < b.second;
    }
};

/// Assigns consecutive indices to unique coordinates in first-seen order.
class Uniquifier {
public:
    Eigen::Index add(const InputPoint &x) {
        auto [it, inserted] = index_.try_emplace(key_of(x), static_cast<Eigen::Index>(points_.size()));
        if (inserted) { points_.push_back(x); }
        return it->second;
    }

    [[nodiscard]] Eigen::MatrixXd matrix(Eigen::Index dim) const {
        Eigen::MatrixXd M(static_cast<Eigen::Index>(points_.size()), dim);
        for (std::size_t i = 0; i < points_.size(); ++i) { M.row(static_cast<Eigen::Index>(i)) = points_[i].transpose(); }
        return M;
    }

private:
    std::map<Key, Eigen::Index> index_;
    std::vector<InputPoint> points_;
};

void check_query(const RplModel &f, Eigen::Index d) {
    if (d != f.dim()) { throw InvalidInput("model: query dimension mismatch"); }
}

}  // namespace

RplModel::RplModel(PairKernel kernel, double lambda, std::string loss_tag, Eigen::Index dim,
                   std::vector<PairPoint> expansion_points, Eigen::VectorXd coefficients)
    : kernel_(std::move(kernel)),
      lambda_(lambda),
      loss_tag_(std::move(loss_tag)),
      dim_(dim),
      points_(std::move(expansion_points)),
      coefficients_(std::move(coefficients)) {
    if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) { throw InvalidInput("model: lambda must be positive"); }
    if (dim_ < 1) { throw InvalidInput("model: dimension must be >= 1"); }
    if (static_cast<Eigen::Index>(points_.size()) != coefficients_.size()) {
        throw InvalidInput("model: expansion points and coefficients differ in length");
    }
    if (!coefficients_.allFinite()) { throw NumericError("model: non-finite coefficient"); }
    for (const auto &z : points_) {
        if (z.first.size() != dim_ || z.second.size() != dim_) { throw InvalidInput("model: expansion point dimension mismatch"); }
    }
}

RplModel RplModel::zero(PairKernel kernel, double lambda, std::string loss_tag, Eigen::Index dim) {
    return {std::move(kernel), lambda, std::move(loss_tag), dim, {}, Eigen::VectorXd()};
}

RplModel RplModel::with_coefficients(Eigen::VectorXd coefficients) const {
    return {kernel_, lambda_, loss_tag_, dim_, points_, std::move(coefficients)};
}

double evaluate(const RplModel &f, const InputPoint &x, const InputPoint &xp) {
    check_query(f, x.size());
    check_query(f, xp.size());
    const PairPoint q{x, xp};
    double s = 0.0;
    for (std::size_t p = 0; p < f.size(); ++p) {
        s += f.coefficients()[static_cast<Eigen::Index>(p)] * kernel_eval(f.kernel(), f.expansion_points()[p], q);
    }
    return s;
}

Eigen::MatrixXd evaluate_grid(const RplModel &f, const Eigen::MatrixXd &first, const Eigen::MatrixXd &second) {
    check_query(f, first.cols());
    check_query(f, second.cols());
    if (f.size() == 0) { return Eigen::MatrixXd::Zero(first.rows(), second.rows()); }
    return detail::factored_eval_grid(f.kernel(), detail::factor(f), first, second);
}

Eigen::VectorXd evaluate_pairs(const RplModel &f, const std::vector<PairPoint> &queries) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(queries.size()));
    if (f.size() == 0) {
        out.setZero();
        return out;
    }
    // a query's first and second coordinates each enter only through the base kernel,
    // so evaluate against the unique query coordinates and pick the entries we need
    Uniquifier qa;
    Uniquifier qb;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> idx;
    idx.reserve(queries.size());
    for (const auto &q : queries) {
        check_query(f, q.first.size());
        check_query(f, q.second.size());
        idx.emplace_back(qa.add(q.first), qb.add(q.second));
    }
    const auto fac = detail::factor(f);
    const Eigen::MatrixXd A = qa.matrix(f.dim());
    const Eigen::MatrixXd B = qb.matrix(f.dim());
    // guard against |unique firsts| x |unique seconds| blowing up for scattered queries
    constexpr Eigen::Index chunk = 256;
    if (A.rows() * B.rows() <= 4 * static_cast<Eigen::Index>(queries.size()) + chunk * chunk) {
        const Eigen::MatrixXd E = detail::factored_eval_grid(f.kernel(), fac, A, B);
        for (std::size_t i = 0; i < idx.size(); ++i) { out[static_cast<Eigen::Index>(i)] = E(idx[i].first, idx[i].second); }
        return out;
    }
    for (std::size_t i = 0; i < queries.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] =
            detail::factored_eval_grid(f.kernel(), fac, A.row(idx[i].first), B.row(idx[i].second))(0, 0);
    }
    return out;
}

void require_same_kernel(const RplModel &f, const RplModel &g) {
    if (!(f.kernel() == g.kernel())) {
        throw IncompatibleModels("models use different kernels: " + f.kernel().describe() + " vs " +
                                 g.kernel().describe());
    }
    if (f.dim() != g.dim()) { throw IncompatibleModels("models have different input dimensions"); }
}

double h_inner(const RplModel &f, const RplModel &g) {
    require_same_kernel(f, g);
    if (f.size() == 0 || g.size() == 0) { return 0.0; }
    return detail::factored_inner(f.kernel(), detail::factor(f), detail::factor(g));
}

double h_norm(const RplModel &f) { return std::sqrt(std::max(0.0, h_inner(f, f))); }

double h_distance(const RplModel &f, const RplModel &g) { return h_norm(compact(model_combine({f, g}, {1.0, -1.0}))); }

RplModel model_combine(const std::vector<RplModel> &models, const std::vector<double> &scalars) {
    if (models.empty()) { throw InvalidInput("model_combine: no models"); }
    if (models.size() != scalars.size()) { throw InvalidInput("model_combine: models and scalars differ in length"); }
    std::size_t total = 0;
    for (const auto &m : models) {
        require_same_kernel(models.front(), m);
        total += m.size();
    }
    std::vector<PairPoint> pts;
    pts.reserve(total);
    Eigen::VectorXd coef(static_cast<Eigen::Index>(total));
    Eigen::Index at = 0;
    for (std::size_t i = 0; i < models.size(); ++i) {
        const auto &m = models[i];
        pts.insert(pts.end(), m.expansion_points().begin(), m.expansion_points().end());
        coef.segment(at, static_cast<Eigen::Index>(m.size())) = scalars[i] * m.coefficients();
        at += static_cast<Eigen::Index>(m.size());
    }
    const auto &head = models.front();
    return {head.kernel(), head.lambda(), head.loss_tag(), head.dim(), std::move(pts), std::move(coef)};
}

RplModel compact(const RplModel &f) {
    std::map<PairKey, std::size_t> seen;
    std::vector<PairPoint> pts;
    std::vector<double> coef;
    for (std::size_t p = 0; p < f.size(); ++p) {
        const auto &z = f.expansion_points()[p];
        auto [it, inserted] = seen.try_emplace(PairKey{key_of(z.first), key_of(z.second)}, pts.size());
        if (inserted) {
            pts.push_back(z);
            coef.push_back(f.coefficients()[static_cast<Eigen::Index>(p)]);
        } else {
            coef[it->second] += f.coefficients()[static_cast<Eigen::Index>(p)];
        }
    }
    return {f.kernel(), f.lambda(), f.loss_tag(), f.dim(), std::move(pts),
            Eigen::Map<const Eigen::VectorXd>(coef.data(), static_cast<Eigen::Index>(coef.size()))};
}

double sup_probe(const RplModel &f, const Eigen::MatrixXd &probe) {
    if (probe.rows() == 0) { return 0.0; }
    return evaluate_grid(f, probe, probe).cwiseAbs().maxCoeff();
}

namespace detail {

Factored factor(const RplModel &f) {
    Uniquifier u1;
    Uniquifier u2;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> idx;
    idx.reserve(f.size());
    for (const auto &z : f.expansion_points()) { idx.emplace_back(u1.add(z.first), u2.add(z.second)); }
    Factored out{u1.matrix(f.dim()), u2.matrix(f.dim()), {}};
    out.C = Eigen::MatrixXd::Zero(out.U1.rows(), out.U2.rows());
    for (std::size_t p = 0; p < idx.size(); ++p) {
        out.C(idx[p].first, idx[p].second) += f.coefficients()[static_cast<Eigen::Index>(p)];
    }
    return out;
}

double factored_inner(const PairKernel &k, const Factored &a, const Factored &b) {
    switch (k.structure()) {
        case KernelStructure::product: {
            const Eigen::MatrixXd g1 = k.base_gram(a.U1, b.U1);
            const Eigen::MatrixXd g2 = k.base_gram(a.U2, b.U2);
            return (a.C.cwiseProduct(g1 * b.C * g2.transpose())).sum();
        }
        case KernelStructure::sum: {
            const Eigen::VectorXd ra = a.C.rowwise().sum(), ca = a.C.colwise().sum().transpose();
            const Eigen::VectorXd rb = b.C.rowwise().sum(), cb = b.C.colwise().sum().transpose();
            return ra.dot(k.base_gram(a.U1, b.U1) * rb) + ca.dot(k.base_gram(a.U2, b.U2) * cb);
        }
        case KernelStructure::difference: {
            const Eigen::VectorXd ra = a.C.rowwise().sum(), ca = a.C.colwise().sum().transpose();
            const Eigen::VectorXd rb = b.C.rowwise().sum(), cb = b.C.colwise().sum().transpose();
            return ra.dot(k.base_gram(a.U1, b.U1) * rb) - ra.dot(k.base_gram(a.U1, b.U2) * cb) -
                   ca.dot(k.base_gram(a.U2, b.U1) * rb) + ca.dot(k.base_gram(a.U2, b.U2) * cb);
        }
    }
    return 0.0;
}

Eigen::MatrixXd factored_eval_grid(const PairKernel &k, const Factored &f, const Eigen::MatrixXd &first,
                                   const Eigen::MatrixXd &second) {
    switch (k.structure()) {
        case KernelStructure::product:
            return k.base_gram(first, f.U1) * f.C * k.base_gram(second, f.U2).transpose();
        case KernelStructure::sum: {
            const Eigen::VectorXd r = f.C.rowwise().sum(), c = f.C.colwise().sum().transpose();
            const Eigen::VectorXd u = k.base_gram(first, f.U1) * r;
            const Eigen::VectorXd v = k.base_gram(second, f.U2) * c;
            return u.replicate(1, second.rows()) + v.transpose().replicate(first.rows(), 1);
        }
        case KernelStructure::difference: {
            const Eigen::VectorXd r = f.C.rowwise().sum(), c = f.C.colwise().sum().transpose();
            // f(x, x') = phi(x) - phi(x') with phi(q) = g(q, U1) r - g(q, U2) c
            const Eigen::VectorXd u = k.base_gram(first, f.U1) * r - k.base_gram(first, f.U2) * c;
            const Eigen::VectorXd v = k.base_gram(second, f.U1) * r - k.base_gram(second, f.U2) * c;
            return u.replicate(1, second.rows()) - v.transpose().replicate(first.rows(), 1);
        }
    }
    return {};
}

}  // namespace detail

}  // namespace pairlearn
