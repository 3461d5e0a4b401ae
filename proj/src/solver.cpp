#include "pairlearn/solver.hpp"

#include "pairlearn/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pairlearn {

namespace {

/// Responses of the two samples behind every pair of a design.
struct PairResponses {
    Eigen::VectorXd y1;
    Eigen::VectorXd y2;
};

PairResponses responses(const WeightedDataset &data, const PairDesign &design) {
    PairResponses r{Eigen::VectorXd(static_cast<Eigen::Index>(design.size())),
                    Eigen::VectorXd(static_cast<Eigen::Index>(design.size()))};
    for (std::size_t p = 0; p < design.size(); ++p) {
        r.y1[static_cast<Eigen::Index>(p)] = data[design.first[p]].y;
        r.y2[static_cast<Eigen::Index>(p)] = data[design.second[p]].y;
    }
    return r;
}

/// f at every pair of the design.
Eigen::VectorXd values_on_design(const RplModel &f, const WeightedDataset &data, const PairDesign &design) {
    if (f.dim() != data.dim()) { throw InvalidInput("model and dataset dimensions differ"); }
    const Eigen::MatrixXd X = data.x_matrix();
    const Eigen::MatrixXd E = evaluate_grid(f, X, X);
    Eigen::VectorXd F(static_cast<Eigen::Index>(design.size()));
    for (std::size_t p = 0; p < design.size(); ++p) {
        F[static_cast<Eigen::Index>(p)] =
            E(static_cast<Eigen::Index>(design.first[p]), static_cast<Eigen::Index>(design.second[p]));
    }
    return F;
}

/// sum_p omega_p L*(F_p), each term checked for overflow.
double shifted_sum(const PairwiseLoss &L, const PairResponses &y, const Eigen::VectorXd &omega,
                   const Eigen::VectorXd &F) {
    double s = 0.0;
    for (Eigen::Index p = 0; p < F.size(); ++p) {
        if (omega[p] == 0.0) { continue; }
        const double v = L.value(y.y1[p], y.y2[p], F[p]) - L.value(y.y1[p], y.y2[p], 0.0);
        if (!std::isfinite(v)) {
            throw NumericOverflow("loss value overflow at pair " + std::to_string(p), static_cast<std::size_t>(p));
        }
        s += omega[p] * v;
    }
    return s;
}

RplModel pair_model(const PairKernel &k, double lambda, const std::string &tag, const WeightedDataset &data,
                    const PairDesign &design, Eigen::VectorXd coefficients) {
    return {k, lambda, tag, data.dim(), design_points(data, design), std::move(coefficients)};
}

void validate_problem(const WeightedDataset &data, const PairKernel &k, double lambda) {
    if (data.empty()) { throw InvalidInput("training: empty dataset"); }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) { throw InvalidInput("training: lambda must be positive"); }
    check_domain(k, data);
}

double h_norm_sq(const PairGram &G, const Eigen::VectorXd &v) { return std::max(0.0, v.dot(G.apply(v))); }

}  // namespace

void TrainConfig::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) { throw InvalidInput("train config: lambda must be > 0"); }
    if (!(grad_tol > 0.0)) { throw InvalidInput("train config: grad_tol must be > 0"); }
    if (!(gap_tol > 0.0)) { throw InvalidInput("train config: gap_tol must be > 0"); }
    if (max_iters == 0 || max_sweeps == 0) { throw InvalidInput("train config: iteration limits must be positive"); }
}

double empirical_risk(const RplModel &f, const WeightedDataset &data, const PairwiseLoss &L, bool shifted) {
    return empirical_risk(f, data, make_pair_design(data), L, shifted);
}

double empirical_risk(const RplModel &f, const WeightedDataset &data, const PairDesign &design,
                      const PairwiseLoss &L, bool shifted) {
    const auto y = responses(data, design);
    const Eigen::VectorXd F = values_on_design(f, data, design);
    if (shifted) { return shifted_sum(L, y, design.weight, F); }
    double s = 0.0;
    for (Eigen::Index p = 0; p < F.size(); ++p) {
        if (design.weight[p] == 0.0) { continue; }
        const double v = L.value(y.y1[p], y.y2[p], F[p]);
        if (!std::isfinite(v)) {
            throw NumericOverflow("loss value overflow at pair " + std::to_string(p), static_cast<std::size_t>(p));
        }
        s += design.weight[p] * v;
    }
    return s;
}

RiskReport risk_report(const RplModel &f, const WeightedDataset &data, const PairwiseLoss &L, double lambda) {
    const auto design = make_pair_design(data);
    RiskReport r;
    r.shifted_risk = empirical_risk(f, data, design, L, true);
    r.h_norm = h_norm(f);
    r.regularized_risk = r.shifted_risk + lambda * r.h_norm * r.h_norm;
    r.unshifted_risk_at_zero =
        empirical_risk(RplModel::zero(f.kernel(), f.lambda(), f.loss_tag(), f.dim()), data, design, L, false);
    return r;
}

RplModel risk_gradient(const RplModel &f, const WeightedDataset &data, const PairwiseLoss &L, double lambda) {
    return risk_gradient(f, data, make_pair_design(data), L, lambda);
}

RplModel risk_gradient(const RplModel &f, const WeightedDataset &data, const PairDesign &design,
                       const PairwiseLoss &L, double lambda) {
    const auto y = responses(data, design);
    const Eigen::VectorXd F = values_on_design(f, data, design);
    Eigen::VectorXd coef(F.size());
    for (Eigen::Index p = 0; p < F.size(); ++p) { coef[p] = design.weight[p] * L.first(y.y1[p], y.y2[p], F[p]); }
    const RplModel loss_part = pair_model(f.kernel(), f.lambda(), f.loss_tag(), data, design, std::move(coef));
    return compact(model_combine({f, loss_part}, {2.0 * lambda, 1.0}));
}

TrainResult train_ls_closed_form(const WeightedDataset &data, const PairKernel &k, double lambda, PairMode mode) {
    validate_problem(data, k, lambda);
    auto design = make_pair_design(data, mode);
    const auto y = responses(data, design);
    const PairGram G(k, data, design);
    const Eigen::Index N = G.size();
    // stationarity omega (G alpha - dy) + lambda alpha = 0, symmetrized with S = sqrt(omega):
    // (lambda I + S G S) u = S dy, alpha = S u
    const Eigen::VectorXd s = design.weight.cwiseSqrt();
    const Eigen::VectorXd dy = y.y1 - y.y2;
    Eigen::MatrixXd A = s.asDiagonal() * G.dense() * s.asDiagonal();
    A.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
        A.diagonal().array() += 1e-12 * A.trace() / static_cast<double>(N);
        llt.compute(A);
        if (llt.info() != Eigen::Success) { throw NumericError("ls closed form: singular system after jitter"); }
    }
    const Eigen::VectorXd alpha = s.cwiseProduct(llt.solve(s.cwiseProduct(dy)));
    const Eigen::VectorXd r = 2.0 * lambda * alpha - 2.0 * design.weight.cwiseProduct(dy - G.apply(alpha));
    const double residual = std::sqrt(h_norm_sq(G, r));
    auto model = pair_model(k, lambda, PairwiseLoss::ls_rank().tag(), data, design, alpha);
    return {std::move(model), std::move(design), 1, residual};
}

TrainResult train_convex(const WeightedDataset &data, const PairKernel &k, const PairwiseLoss &L,
                         const TrainConfig &cfg) {
    cfg.validate();
    validate_problem(data, k, cfg.lambda);
    if (!L.metadata().convex || !L.metadata().differentiable) {
        throw UnsupportedOperation("train_convex needs a convex differentiable loss, got " + L.tag());
    }
    auto design = make_pair_design(data, cfg.pair_mode, cfg.pair_subsample, cfg.seed);
    const auto y = responses(data, design);
    const Eigen::VectorXd &omega = design.weight;
    const PairGram G(k, data, design);
    const Eigen::Index N = G.size();
    const double lambda = cfg.lambda;

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(N);
    if (cfg.initial_coefficients) {
        if (cfg.initial_coefficients->size() != N) { throw InvalidInput("train: warm start has wrong length"); }
        alpha = *cfg.initial_coefficients;
    }
    Eigen::VectorXd F = G.apply(alpha);
    auto objective = [&](const Eigen::VectorXd &a, const Eigen::VectorXd &f) {
        return shifted_sum(L, y, omega, f) + lambda * a.dot(f);
    };
    auto gradient_coefficients = [&](const Eigen::VectorXd &a, const Eigen::VectorXd &f) {
        Eigen::VectorXd r(N);
        for (Eigen::Index p = 0; p < N; ++p) { r[p] = omega[p] * L.first(y.y1[p], y.y2[p], f[p]) + 2.0 * lambda * a[p]; }
        return r;
    };

    double J = objective(alpha, F);
    double gnorm = kInfinity;
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        const Eigen::VectorXd r = gradient_coefficients(alpha, F);
        const Eigen::VectorXd Gr = G.apply(r);
        gnorm = std::sqrt(std::max(0.0, r.dot(Gr)));
        if (gnorm <= cfg.grad_tol) {
            auto model = pair_model(k, lambda, L.tag(), data, design, alpha);
            return {std::move(model), std::move(design), it, gnorm};
        }
        Eigen::VectorXd curvature(N);
        for (Eigen::Index p = 0; p < N; ++p) { curvature[p] = omega[p] * L.second(y.y1[p], y.y2[p], F[p]); }

        Eigen::VectorXd step = -solve_shifted_system(G, curvature, lambda, r);
        Eigen::VectorXd Gstep = G.apply(step);
        double slope = Gr.dot(step);
        if (!(slope < 0.0)) {
            step = -r;
            Gstep = -Gr;
            slope = -gnorm * gnorm;
        }

        // Armijo backtracking; once the predicted decrease is at rounding level the
        // objective cannot discriminate, so a step is kept if it shrinks the gradient
        const bool rounding_regime = -slope <= 1e-13 * (1.0 + std::abs(J));
        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
            const Eigen::VectorXd a_new = alpha + t * step;
            const Eigen::VectorXd F_new = F + t * Gstep;
            double J_new = kInfinity;
            try {
                J_new = objective(a_new, F_new);
            } catch (const NumericOverflow &) {
                continue;
            }
            bool ok = J_new <= J + 1e-4 * t * slope;
            if (!ok && rounding_regime) {
                const Eigen::VectorXd r_new = gradient_coefficients(a_new, F_new);
                ok = std::sqrt(h_norm_sq(G, r_new)) < gnorm;
            }
            if (ok) {
                alpha = a_new;
                F = G.apply(alpha);
                J = objective(alpha, F);
                accepted = true;
                break;
            }
        }
        if (!accepted) { throw ConvergenceError("train_convex: line search failed", gnorm); }
    }
    throw ConvergenceError("train_convex: no convergence within " + std::to_string(cfg.max_iters) +
                               " iterations (gradient norm " + std::to_string(gnorm) + ")",
                           gnorm);
}

TrainResult train_hinge(const WeightedDataset &data, const PairKernel &k, const PairwiseLoss &L,
                        const TrainConfig &cfg) {
    cfg.validate();
    validate_problem(data, k, cfg.lambda);
    if (L.kind() == LossKind::ls_rank || L.phi() != Phi::hinge) {
        throw UnsupportedOperation("train_hinge needs a hinge phi loss, got " + L.tag());
    }
    auto design = make_pair_design(data, cfg.pair_mode, cfg.pair_subsample, cfg.seed);
    const auto y = responses(data, design);
    const Eigen::VectorXd &omega = design.weight;
    const PairGram G(k, data, design);
    const Eigen::Index N = G.size();
    const double two_lambda = 2.0 * cfg.lambda;

    Eigen::VectorXd s(N);
    for (Eigen::Index p = 0; p < N; ++p) { s[p] = L.margin_scale(y.y1[p], y.y2[p]); }
    const Eigen::VectorXd gdiag = G.diagonal();
    // alpha_p = -omega_p s_p beta_p / (2 lambda)
    const Eigen::VectorXd coupling = -omega.cwiseProduct(s) / two_lambda;

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(N);
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(N);
    Eigen::VectorXd F = Eigen::VectorXd::Zero(N);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(N));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng rng(cfg.seed);

    auto duality_gap = [&]() {
        double gap = two_lambda * alpha.dot(F);
        for (Eigen::Index p = 0; p < N; ++p) { gap += omega[p] * (std::max(0.0, 1.0 + s[p] * F[p]) - beta[p]); }
        return gap;
    };

    double gap = kInfinity;
    for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[static_cast<std::size_t>(rng.index(i))]);
        }
        for (const Eigen::Index p : order) {
            if (omega[p] == 0.0) { continue; }
            const double grad = omega[p] * (1.0 + s[p] * F[p]);
            const double curv = coupling[p] * coupling[p] * gdiag[p] * two_lambda;
            double next = beta[p];
            if (curv > 1e-300) {
                next = std::clamp(beta[p] + grad / curv, 0.0, 1.0);
            } else if (grad != 0.0) {
                next = grad > 0.0 ? 1.0 : 0.0;
            }
            const double delta = next - beta[p];
            if (delta == 0.0) { continue; }
            beta[p] = next;
            const double dalpha = coupling[p] * delta;
            if (dalpha == 0.0) { continue; }
            alpha[p] += dalpha;
            F += dalpha * G.column(p);
        }
        F = G.apply(alpha);  // drop accumulated update error
        gap = duality_gap();
        if (gap <= cfg.gap_tol) {
            auto model = pair_model(k, cfg.lambda, L.tag(), data, design, alpha);
            return {std::move(model), std::move(design), sweep + 1, std::max(gap, 0.0)};
        }
    }
    throw ConvergenceError("train_hinge: duality gap " + std::to_string(gap) + " after " +
                               std::to_string(cfg.max_sweeps) + " sweeps",
                           gap);
}

TrainResult train(const WeightedDataset &data, const PairKernel &k, const PairwiseLoss &L, const TrainConfig &cfg) {
    if (L.kind() != LossKind::ls_rank && L.phi() == Phi::hinge) { return train_hinge(data, k, L, cfg); }
    return train_convex(data, k, L, cfg);
}

RepresenterReport representer_residual(const RplModel &f, const WeightedDataset &data, const PairwiseLoss &L,
                                       double lambda) {
    return representer_residual(f, data, make_pair_design(data), L, lambda);
}

RepresenterReport representer_residual(const RplModel &f, const WeightedDataset &data, const PairDesign &design,
                                       const PairwiseLoss &L, double lambda) {
    if (!L.metadata().differentiable) {
        throw UnsupportedOperation("representer residual needs a differentiable loss, got " + L.tag());
    }
    const auto y = responses(data, design);
    const Eigen::VectorXd F = values_on_design(f, data, design);
    Eigen::VectorXd coef(F.size());
    RepresenterReport rep;
    for (Eigen::Index p = 0; p < F.size(); ++p) {
        const double h = L.first(y.y1[p], y.y2[p], F[p]);
        rep.h_sup = std::max(rep.h_sup, std::abs(h));
        coef[p] = -design.weight[p] * h / (2.0 * lambda);
    }
    const RplModel candidate = pair_model(f.kernel(), f.lambda(), f.loss_tag(), data, design, std::move(coef));
    rep.residual_norm = h_distance(f, candidate);
    return rep;
}

bool NormBoundReport::all_satisfied() const {
    return std::all_of(checks.begin(), checks.end(), [](const BoundCheck &c) { return c.satisfied; });
}

const BoundCheck &NormBoundReport::at(const std::string &name) const {
    for (const auto &c : checks) {
        if (c.name == name) { return c; }
    }
    throw InvalidInput("no bound check named '" + name + "'");
}

Eigen::MatrixXd probe_points(const PairKernel &k, const WeightedDataset &data, std::size_t extra,
                             std::uint64_t seed) {
    const Eigen::MatrixXd X = data.x_matrix();
    const Eigen::Index d = X.cols();
    const Eigen::RowVectorXd lo = X.colwise().minCoeff().array() - 0.5;
    const Eigen::RowVectorXd hi = X.colwise().maxCoeff().array() + 0.5;
    Eigen::MatrixXd P(X.rows() + static_cast<Eigen::Index>(extra), d);
    P.topRows(X.rows()) = X;
    Rng rng(seed);
    for (Eigen::Index i = X.rows(); i < P.rows(); ++i) {
        for (Eigen::Index c = 0; c < d; ++c) { P(i, c) = rng.uniform(lo[c], hi[c]); }
        if (k.needs_domain_bound()) {
            const double nrm = P.row(i).norm();
            if (nrm > k.domain_bound()) { P.row(i) *= k.domain_bound() / nrm; }
        }
    }
    return P;
}

NormBoundReport check_norm_bounds(const RplModel &f, const WeightedDataset &data, const PairwiseLoss &L,
                                  double lambda, const Eigen::MatrixXd &probe) {
    return check_norm_bounds(f, data, make_pair_design(data), L, lambda, probe);
}

NormBoundReport check_norm_bounds(const RplModel &f, const WeightedDataset &data, const PairDesign &design,
                                  const PairwiseLoss &L, double lambda, const Eigen::MatrixXd &probe) {
    if (!L.is_lipschitz()) {
        throw UnsupportedOperation("loss " + L.tag() + " is not Lipschitz: the norm bounds are inapplicable");
    }
    const double lip = L.metadata().lip1;
    const double ksup = f.kernel().sup_bound();
    const double shifted = empirical_risk(f, data, design, L, true);
    const double at_zero =
        empirical_risk(RplModel::zero(f.kernel(), f.lambda(), f.loss_tag(), f.dim()), data, design, L, false);
    const double norm = h_norm(f);
    const double sup = sup_probe(f, probe.rows() > 0 ? probe : probe_points(f.kernel(), data));
    const double reg = shifted + lambda * norm * norm;

    NormBoundReport rep;
    auto add = [&](std::string name, double lhs, double rhs) {
        rep.checks.push_back({std::move(name), lhs, rhs, lhs <= rhs + kBoundSlack});
    };
    add("lambda_norm_sq_le_neg_shifted_risk", lambda * norm * norm, -shifted);
    add("neg_shifted_risk_le_risk_at_zero", -shifted, at_zero);
    add("zero_le_neg_regularized_risk", 0.0, -reg);
    add("neg_regularized_risk_le_risk_at_zero", -reg, at_zero);
    add("sup_norm_le_kernel_times_h_norm", sup, ksup * norm);
    add("sup_norm_le_lip_ksq_over_lambda", sup, lip * ksup * ksup / lambda);
    add("abs_shifted_risk_le_lipsq_ksq_over_lambda", std::abs(shifted), lip * lip * ksup * ksup / lambda);
    return rep;
}

bool norm_bounds_hold(const TrainResult &result, const WeightedDataset &data, const PairwiseLoss &L,
                      double lambda) {
    if (!L.is_lipschitz()) { return true; }
    return check_norm_bounds(result.model, data, result.design, L, lambda).all_satisfied();
}

}  // namespace pairlearn
