#include "pairlearn/robustness.hpp"

#include "pairlearn/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace pairlearn {

namespace {

// FD validation only makes sense when solver error is far below the O(eps) remainder.
constexpr double kFdGradTol = 1e-12;

void require_influence_loss(const PairwiseLoss &L) {
    const auto &m = L.metadata();
    if (!m.twice_differentiable) {
        throw UnsupportedOperation("loss " + L.tag() + " is not twice differentiable: influence function undefined");
    }
    if (!(m.c_l1 < kInfinity) || !(m.c_l2 < kInfinity)) {
        throw UnsupportedOperation("loss " + L.tag() + " has unbounded first or second derivative: influence "
                                   "function needs finite c_L1 and c_L2");
    }
}

struct Audited {
    RplModel model;
    bool bounds_ok = true;
};

Audited train_audited(const WeightedDataset &data, const PairKernel &k, const PairwiseLoss &L,
                      const TrainConfig &cfg) {
    TrainResult r = train(data, k, L, cfg);
    const bool ok = norm_bounds_hold(r, data, L, cfg.lambda);
    return {std::move(r.model), ok};
}

void require_full_design(const TrainConfig &cfg) {
    if (cfg.pair_subsample || cfg.pair_mode != PairMode::v_statistic) {
        throw InvalidInput("influence function needs the full V-statistic pair design");
    }
}

bool same_point(const InputPoint &a, const InputPoint &b) {
    return a.size() == b.size() && std::equal(a.data(), a.data() + a.size(), b.data());
}

Eigen::VectorXd vectorize(const Eigen::MatrixXd &E) { return Eigen::Map<const Eigen::VectorXd>(E.data(), E.size()); }

/// D5D5 L weighted by omega at the training pairs: the diagonal of M's data part.
Eigen::VectorXd curvature_weights(const RplModel &f_P, const WeightedDataset &P, const PairDesign &design,
                                  const PairwiseLoss &L) {
    const Eigen::MatrixXd X = P.x_matrix();
    const Eigen::VectorXd F = vectorize(evaluate_grid(f_P, X, X));
    Eigen::VectorXd d(F.size());
    for (Eigen::Index p = 0; p < F.size(); ++p) {
        const auto i = design.first[static_cast<std::size_t>(p)];
        const auto j = design.second[static_cast<std::size_t>(p)];
        d[p] = design.weight[p] * L.second(P[i].y, P[j].y, F[p]);
    }
    return d;
}

TrainConfig fd_config(TrainConfig cfg) {
    cfg.grad_tol = std::min(cfg.grad_tol, kFdGradTol);
    cfg.initial_coefficients.reset();
    return cfg;
}

}  // namespace

WeightedDataset contaminate(const ContaminationSpec &spec) {
    const double eps = spec.epsilon;
    if (!(eps >= 0.0 && eps < 1.0)) { throw InvalidInput("contaminate: epsilon must lie in [0, 1)"); }
    if (spec.base.empty()) { throw InvalidInput("contaminate: empty base measure"); }
    if (eps == 0.0) { return spec.base; }
    if (spec.contaminant.empty()) { throw InvalidInput("contaminate: empty contaminant"); }
    if (spec.contaminant.dim() != spec.base.dim()) { throw InvalidInput("contaminate: dimension mismatch"); }
    std::vector<Sample> out;
    out.reserve(spec.base.size() + spec.contaminant.size());
    for (const auto &s : spec.base.samples()) { out.push_back({s.x, s.y, (1.0 - eps) * s.w}); }
    for (const auto &s : spec.contaminant.samples()) { out.push_back({s.x, s.y, eps * s.w}); }
    return WeightedDataset(std::move(out));
}

WeightedDataset point_mass(const InputPoint &x0, double y0) { return WeightedDataset({Sample{x0, y0, 1.0}}); }

double maxbias_constant(const PairKernel &k, const PairwiseLoss &L, double lambda) {
    if (!L.is_lipschitz()) {
        throw UnsupportedOperation("loss " + L.tag() + " is not Lipschitz: maxbias bound inapplicable");
    }
    if (!(lambda > 0.0)) { throw InvalidInput("maxbias: lambda must be positive"); }
    return 8.0 / lambda * k.sup_bound() * L.metadata().lip1;
}

bool BiasSweepResult::all_satisfied() const {
    return std::all_of(rows.begin(), rows.end(), [](const BiasRow &r) { return r.satisfied; });
}

BiasSweepResult bias_sweep(const WeightedDataset &P, const WeightedDataset &Q, const PairKernel &k,
                           const PairwiseLoss &L, const TrainConfig &cfg, const std::vector<double> &epsilons) {
    BiasSweepResult res;
    res.constant = maxbias_constant(k, L, cfg.lambda);
    const Audited base = train_audited(P, k, L, cfg);
    res.audit.record(base.bounds_ok);
    const auto rows = parallel_map(epsilons.size(), [&](std::size_t r) {
        const double eps = epsilons[r];
        const Audited f_eps = train_audited(contaminate({P, Q, eps}), k, L, cfg);
        BiasRow row;
        row.epsilon = eps;
        row.bias = h_distance(base.model, f_eps.model);
        row.bound = res.constant * eps;
        row.satisfied = row.bias <= row.bound + kBiasSlack;
        return std::make_pair(row, f_eps.bounds_ok);
    });
    for (const auto &[row, ok] : rows) {
        res.rows.push_back(row);
        res.audit.record(ok);
    }
    return res;
}

RplModel apply_m_operator(const RplModel &f_P, const WeightedDataset &P, const PairwiseLoss &L, const RplModel &g) {
    require_influence_loss(L);
    require_same_kernel(f_P, g);
    const auto design = make_pair_design(P);
    const Eigen::VectorXd d = curvature_weights(f_P, P, design, L);
    const Eigen::MatrixXd X = P.x_matrix();
    const Eigen::VectorXd gv = vectorize(evaluate_grid(g, X, X));
    const RplModel data_part(f_P.kernel(), f_P.lambda(), f_P.loss_tag(), f_P.dim(), design_points(P, design),
                             d.cwiseProduct(gv));
    return model_combine({g, data_part}, {2.0 * f_P.lambda(), 1.0});
}

InfluenceResult gateaux_derivative(const RplModel &f_P, const WeightedDataset &P, const WeightedDataset &Q,
                                   const PairwiseLoss &L, const TrainConfig &cfg,
                                   const std::vector<double> &fd_epsilons) {
    require_influence_loss(L);
    require_full_design(cfg);
    if (Q.empty()) { throw InvalidInput("gateaux derivative: empty contaminant"); }
    if (Q.dim() != P.dim() || f_P.dim() != P.dim()) { throw InvalidInput("gateaux derivative: dimension mismatch"); }
    const PairKernel &k = f_P.kernel();
    check_domain(k, Q);
    const double lambda = f_P.lambda();
    const std::size_t n = P.size();
    const auto ni = static_cast<Eigen::Index>(n);
    const auto design = make_pair_design(P);
    const Eigen::VectorXd &omega = design.weight;
    const Eigen::VectorXd w = P.w_vector();
    const Eigen::MatrixXd X = P.x_matrix();
    const Eigen::VectorXd F = vectorize(evaluate_grid(f_P, X, X));

    // -T expressed over the training pairs R and the out-of-sample pairs O
    Eigen::VectorXd t_R(ni * ni);
    Eigen::VectorXd d(ni * ni);
    for (Eigen::Index p = 0; p < F.size(); ++p) {
        const auto i = design.first[static_cast<std::size_t>(p)];
        const auto j = design.second[static_cast<std::size_t>(p)];
        t_R[p] = 2.0 * omega[p] * L.first(P[i].y, P[j].y, F[p]);
        d[p] = omega[p] * L.second(P[i].y, P[j].y, F[p]);
    }

    // Q points equal to a training input fold into R; the rest get their own O blocks
    std::vector<Eigen::Index> q_slot(Q.size());
    std::vector<InputPoint> extra;
    for (std::size_t j = 0; j < Q.size(); ++j) {
        const InputPoint &q = Q[j].x;
        Eigen::Index slot = -1;
        for (std::size_t i = 0; i < n && slot < 0; ++i) {
            if (same_point(P[i].x, q)) { slot = static_cast<Eigen::Index>(i); }
        }
        for (std::size_t e = 0; e < extra.size() && slot < 0; ++e) {
            if (same_point(extra[e], q)) { slot = ni + static_cast<Eigen::Index>(e); }
        }
        if (slot < 0) {
            slot = ni + static_cast<Eigen::Index>(extra.size());
            extra.push_back(q);
        }
        q_slot[j] = slot;
    }
    const auto ne = static_cast<Eigen::Index>(extra.size());
    // O coefficients: column e of t_left is (x_i, u_e), of t_right is (u_e, x_i)
    Eigen::MatrixXd t_left = Eigen::MatrixXd::Zero(ni, ne);
    Eigen::MatrixXd t_right = Eigen::MatrixXd::Zero(ni, ne);

    const Eigen::MatrixXd Qx = Q.x_matrix();
    const Eigen::MatrixXd f_xq = evaluate_grid(f_P, X, Qx);
    const Eigen::MatrixXd f_qx = evaluate_grid(f_P, Qx, X);
    for (std::size_t j = 0; j < Q.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double v = Q[j].w;
        if (v == 0.0) { continue; }
        const Eigen::Index slot = q_slot[j];
        for (Eigen::Index i = 0; i < ni; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            const double b = w[i] * v * L.first(P[iu].y, Q[j].y, f_xq(i, jj));
            const double bp = v * w[i] * L.first(Q[j].y, P[iu].y, f_qx(jj, i));
            if (slot < ni) {
                t_R[i + ni * slot] -= b;
                t_R[slot + ni * i] -= bp;
            } else {
                t_left(i, slot - ni) -= b;
                t_right(i, slot - ni) -= bp;
            }
        }
    }

    std::vector<PairPoint> o_points;
    Eigen::VectorXd t_O(2 * ni * ne);
    for (Eigen::Index e = 0; e < ne; ++e) {
        for (Eigen::Index i = 0; i < ni; ++i) {
            o_points.push_back({P[static_cast<std::size_t>(i)].x, extra[static_cast<std::size_t>(e)]});
            t_O[2 * ni * e + i] = t_left(i, e);
        }
        for (Eigen::Index i = 0; i < ni; ++i) {
            o_points.push_back({extra[static_cast<std::size_t>(e)], P[static_cast<std::size_t>(i)].x});
            t_O[2 * ni * e + ni + i] = t_right(i, e);
        }
    }

    // O blocks sit outside the range of M's data part: 2 lambda beta_O = t_O
    const Eigen::VectorXd beta_O = t_O / (2.0 * lambda);
    Eigen::VectorXd rhs = t_R;
    if (ne > 0) {
        const RplModel o_model(k, lambda, f_P.loss_tag(), f_P.dim(), o_points, beta_O);
        rhs -= d.cwiseProduct(vectorize(evaluate_grid(o_model, X, X)));
    }
    const PairGram G(k, P, design);
    const Eigen::VectorXd beta_R = solve_shifted_system(G, d, lambda, rhs);

    std::vector<PairPoint> basis = design_points(P, design);
    basis.insert(basis.end(), o_points.begin(), o_points.end());
    Eigen::VectorXd beta(beta_R.size() + beta_O.size());
    beta << beta_R, beta_O;
    Eigen::VectorXd minus_t(beta.size());
    minus_t << t_R, t_O;

    InfluenceResult res{RplModel(k, lambda, f_P.loss_tag(), f_P.dim(), basis, beta), f_P, 0.0, 0.0, 0.0, {}, {}};
    res.if_norm = h_norm(res.if_element);
    res.t_norm = h_norm(res.if_element.with_coefficients(minus_t));

    // residual M IF + T, evaluated independently of the coefficient equations
    const Eigen::VectorXd if_on_R = vectorize(evaluate_grid(res.if_element, X, X));
    Eigen::VectorXd resid = 2.0 * lambda * beta - minus_t;
    resid.head(beta_R.size()) += d.cwiseProduct(if_on_R);
    res.operator_residual = h_norm(res.if_element.with_coefficients(resid));

    if (!fd_epsilons.empty()) {
        const TrainConfig fcfg = fd_config(cfg);
        const auto errors = parallel_map(fd_epsilons.size(), [&](std::size_t r) {
            const double eps = fd_epsilons[r];
            if (!(eps > 0.0)) { throw InvalidInput("finite differences need eps > 0"); }
            const Audited f_eps = train_audited(contaminate({P, Q, eps}), k, L, fcfg);
            const RplModel quotient = model_combine({f_eps.model, f_P}, {1.0 / eps, -1.0 / eps});
            return std::make_pair(h_distance(quotient, res.if_element), f_eps.bounds_ok);
        });
        for (std::size_t r = 0; r < errors.size(); ++r) {
            FdRow row{fd_epsilons[r], errors[r].first, 0.0};
            if (r > 0) { row.ratio = errors[r].first > 0.0 ? errors[r - 1].first / errors[r].first : kInfinity; }
            res.fd_table.push_back(row);
            res.audit.record(errors[r].second);
        }
    }
    return res;
}

InfluenceResult gateaux_derivative(const WeightedDataset &P, const WeightedDataset &Q, const PairKernel &k,
                                   const PairwiseLoss &L, const TrainConfig &cfg,
                                   const std::vector<double> &fd_epsilons) {
    require_influence_loss(L);
    require_full_design(cfg);
    const TrainConfig tcfg = fd_epsilons.empty() ? cfg : fd_config(cfg);
    const Audited f_P = train_audited(P, k, L, tcfg);
    InfluenceResult res = gateaux_derivative(f_P.model, P, Q, L, cfg, fd_epsilons);
    res.audit.record(f_P.bounds_ok);
    return res;
}

InfluenceResult influence_function(const WeightedDataset &P, const InputPoint &x0, double y0, const PairKernel &k,
                                   const PairwiseLoss &L, const TrainConfig &cfg,
                                   const std::vector<double> &fd_epsilons) {
    return gateaux_derivative(P, point_mass(x0, y0), k, L, cfg, fd_epsilons);
}

double influence_norm_cap(const PairKernel &k, const PairwiseLoss &L, double lambda) {
    return 4.0 * L.metadata().c_l1 * k.sup_bound() / (2.0 * lambda);
}

bool fd_ratios_within(const std::vector<FdRow> &rows, double lo, double hi) {
    if (rows.size() < 2) { return false; }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (!(rows[r].ratio >= lo && rows[r].ratio <= hi)) { return false; }
    }
    return true;
}

double SecantReport::relative_gap() const {
    if (rows.empty()) { return kInfinity; }
    const auto smallest = std::min_element(rows.begin(), rows.end(),
                                           [](const SecantRow &a, const SecantRow &b) { return a.epsilon < b.epsilon; });
    if (derivative_norm == 0.0) { return smallest->slope == 0.0 ? 0.0 : kInfinity; }
    return std::abs(smallest->slope - derivative_norm) / derivative_norm;
}

SecantReport secant_slopes(const WeightedDataset &P, const WeightedDataset &Q, const PairKernel &k,
                           const PairwiseLoss &L, const TrainConfig &cfg, const std::vector<double> &epsilons) {
    require_influence_loss(L);
    const TrainConfig fcfg = fd_config(cfg);
    const Audited f_P = train_audited(P, k, L, fcfg);
    SecantReport rep;
    rep.audit.record(f_P.bounds_ok);
    rep.derivative_norm = gateaux_derivative(f_P.model, P, Q, L, fcfg).if_norm;
    const auto slopes = parallel_map(epsilons.size(), [&](std::size_t r) {
        const double eps = epsilons[r];
        if (!(eps > 0.0)) { throw InvalidInput("secant slopes need eps > 0"); }
        const Audited f_eps = train_audited(contaminate({P, Q, eps}), k, L, fcfg);
        return std::make_pair(h_distance(f_P.model, f_eps.model) / eps, f_eps.bounds_ok);
    });
    for (std::size_t r = 0; r < epsilons.size(); ++r) {
        rep.rows.push_back({epsilons[r], slopes[r].first});
        rep.audit.record(slopes[r].second);
    }
    return rep;
}

}  // namespace pairlearn
