#include "pairlearn/experiments.hpp"

#include "pairlearn/parallel.hpp"
#include "pairlearn/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace pairlearn {

namespace {

struct Trained {
    RplModel model;
    bool bounds_ok = true;
};

Trained train_checked(const WeightedDataset &data, const PairKernel &k, const PairwiseLoss &L,
                      const TrainConfig &cfg) {
    TrainResult r = train(data, k, L, cfg);
    const bool ok = norm_bounds_hold(r, data, L, cfg.lambda);
    return {std::move(r.model), ok};
}

std::vector<RplModel> absorb(std::vector<Trained> trained, ExperimentReport &report) {
    std::vector<RplModel> out;
    out.reserve(trained.size());
    for (auto &t : trained) {
        ++report.models_trained;
        if (!t.bounds_ok) { ++report.norm_bound_violations; }
        out.push_back(std::move(t.model));
    }
    return out;
}

void add_bounds_check(ExperimentReport &report) {
    report.checks.push_back({"norm_bounds_all_models", report.norm_bound_violations == 0,
                             static_cast<double>(report.norm_bound_violations), 0.0});
}

std::pair<InputPoint, double> draw(const SyntheticSpec &spec, Rng &rng) {
    InputPoint x(spec.d);
    for (Eigen::Index c = 0; c < spec.d; ++c) { x[c] = rng.uniform(-1.0, 1.0); }
    double e = 0.0;
    switch (spec.noise) {
        case NoiseKind::gaussian: e = spec.noise_scale * rng.normal(); break;
        case NoiseKind::cauchy: e = spec.noise_scale * rng.cauchy(); break;
        case NoiseKind::truncated_cauchy: {
            double c = rng.cauchy();
            while (std::abs(c) > spec.truncation) { c = rng.cauchy(); }
            e = spec.noise_scale * c;
            break;
        }
    }
    return {x, truth_score(spec.truth, x) + e};
}

WeightedDataset from_draws(std::vector<std::pair<InputPoint, double>> pts) {
    std::vector<InputPoint> xs;
    std::vector<double> ys;
    for (auto &p : pts) {
        xs.push_back(std::move(p.first));
        ys.push_back(p.second);
    }
    return WeightedDataset::uniform(xs, ys);
}

bool non_increasing(const std::vector<double> &v, double slack) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[i - 1] + slack) { return false; }
    }
    return true;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const Eigen::VectorXd &v) {
    const auto m = static_cast<double>(v.size());
    MeanSe r;
    r.mean = v.mean();
    if (v.size() > 1) { r.se = std::sqrt((v.array() - r.mean).square().sum() / (m - 1.0) / m); }
    return r;
}

std::vector<double> sorted_descending(std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

}  // namespace

void SyntheticSpec::validate() const {
    if (n < 2) { throw InvalidInput("synthetic spec: n must be >= 2"); }
    if (d < 1) { throw InvalidInput("synthetic spec: d must be >= 1"); }
    if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
        throw InvalidInput("synthetic spec: noise scale must be finite and >= 0");
    }
    if (noise == NoiseKind::truncated_cauchy && !(truncation > 0.0)) {
        throw InvalidInput("synthetic spec: truncation must be positive");
    }
}

double truth_score(Truth truth, const InputPoint &x) {
    const double s = x.sum();
    return truth == Truth::linear ? s : std::sin(std::numbers::pi * s);
}

WeightedDataset gen_synthetic(const SyntheticSpec &spec) {
    spec.validate();
    Rng rng(spec.seed);
    std::vector<std::pair<InputPoint, double>> pts;
    pts.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) { pts.push_back(draw(spec, rng)); }
    return from_draws(std::move(pts));
}

std::string to_string(Truth t) { return t == Truth::linear ? "linear" : "sine"; }

Truth truth_from_string(const std::string &s) {
    if (s == "linear") { return Truth::linear; }
    if (s == "sine") { return Truth::sine; }
    throw InvalidInput("unknown truth '" + s + "'");
}

std::string to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::cauchy: return "cauchy";
        case NoiseKind::truncated_cauchy: return "truncated_cauchy";
    }
    return "?";
}

NoiseKind noise_from_string(const std::string &s) {
    if (s == "gaussian") { return NoiseKind::gaussian; }
    if (s == "cauchy") { return NoiseKind::cauchy; }
    if (s == "truncated_cauchy") { return NoiseKind::truncated_cauchy; }
    throw InvalidInput("unknown noise '" + s + "'");
}

bool ExperimentReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck &c) { return c.passed; });
}

const InvariantCheck &ExperimentReport::check(const std::string &check_name) const {
    for (const auto &c : checks) {
        if (c.name == check_name) { return c; }
    }
    throw InvalidInput("report has no check '" + check_name + "'");
}

double ExperimentReport::stat(const std::string &stat_name) const {
    for (const auto &[k, v] : stats) {
        if (k == stat_name) { return v; }
    }
    throw InvalidInput("report has no statistic '" + stat_name + "'");
}

RplModel train_audited(const WeightedDataset &data, const PairKernel &k, const PairwiseLoss &L,
                       const TrainConfig &cfg, ExperimentReport &report) {
    std::vector<Trained> one;
    one.push_back(train_checked(data, k, L, cfg));
    return std::move(absorb(std::move(one), report).front());
}

ExperimentReport consistency_experiment(const ConsistencySpec &spec, const PairKernel &k, const PairwiseLoss &L,
                                        std::uint64_t seed) {
    if (!L.is_lipschitz()) { throw UnsupportedOperation("loss " + L.tag() + " is not Lipschitz: consistency result inapplicable"); }
    if (spec.n_grid.empty() || !std::is_sorted(spec.n_grid.begin(), spec.n_grid.end()) ||
        spec.n_grid.back() > kMaxSamples) {
        throw InvalidInput("consistency: n grid must be increasing with max <= " + std::to_string(kMaxSamples));
    }
    if (spec.seeds == 0 || spec.test_pairs < 2 || spec.bayes_t_steps < 2) {
        throw InvalidInput("consistency: seeds, test_pairs and bayes_t_steps must be positive");
    }
    ExperimentReport rep;
    rep.name = "consistency";
    rep.seed = seed;
    rep.columns = {"seed", "n", "lambda", "test_risk", "test_se", "running_min", "bayes_proxy", "gap_se"};
    const bool noiseless = spec.data.noise_scale == 0.0;

    struct SeedResult {
        std::vector<std::vector<double>> rows;
        std::vector<Trained> models;
        bool running_min_ok = false;
        bool improves = false;
        bool near_bayes = false;
    };
    const auto per_seed = parallel_map(spec.seeds, [&](std::size_t s) {
        const std::uint64_t sseed = derive_seed(seed, s);
        // held-out pairs of independent draws, shared by every n of this seed
        SyntheticSpec test = spec.data;
        test.n = 2 * spec.test_pairs;
        test.seed = derive_seed(sseed, 0);
        const WeightedDataset T = gen_synthetic(test);
        const auto m = static_cast<Eigen::Index>(spec.test_pairs);
        std::vector<PairPoint> pairs;
        pairs.reserve(spec.test_pairs);
        Eigen::VectorXd bayes(m);
        for (Eigen::Index t = 0; t < m; ++t) {
            const auto &a = T[static_cast<std::size_t>(2 * t)];
            const auto &b = T[static_cast<std::size_t>(2 * t + 1)];
            pairs.push_back({a.x, b.x});
            double best = 0.0;  // t = 0 is on the grid
            for (std::size_t g = 0; g < spec.bayes_t_steps; ++g) {
                const double tv = -spec.bayes_t_max +
                                  2.0 * spec.bayes_t_max * static_cast<double>(g) / static_cast<double>(spec.bayes_t_steps - 1);
                best = std::min(best, L.value(a.y, b.y, tv) - L.value(a.y, b.y, 0.0));
            }
            bayes[t] = best;
        }
        const MeanSe bayes_stat = mean_se(bayes);

        SeedResult res;
        std::vector<double> risks;
        double running = kInfinity;
        double last_gap = kInfinity;
        double last_gap_se = 0.0;
        for (const std::size_t n : spec.n_grid) {
            SyntheticSpec ds = spec.data;
            ds.n = n;
            ds.seed = derive_seed(sseed, 1 + n);
            const WeightedDataset D = gen_synthetic(ds);
            TrainConfig cfg = spec.train;
            cfg.lambda = spec.lambda_c * std::pow(static_cast<double>(n), -spec.lambda_exponent);
            Trained tr = train_checked(D, k, L, cfg);
            const Eigen::VectorXd fv = evaluate_pairs(tr.model, pairs);
            Eigen::VectorXd loss(m);
            for (Eigen::Index t = 0; t < m; ++t) {
                const auto &a = T[static_cast<std::size_t>(2 * t)];
                const auto &b = T[static_cast<std::size_t>(2 * t + 1)];
                loss[t] = L.value(a.y, b.y, fv[t]) - L.value(a.y, b.y, 0.0);
            }
            const MeanSe r = mean_se(loss);
            const MeanSe gap = mean_se(loss - bayes);
            running = std::min(running, r.mean);
            risks.push_back(r.mean);
            last_gap = gap.mean;
            last_gap_se = gap.se;
            res.rows.push_back({static_cast<double>(s), static_cast<double>(n), cfg.lambda, r.mean, r.se, running,
                                bayes_stat.mean, gap.se});
            res.models.push_back(std::move(tr));
        }
        std::vector<double> mins;
        double cur = kInfinity;
        for (double r : risks) { mins.push_back(cur = std::min(cur, r)); }
        res.running_min_ok = non_increasing(mins, 0.0);
        res.improves = risks.back() < risks.front();
        res.near_bayes = last_gap <= 3.0 * last_gap_se;
        return res;
    });

    std::size_t min_ok = 0, improves = 0, near = 0;
    for (const auto &r : per_seed) {
        rep.rows.insert(rep.rows.end(), r.rows.begin(), r.rows.end());
        min_ok += r.running_min_ok;
        improves += r.improves;
        near += r.near_bayes;
    }
    for (const auto &r : per_seed) {
        for (const auto &t : r.models) {
            ++rep.models_trained;
            if (!t.bounds_ok) { ++rep.norm_bound_violations; }
        }
    }
    const std::size_t q = trend_quorum(spec.seeds);
    rep.checks.push_back({"running_min_non_increasing", min_ok >= q, static_cast<double>(min_ok), static_cast<double>(q)});
    rep.checks.push_back({"risk_improves_over_grid", improves >= q, static_cast<double>(improves), static_cast<double>(q)});
    if (noiseless) {
        rep.checks.push_back({"within_3se_of_bayes_proxy_at_max_n", near >= q, static_cast<double>(near),
                              static_cast<double>(q)});
    }
    add_bounds_check(rep);
    rep.stats = {{"seeds_running_min_ok", static_cast<double>(min_ok)},
                 {"seeds_improving", static_cast<double>(improves)},
                 {"seeds_near_bayes", static_cast<double>(near)}};
    return rep;
}

ExperimentReport continuity_experiment(const WeightedDataset &data, const PairKernel &k, const PairwiseLoss &L,
                                       const ContinuitySpec &spec) {
    if (spec.index >= data.size()) { throw InvalidInput("continuity: perturbed index out of range"); }
    if (spec.delta_grid.empty()) { throw InvalidInput("continuity: empty delta grid"); }
    ExperimentReport rep;
    rep.name = "continuity";
    rep.seed = spec.train.seed;
    rep.columns = {"delta", "h_change", "bound"};
    const RplModel f = train_audited(data, k, L, spec.train, rep);
    const auto d = static_cast<double>(data.dim());

    auto perturbed = [&](double dx, double dy) {
        std::vector<Sample> s = data.samples();
        Sample &p = s[spec.index];
        for (Eigen::Index c = 0; c < p.x.size(); ++c) {
            const double sg = static_cast<double>((p.x[c] > 0.0) - (p.x[c] < 0.0));
            p.x[c] -= dx * sg / std::sqrt(d);
        }
        p.y += dy;
        return WeightedDataset(std::move(s));
    };

    const std::vector<double> deltas = sorted_descending(spec.delta_grid);
    auto trained = parallel_map(deltas.size(), [&](std::size_t r) {
        return train_checked(perturbed(deltas[r], deltas[r]), k, L, spec.train);
    });
    const auto models = absorb(std::move(trained), rep);
    std::vector<double> changes;
    for (std::size_t r = 0; r < deltas.size(); ++r) {
        changes.push_back(h_distance(f, models[r]));
        rep.rows.push_back({deltas[r], changes.back(), kInfinity});
    }
    rep.checks.push_back({"non_increasing_as_delta_shrinks", non_increasing(changes, 1e-9), 0.0, 0.0});
    if (deltas.back() == 0.0) {
        rep.checks.push_back({"delta_zero_reproduces_model", changes.back() <= 1e-8, changes.back(), 1e-8});
    }
    if (L.is_lipschitz() && spec.outlier_shift != 0.0) {
        const double bound = maxbias_constant(k, L, spec.train.lambda) / static_cast<double>(data.size());
        const RplModel g = train_audited(perturbed(0.0, spec.outlier_shift), k, L, spec.train, rep);
        const double change = h_distance(f, g);
        rep.rows.push_back({spec.outlier_shift, change, bound});
        rep.checks.push_back({"outlier_within_one_point_bound", change <= bound + kBiasSlack, change, bound});
    }
    add_bounds_check(rep);
    return rep;
}

double energy_distance_h(const std::vector<RplModel> &A, const std::vector<RplModel> &B) {
    if (A.empty() || B.empty()) { throw InvalidInput("energy distance: empty sample"); }
    std::vector<const RplModel *> all;
    for (const auto &a : A) { all.push_back(&a); }
    for (const auto &b : B) { all.push_back(&b); }
    for (const auto *m : all) { require_same_kernel(*all.front(), *m); }
    const PairKernel &k = all.front()->kernel();
    std::vector<detail::Factored> fac;
    fac.reserve(all.size());
    for (const auto *m : all) { fac.push_back(detail::factor(*m)); }
    const auto total = static_cast<Eigen::Index>(all.size());
    Eigen::MatrixXd G(total, total);
    for (Eigen::Index i = 0; i < total; ++i) {
        for (Eigen::Index j = i; j < total; ++j) {
            G(i, j) = detail::factored_inner(k, fac[static_cast<std::size_t>(i)], fac[static_cast<std::size_t>(j)]);
            G(j, i) = G(i, j);
        }
    }
    auto dist = [&](Eigen::Index i, Eigen::Index j) {
        if (i == j) { return 0.0; }
        return std::sqrt(std::max(0.0, G(i, i) + G(j, j) - 2.0 * G(i, j)));
    };
    const auto na = static_cast<Eigen::Index>(A.size());
    const auto nb = static_cast<Eigen::Index>(B.size());
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (Eigen::Index i = 0; i < na; ++i) {
        for (Eigen::Index j = 0; j < nb; ++j) { ab += dist(i, na + j); }
        for (Eigen::Index j = 0; j < na; ++j) { aa += dist(i, j); }
    }
    for (Eigen::Index i = 0; i < nb; ++i) {
        for (Eigen::Index j = 0; j < nb; ++j) { bb += dist(na + i, na + j); }
    }
    const double fa = static_cast<double>(na), fb = static_cast<double>(nb);
    return 2.0 * ab / (fa * fb) - aa / (fa * fa) - bb / (fb * fb);
}

ExperimentReport qual_robustness_experiment(const QualRobustSpec &spec, const PairKernel &k, const PairwiseLoss &L,
                                            std::uint64_t seed) {
    if (!L.is_lipschitz()) {
        throw UnsupportedOperation("loss " + L.tag() + " is not Lipschitz: qualitative robustness inapplicable");
    }
    if (spec.reps < 4 || spec.seeds == 0 || spec.delta_grid.empty()) {
        throw InvalidInput("qualrobust: need reps >= 4, seeds >= 1 and a non-empty delta grid");
    }
    for (double dl : spec.delta_grid) {
        if (!(dl >= 0.0 && dl <= 1.0)) { throw InvalidInput("qualrobust: delta must lie in [0, 1]"); }
    }
    spec.data.validate();
    ExperimentReport rep;
    rep.name = "qualrobust";
    rep.seed = seed;
    rep.columns = {"seed", "delta", "energy_distance", "noise_floor"};
    const std::vector<double> deltas = sorted_descending(spec.delta_grid);
    const InputPoint x_out = InputPoint::Constant(spec.data.d, spec.outlier_x);

    auto sample = [&](double delta, std::uint64_t s) {
        Rng rng(s);
        std::vector<std::pair<InputPoint, double>> pts;
        for (std::size_t i = 0; i < spec.data.n; ++i) {
            if (delta > 0.0 && rng.uniform() < delta) {
                pts.emplace_back(x_out, spec.outlier_y);
            } else {
                pts.push_back(draw(spec.data, rng));
            }
        }
        return from_draws(std::move(pts));
    };

    // cloud c = 0 is P, cloud 1 + r is Q(deltas[r])
    const std::size_t clouds = 1 + deltas.size();
    const std::size_t jobs = spec.seeds * clouds * spec.reps;
    auto trained = parallel_map(jobs, [&](std::size_t job) {
        const std::size_t s = job / (clouds * spec.reps);
        const std::size_t c = (job / spec.reps) % clouds;
        const std::size_t r = job % spec.reps;
        const std::uint64_t dseed = derive_seed(derive_seed(derive_seed(seed, s), c), r);
        const double delta = c == 0 ? 0.0 : deltas[c - 1];
        return train_checked(sample(delta, dseed), k, L, spec.train);
    });
    const auto models = absorb(std::move(trained), rep);

    std::size_t monotone = 0, floor_ok = 0;
    for (std::size_t s = 0; s < spec.seeds; ++s) {
        auto cloud = [&](std::size_t c) {
            const auto first = models.begin() + static_cast<std::ptrdiff_t>((s * clouds + c) * spec.reps);
            return std::vector<RplModel>(first, first + static_cast<std::ptrdiff_t>(spec.reps));
        };
        const auto P = cloud(0);
        const std::size_t half = spec.reps / 2;
        const double floor = energy_distance_h({P.begin(), P.begin() + static_cast<std::ptrdiff_t>(half)},
                                               {P.begin() + static_cast<std::ptrdiff_t>(half), P.end()});
        std::vector<double> dist;
        for (std::size_t r = 0; r < deltas.size(); ++r) {
            dist.push_back(energy_distance_h(P, cloud(1 + r)));
            rep.rows.push_back({static_cast<double>(s), deltas[r], dist.back(), floor});
        }
        monotone += non_increasing(dist, 0.0);
        if (deltas.back() == 0.0) { floor_ok += dist.back() <= floor; }
    }
    const std::size_t q = trend_quorum(spec.seeds);
    rep.checks.push_back({"distance_non_increasing_as_delta_shrinks", monotone >= q, static_cast<double>(monotone),
                          static_cast<double>(q)});
    if (deltas.back() == 0.0) {
        rep.checks.push_back({"delta_zero_within_noise_floor", floor_ok >= q, static_cast<double>(floor_ok),
                              static_cast<double>(q)});
    }
    add_bounds_check(rep);
    rep.stats = {{"seeds_monotone", static_cast<double>(monotone)}, {"seeds_within_floor", static_cast<double>(floor_ok)}};
    return rep;
}

WeightedDataset bootstrap_resample(const WeightedDataset &data, std::uint64_t seed) {
    if (data.empty()) { throw InvalidInput("bootstrap: empty dataset"); }
    Rng rng(seed);
    std::map<std::size_t, std::size_t> counts;
    for (std::size_t i = 0; i < data.size(); ++i) { ++counts[static_cast<std::size_t>(rng.index(data.size()))]; }
    const auto n = static_cast<double>(data.size());
    std::vector<Sample> out;
    for (const auto &[idx, c] : counts) { out.push_back({data[idx].x, data[idx].y, static_cast<double>(c) / n}); }
    return WeightedDataset(std::move(out));
}

ExperimentReport bootstrap_experiment(const BootstrapSpec &spec, const PairKernel &k, const PairwiseLoss &L,
                                      std::uint64_t seed) {
    if (!L.is_lipschitz()) {
        throw UnsupportedOperation("loss " + L.tag() + " is not Lipschitz: bootstrap result inapplicable");
    }
    if (spec.reps < 4 || spec.seeds == 0 || spec.base_samples == 0 || spec.n_grid.empty() ||
        !std::is_sorted(spec.n_grid.begin(), spec.n_grid.end()) || spec.n_grid.back() > kMaxSamples) {
        throw InvalidInput("bootstrap: need reps >= 4, seeds >= 1, base_samples >= 1 and an increasing n grid with max <= " +
                           std::to_string(kMaxSamples));
    }
    ExperimentReport rep;
    rep.name = "bootstrap";
    rep.seed = seed;
    rep.columns = {"seed", "n", "energy_distance", "energy_distance_se", "noise_floor", "max_h_norm"};
    const std::size_t grid = spec.n_grid.size();
    const std::size_t B = spec.base_samples;
    // per (seed, n): reps bootstrap fits for each of B base samples, then reps fresh-sample fits
    const std::size_t per = (B + 1) * spec.reps;
    const std::size_t jobs = spec.seeds * grid * per;
    auto trained = parallel_map(jobs, [&](std::size_t job) {
        const std::size_t s = job / (grid * per);
        const std::size_t g = (job / per) % grid;
        const std::size_t r = job % per;
        const std::uint64_t cell = derive_seed(derive_seed(seed, s), spec.n_grid[g]);
        SyntheticSpec ds = spec.data;
        ds.n = spec.n_grid[g];
        if (r < B * spec.reps) {
            const std::size_t b = r / spec.reps;
            ds.seed = derive_seed(cell, b);
            return train_checked(bootstrap_resample(gen_synthetic(ds), derive_seed(cell, 1000 + r)), k, L, spec.train);
        }
        ds.seed = derive_seed(cell, 2000 + r);
        return train_checked(gen_synthetic(ds), k, L, spec.train);
    });
    const auto models = absorb(std::move(trained), rep);

    std::size_t decreasing = 0;
    double max_norm = 0.0;
    for (std::size_t s = 0; s < spec.seeds; ++s) {
        std::vector<double> dist;
        for (std::size_t g = 0; g < grid; ++g) {
            const auto first = models.begin() + static_cast<std::ptrdiff_t>((s * grid + g) * per);
            const auto mid = first + static_cast<std::ptrdiff_t>(B * spec.reps);
            const auto last = mid + static_cast<std::ptrdiff_t>(spec.reps);
            const std::vector<RplModel> fresh(mid, last);
            const auto half = mid + static_cast<std::ptrdiff_t>(spec.reps / 2);
            const double floor = energy_distance_h({mid, half}, {half, last});
            Eigen::VectorXd per_base(static_cast<Eigen::Index>(B));
            for (std::size_t b = 0; b < B; ++b) {
                const auto bf = first + static_cast<std::ptrdiff_t>(b * spec.reps);
                per_base[static_cast<Eigen::Index>(b)] =
                    energy_distance_h({bf, bf + static_cast<std::ptrdiff_t>(spec.reps)}, fresh);
            }
            double cell_norm = 0.0;
            for (auto it = first; it != last; ++it) { cell_norm = std::max(cell_norm, h_norm(*it)); }
            max_norm = std::max(max_norm, cell_norm);
            const MeanSe m = mean_se(per_base);
            dist.push_back(m.mean);
            rep.rows.push_back({static_cast<double>(s), static_cast<double>(spec.n_grid[g]), m.mean, m.se, floor,
                                cell_norm});
        }
        bool strictly = true;
        for (std::size_t g = 1; g < dist.size(); ++g) { strictly = strictly && dist[g] < dist[g - 1]; }
        decreasing += strictly;
    }
    const std::size_t q = trend_quorum(spec.seeds);
    rep.checks.push_back({"distance_decreasing_in_n", decreasing >= q, static_cast<double>(decreasing),
                          static_cast<double>(q)});
    rep.checks.push_back({"estimator_norms_finite", std::isfinite(max_norm), max_norm, 0.0});
    add_bounds_check(rep);
    rep.stats = {{"seeds_decreasing", static_cast<double>(decreasing)}, {"max_h_norm", max_norm}};
    return rep;
}

}  // namespace pairlearn
