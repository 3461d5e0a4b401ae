// pairlearn command-line driver.
#include "pairlearn/config.hpp"
#include "pairlearn/io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pairlearn;

namespace {

struct Options {
    std::string config;
    std::string data;
    std::string model;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
};

struct Context {
    RunConfig cfg;
    fs::path out;
    std::uint64_t seed = 0;
};

Context make_context(const Options &o) {
    Context c{load_run_config(o.config), fs::path(o.out), 0};
    c.seed = o.seed.value_or(c.cfg.seed);
    c.cfg.data.seed = c.seed;
    c.cfg.train.seed = c.seed;
    for (TrainConfig *t : {&c.cfg.consistency.train, &c.cfg.bootstrap.train, &c.cfg.qualrobust.train}) {
        t->seed = c.seed;
    }
    return c;
}

WeightedDataset input_data(const Options &o, const Context &c) {
    if (!o.data.empty()) { return read_dataset_csv(o.data); }
    return gen_synthetic(c.cfg.data);
}

json check_json(const std::string &name, bool passed, double measured, double reference) {
    return {{"name", name}, {"passed", passed}, {"measured", json_number(measured)}, {"reference", json_number(reference)}};
}

bool all_passed(const json &checks) {
    for (const auto &c : checks) {
        if (!c.at("passed").get<bool>()) { return false; }
    }
    return true;
}

json header(const Context &c, const std::string &command) {
    return {{"format_version", kFormatVersion}, {"command", command}, {"config_hash", c.cfg.hash}, {"seed", c.seed}};
}

void write_json(const fs::path &path, const json &j) { write_text_file(path, j.dump(2) + "\n"); }

int finish(const json &checks, const std::string &what) {
    const bool ok = all_passed(checks);
    if (!ok) {
        for (const auto &c : checks) {
            if (!c.at("passed").get<bool>()) {
                std::cerr << what << ": invariant failed: " << c.at("name").get<std::string>() << "\n";
            }
        }
    }
    return ok ? 0 : 1;
}

int cmd_gen_data(const Options &o) {
    const Context c = make_context(o);
    const WeightedDataset d = gen_synthetic(c.cfg.data);
    write_text_file(c.out / "data.csv",
                    dataset_csv(d, false, {"config_hash=" + c.cfg.hash, "seed=" + std::to_string(c.seed)}));
    return 0;
}

int cmd_train(const Options &o) {
    const Context c = make_context(o);
    const PairKernel &k = c.cfg.require_kernel();
    const PairwiseLoss &L = c.cfg.require_loss();
    const WeightedDataset data = input_data(o, c);
    TrainConfig tc = c.cfg.train;
    json out = header(c, "train");
    json checks = json::array();

    if (!o.model.empty()) {
        const RplModel warm = read_model_json(o.model);
        const auto design = make_pair_design(data, tc.pair_mode, tc.pair_subsample, tc.seed);
        if (warm.kernel() == k && warm.size() == design.size()) { tc.initial_coefficients = warm.coefficients(); }
    }

    TrainResult res{RplModel::zero(k, tc.lambda, L.tag(), data.dim()), {}, 0, 0.0};
    try {
        if (c.cfg.ls_closed_form) {
            if (L.kind() != LossKind::ls_rank) { throw InvalidInput("solver ls_closed_form needs the ls_rank loss"); }
            res = train_ls_closed_form(data, k, tc.lambda, tc.pair_mode);
        } else {
            res = train(data, k, L, tc);
        }
    } catch (const ConvergenceError &e) {
        out["error"] = e.what();
        out["diagnostics"] = {{"grad_residual", json_number(e.last_residual())}};
        out["all_passed"] = false;
        write_json(c.out / "model.json", out);
        std::cerr << "train: " << e.what() << "\n";
        return 2;
    }
    const RplModel &f = res.model;
    const double norm = h_norm(f);
    const bool hinge = L.kind() != LossKind::ls_rank && L.phi() == Phi::hinge;
    double residual_tol = hinge ? tc.gap_tol : tc.grad_tol;
    if (c.cfg.ls_closed_form) { residual_tol = 1e-8 * (1.0 + norm); }

    json diag;
    diag["iterations"] = res.iterations;
    diag[hinge ? "duality_gap" : "grad_residual"] = json_number(res.residual);
    checks.push_back(check_json(hinge ? "duality_gap" : "grad_residual", res.residual <= residual_tol, res.residual,
                                residual_tol));
    const double shifted = empirical_risk(f, data, res.design, L, true);
    diag["risk"] = {{"shifted_risk", json_number(shifted)},
                    {"regularized_risk", json_number(shifted + tc.lambda * norm * norm)},
                    {"h_norm", json_number(norm)}};
    if (L.metadata().differentiable) {
        const auto rep = representer_residual(f, data, res.design, L, tc.lambda);
        diag["representer_residual"] = json_number(rep.residual_norm);
        diag["h_sup"] = json_number(rep.h_sup);
        checks.push_back(check_json("representer_residual", rep.residual_norm <= 1e-6 * (1.0 + norm),
                                    rep.residual_norm, 1e-6 * (1.0 + norm)));
        if (L.is_lipschitz()) {
            checks.push_back(check_json("h_sup_le_lipschitz", rep.h_sup <= L.metadata().lip1 + 1e-9, rep.h_sup,
                                        L.metadata().lip1));
        }
    }
    if (L.is_lipschitz()) {
        const auto nb = check_norm_bounds(f, data, res.design, L, tc.lambda);
        json bounds = json::array();
        for (const auto &b : nb.checks) {
            bounds.push_back(check_json(b.name, b.satisfied, b.lhs, b.rhs));
            checks.push_back(bounds.back());
        }
        diag["norm_bounds"] = std::move(bounds);
    }
    diag["checks"] = checks;
    out["model"] = model_to_json(f);
    out["diagnostics"] = std::move(diag);
    out["all_passed"] = all_passed(checks);
    write_json(c.out / "model.json", out);
    return finish(checks, "train");
}

int cmd_influence(const Options &o) {
    const Context c = make_context(o);
    const PairKernel &k = c.cfg.require_kernel();
    const PairwiseLoss &L = c.cfg.require_loss();
    const WeightedDataset P = input_data(o, c);
    WeightedDataset Q;
    if (c.cfg.x0) {
        Q = point_mass(*c.cfg.x0, c.cfg.y0);
    } else if (c.cfg.contaminant) {
        Q = *c.cfg.contaminant;
    } else {
        throw InvalidInput("influence: set influence.x0/y0 or a contaminant");
    }
    const InfluenceResult r = o.model.empty()
                                  ? gateaux_derivative(P, Q, k, L, c.cfg.train, c.cfg.fd_epsilons)
                                  : gateaux_derivative(read_model_json(o.model), P, Q, L, c.cfg.train, c.cfg.fd_epsilons);
    const double lambda = r.f_P.lambda();
    const double cap = influence_norm_cap(k, L, lambda);
    const double slack = 1e-9 * (1.0 + cap);
    json checks = json::array();
    checks.push_back(check_json("operator_residual", r.operator_residual <= kOperatorTolerance * (1.0 + r.if_norm),
                                r.operator_residual, kOperatorTolerance * (1.0 + r.if_norm)));
    checks.push_back(check_json("if_norm_le_t_norm_over_2lambda", r.if_norm <= r.t_norm / (2.0 * lambda) + slack,
                                r.if_norm, r.t_norm / (2.0 * lambda)));
    checks.push_back(check_json("t_norm_le_4_cl1_k", r.t_norm <= 4.0 * L.metadata().c_l1 * k.sup_bound() + slack,
                                r.t_norm, 4.0 * L.metadata().c_l1 * k.sup_bound()));
    checks.push_back(check_json("if_norm_le_cap", std::isfinite(r.if_norm) && r.if_norm <= cap + slack, r.if_norm, cap));
    if (r.fd_table.size() >= 2) {
        checks.push_back(check_json("fd_halving_ratios_in_1.5_2.5", fd_ratios_within(r.fd_table),
                                    r.fd_table.back().ratio, 2.0));
    }
    checks.push_back(check_json("norm_bounds_all_models", r.audit.violations == 0,
                                static_cast<double>(r.audit.violations), 0.0));

    std::string csv = "# config_hash=" + c.cfg.hash + "\n# seed=" + std::to_string(c.seed) + "\nepsilon,fd_error,ratio\n";
    for (const auto &row : r.fd_table) {
        csv += format_double(row.epsilon) + "," + format_double(row.error) + "," + format_double(row.ratio) + "\n";
    }
    write_text_file(c.out / "influence.csv", csv);
    json out = header(c, "influence");
    out["operator_residual"] = json_number(r.operator_residual);
    out["if_norm"] = json_number(r.if_norm);
    out["t_norm"] = json_number(r.t_norm);
    out["if_norm_cap"] = json_number(cap);
    out["models_trained"] = r.audit.models;
    out["norm_bound_violations"] = r.audit.violations;
    out["checks"] = checks;
    out["all_passed"] = all_passed(checks);
    out["if_element"] = model_to_json(r.if_element);
    write_json(c.out / "influence.json", out);
    return finish(checks, "influence");
}

int cmd_bias_sweep(const Options &o) {
    const Context c = make_context(o);
    const PairKernel &k = c.cfg.require_kernel();
    const PairwiseLoss &L = c.cfg.require_loss();
    if (!c.cfg.contaminant) { throw InvalidInput("bias-sweep: a contaminant is required"); }
    const WeightedDataset P = input_data(o, c);
    const BiasSweepResult r = bias_sweep(P, *c.cfg.contaminant, k, L, c.cfg.train, c.cfg.bias_epsilons);
    std::string csv = "# config_hash=" + c.cfg.hash + "\n# seed=" + std::to_string(c.seed) +
                      "\nepsilon,bias,bound,satisfied\n";
    json checks = json::array();
    for (const auto &row : r.rows) {
        csv += format_double(row.epsilon) + "," + format_double(row.bias) + "," + format_double(row.bound) + "," +
               (row.satisfied ? "1" : "0") + "\n";
        checks.push_back(check_json("bias_le_bound_eps_" + format_double(row.epsilon), row.satisfied, row.bias, row.bound));
    }
    checks.push_back(check_json("norm_bounds_all_models", r.audit.violations == 0,
                                static_cast<double>(r.audit.violations), 0.0));
    write_text_file(c.out / "bias_sweep.csv", csv);
    json out = header(c, "bias-sweep");
    out["constant"] = json_number(r.constant);
    out["models_trained"] = r.audit.models;
    out["norm_bound_violations"] = r.audit.violations;
    out["checks"] = checks;
    out["all_passed"] = all_passed(checks);
    write_json(c.out / "bias_sweep.json", out);
    return finish(checks, "bias-sweep");
}

int emit_report(const Context &c, const ExperimentReport &rep, const std::string &command) {
    write_text_file(c.out / (rep.name + ".csv"), report_csv(rep, c.cfg.hash));
    json out = report_json(rep, c.cfg.hash);
    out["command"] = command;
    write_json(c.out / (rep.name + ".json"), out);
    for (const auto &ch : rep.checks) {
        if (!ch.passed) { std::cerr << command << ": invariant failed: " << ch.name << "\n"; }
    }
    return rep.all_passed() ? 0 : 1;
}

int cmd_consistency(const Options &o) {
    const Context c = make_context(o);
    return emit_report(c, consistency_experiment(c.cfg.consistency, c.cfg.require_kernel(), c.cfg.require_loss(), c.seed),
                       "consistency");
}

int cmd_bootstrap(const Options &o) {
    const Context c = make_context(o);
    return emit_report(c, bootstrap_experiment(c.cfg.bootstrap, c.cfg.require_kernel(), c.cfg.require_loss(), c.seed),
                       "bootstrap");
}

int cmd_qualrobust(const Options &o) {
    const Context c = make_context(o);
    return emit_report(c,
                       qual_robustness_experiment(c.cfg.qualrobust, c.cfg.require_kernel(), c.cfg.require_loss(), c.seed),
                       "qualrobust");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"pairlearn: regularized pairwise learning with shifted losses"};
    app.require_subcommand(1);
    Options opt;
    std::uint64_t seed = 0;

    const std::vector<std::pair<std::string, int (*)(const Options &)>> commands{
        {"gen-data", cmd_gen_data},       {"train", cmd_train},         {"influence", cmd_influence},
        {"bias-sweep", cmd_bias_sweep},   {"consistency", cmd_consistency}, {"bootstrap", cmd_bootstrap},
        {"qualrobust", cmd_qualrobust}};
    std::vector<std::pair<CLI::App *, int (*)(const Options &)>> subs;
    for (const auto &[name, fn] : commands) {
        CLI::App *sub = app.add_subcommand(name);
        sub->add_option("--config", opt.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--data", opt.data, "dataset CSV x1,...,xd,y[,w]");
        sub->add_option("--model", opt.model, "model JSON");
        sub->add_option("--out", opt.out, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "seed overriding the config");
        subs.emplace_back(sub, fn);
    }
    CLI11_PARSE(app, argc, argv);

    for (const auto &[sub, fn] : subs) {
        if (!sub->parsed()) { continue; }
        if (sub->count("--seed") > 0) { opt.seed = seed; }
        try {
            return fn(opt);
        } catch (const Error &e) {
            std::cerr << sub->get_name() << ": " << e.what() << "\n";
            return 2;
        } catch (const std::exception &e) {
            std::cerr << sub->get_name() << ": unexpected error: " << e.what() << "\n";
            return 3;
        }
    }
    return 2;
}
