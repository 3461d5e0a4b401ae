#include "pairlearn/config.hpp"

#include "pairlearn/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <set>

namespace pairlearn {

using nlohmann::json;

namespace {

void allow_keys(const json &j, const char *block, std::initializer_list<const char *> keys) {
    if (!j.is_object()) { throw InvalidInput(std::string("config: '") + block + "' must be an object"); }
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto &[key, _] : j.items()) {
        if (!allowed.count(key)) { throw InvalidInput(std::string("config: unknown key '") + key + "' in " + block); }
    }
}

template <typename T>
void read(const json &j, const char *key, T &out) {
    if (!j.contains(key) || j.at(key).is_null()) { return; }
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw InvalidInput(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

template <typename T>
void read_positive(const json &j, const char *key, T &out) {
    read(j, key, out);
    if (!(out > T{0})) { throw InvalidInput(std::string("config: '") + key + "' must be positive"); }
}

WeightedDataset points_from_json(const json &j) {
    if (!j.is_array() || j.empty()) { throw InvalidInput("config: contaminant must be a non-empty array of points"); }
    std::vector<Sample> out;
    bool any_w = false;
    for (const auto &p : j) {
        allow_keys(p, "contaminant point", {"x", "y", "w"});
        Sample s;
        std::vector<double> x;
        read(p, "x", x);
        if (x.empty()) { throw InvalidInput("config: contaminant point needs x"); }
        s.x = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
        if (!p.contains("y")) { throw InvalidInput("config: contaminant point needs y"); }
        read(p, "y", s.y);
        if (p.contains("w")) {
            read(p, "w", s.w);
            any_w = true;
        }
        out.push_back(std::move(s));
    }
    if (!any_w) {
        for (auto &s : out) { s.w = 1.0 / static_cast<double>(out.size()); }
    }
    return WeightedDataset(std::move(out));
}

void parse_train(const json &j, RunConfig &cfg) {
    allow_keys(j, "train",
               {"lambda", "max_iters", "grad_tol", "max_sweeps", "gap_tol", "pair_subsample", "pair_mode", "solver",
                "line_search"});
    TrainConfig &t = cfg.train;
    read_positive(j, "lambda", t.lambda);
    read_positive(j, "max_iters", t.max_iters);
    read_positive(j, "grad_tol", t.grad_tol);
    read_positive(j, "max_sweeps", t.max_sweeps);
    read_positive(j, "gap_tol", t.gap_tol);
    if (j.contains("pair_subsample") && !j.at("pair_subsample").is_null()) {
        std::size_t s = 0;
        read_positive(j, "pair_subsample", s);
        t.pair_subsample = s;
    }
    std::string mode = "v_statistic";
    read(j, "pair_mode", mode);
    if (mode == "v_statistic") {
        t.pair_mode = PairMode::v_statistic;
    } else if (mode == "u_statistic") {
        t.pair_mode = PairMode::u_statistic;
    } else {
        throw InvalidInput("config: pair_mode must be v_statistic or u_statistic");
    }
    std::string solver = "auto";
    read(j, "solver", solver);
    if (solver != "auto" && solver != "ls_closed_form") {
        throw InvalidInput("config: train.solver must be auto or ls_closed_form");
    }
    cfg.ls_closed_form = solver == "ls_closed_form";
    std::string ls = "armijo";
    read(j, "line_search", ls);
    if (ls != "armijo") { throw InvalidInput("config: only the armijo line search is available"); }
    t.validate();
}

void parse_data(const json &j, SyntheticSpec &d) {
    allow_keys(j, "data", {"n", "d", "truth", "noise", "noise_scale", "truncation"});
    read(j, "n", d.n);
    read(j, "d", d.d);
    std::string truth = to_string(d.truth), noise = to_string(d.noise);
    read(j, "truth", truth);
    read(j, "noise", noise);
    d.truth = truth_from_string(truth);
    d.noise = noise_from_string(noise);
    read(j, "noise_scale", d.noise_scale);
    read(j, "truncation", d.truncation);
    d.validate();
    if (d.n > kMaxSamples) {
        throw InvalidInput("config: data.n = " + std::to_string(d.n) + " exceeds the cap of " +
                           std::to_string(kMaxSamples) + " samples (pair Gram is O(n^4))");
    }
}

void check_epsilons(const std::vector<double> &eps, const char *what, bool allow_zero) {
    for (double e : eps) {
        if (!(e < 1.0) || (allow_zero ? !(e >= 0.0) : !(e > 0.0))) {
            throw InvalidInput(std::string("config: ") + what + " must lie in " + (allow_zero ? "[0, 1)" : "(0, 1)"));
        }
    }
}

}  // namespace

const PairKernel &RunConfig::require_kernel() const {
    if (!kernel) { throw InvalidInput("config: a 'kernel' block is required"); }
    return *kernel;
}

const PairwiseLoss &RunConfig::require_loss() const {
    if (!loss) { throw InvalidInput("config: a 'loss' block is required"); }
    return *loss;
}

std::string sha256_hex(const std::string &bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw NumericError("sha256 failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::string canonical_json(const json &j) { return j.dump(); }

RunConfig parse_run_config(const json &j) {
    allow_keys(j, "config",
               {"format_version", "seed", "kernel", "loss", "train", "data", "contaminant", "influence", "bias_sweep",
                "consistency", "bootstrap", "qualrobust"});
    RunConfig cfg;
    cfg.raw = j;
    cfg.hash = sha256_hex(canonical_json(j));
    if (j.contains("format_version")) {
        int v = 0;
        read(j, "format_version", v);
        if (v != kFormatVersion) { throw InvalidInput("config: format_version " + std::to_string(v) + " is not supported"); }
    }
    read(j, "seed", cfg.seed);
    if (j.contains("kernel")) { cfg.kernel = kernel_from_json(j.at("kernel")); }
    if (j.contains("loss")) { cfg.loss = loss_from_json(j.at("loss")); }
    if (j.contains("train")) { parse_train(j.at("train"), cfg); }
    if (j.contains("data")) { parse_data(j.at("data"), cfg.data); }
    if (j.contains("contaminant")) { cfg.contaminant = points_from_json(j.at("contaminant")); }

    if (j.contains("influence")) {
        const json &b = j.at("influence");
        allow_keys(b, "influence", {"x0", "y0", "fd_epsilons"});
        if (b.contains("x0")) {
            std::vector<double> x;
            read(b, "x0", x);
            if (x.empty()) { throw InvalidInput("config: influence.x0 must be non-empty"); }
            cfg.x0 = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
            if (!b.contains("y0")) { throw InvalidInput("config: influence.y0 is required with x0"); }
        }
        read(b, "y0", cfg.y0);
        read(b, "fd_epsilons", cfg.fd_epsilons);
        check_epsilons(cfg.fd_epsilons, "influence.fd_epsilons", false);
    }
    if (j.contains("bias_sweep")) {
        const json &b = j.at("bias_sweep");
        allow_keys(b, "bias_sweep", {"epsilons"});
        read(b, "epsilons", cfg.bias_epsilons);
        check_epsilons(cfg.bias_epsilons, "bias_sweep.epsilons", true);
    }

    cfg.consistency.data = cfg.data;
    cfg.consistency.train = cfg.train;
    if (j.contains("consistency")) {
        const json &b = j.at("consistency");
        allow_keys(b, "consistency",
                   {"n_grid", "lambda_c", "lambda_exponent", "seeds", "test_pairs", "bayes_t_max", "bayes_t_steps"});
        auto &c = cfg.consistency;
        read(b, "n_grid", c.n_grid);
        read_positive(b, "lambda_c", c.lambda_c);
        read(b, "lambda_exponent", c.lambda_exponent);
        read_positive(b, "seeds", c.seeds);
        read_positive(b, "test_pairs", c.test_pairs);
        read_positive(b, "bayes_t_max", c.bayes_t_max);
        read_positive(b, "bayes_t_steps", c.bayes_t_steps);
        if (c.lambda_exponent < 0.0) { throw InvalidInput("config: consistency.lambda_exponent must be >= 0"); }
    }
    for (std::size_t n : cfg.consistency.n_grid) {
        if (n < 2 || n > kMaxSamples) { throw InvalidInput("config: consistency n_grid entries must lie in [2, 100]"); }
    }

    cfg.bootstrap.data = cfg.data;
    cfg.bootstrap.train = cfg.train;
    if (j.contains("bootstrap")) {
        const json &b = j.at("bootstrap");
        allow_keys(b, "bootstrap", {"n_grid", "reps", "base_samples", "seeds"});
        read(b, "n_grid", cfg.bootstrap.n_grid);
        read_positive(b, "reps", cfg.bootstrap.reps);
        read_positive(b, "base_samples", cfg.bootstrap.base_samples);
        read_positive(b, "seeds", cfg.bootstrap.seeds);
    }
    for (std::size_t n : cfg.bootstrap.n_grid) {
        if (n < 2 || n > kMaxSamples) { throw InvalidInput("config: bootstrap n_grid entries must lie in [2, 100]"); }
    }

    cfg.qualrobust.data = cfg.data;
    cfg.qualrobust.train = cfg.train;
    if (j.contains("qualrobust")) {
        const json &b = j.at("qualrobust");
        allow_keys(b, "qualrobust", {"delta_grid", "outlier_x", "outlier_y", "reps", "seeds"});
        read(b, "delta_grid", cfg.qualrobust.delta_grid);
        read(b, "outlier_x", cfg.qualrobust.outlier_x);
        read(b, "outlier_y", cfg.qualrobust.outlier_y);
        read_positive(b, "reps", cfg.qualrobust.reps);
        read_positive(b, "seeds", cfg.qualrobust.seeds);
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path &path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error &e) {
        throw InvalidInput("config " + path.string() + ": " + e.what());
    }
    return parse_run_config(j);
}

}  // namespace pairlearn
