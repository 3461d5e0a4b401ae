#pragma once

#include "pairlearn/experiments.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace pairlearn {

/// Parsed run configuration. Every block is optional in the file; a command
/// complains when a block it needs is missing. Unknown keys are rejected.
struct RunConfig {
    nlohmann::json raw;
    std::string hash;  // SHA-256 hex of the canonical JSON dump
    std::uint64_t seed = 0;

    std::optional<PairKernel> kernel;
    std::optional<PairwiseLoss> loss;
    TrainConfig train;
    bool ls_closed_form = false;  // train.solver == "ls_closed_form"
    SyntheticSpec data;

    // influence
    std::optional<InputPoint> x0;
    double y0 = 0.0;
    std::optional<WeightedDataset> contaminant;
    std::vector<double> fd_epsilons{0.04, 0.02, 0.01};

    // bias-sweep
    std::vector<double> bias_epsilons{0.0, 0.01, 0.05, 0.1, 0.25, 0.5};

    ConsistencySpec consistency;
    BootstrapSpec bootstrap;
    QualRobustSpec qualrobust;

    [[nodiscard]] const PairKernel &require_kernel() const;
    [[nodiscard]] const PairwiseLoss &require_loss() const;
};

[[nodiscard]] std::string sha256_hex(const std::string &bytes);

/// Canonical form: keys sorted, no whitespace, shortest round-trip numbers.
[[nodiscard]] std::string canonical_json(const nlohmann::json &j);

[[nodiscard]] RunConfig parse_run_config(const nlohmann::json &j);
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path &path);

}  // namespace pairlearn
