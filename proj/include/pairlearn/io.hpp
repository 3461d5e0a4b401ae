#pragma once

#include "pairlearn/experiments.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace pairlearn {

/// Version stamped into every model and report file.
inline constexpr int kFormatVersion = 1;

/// %.17g: round-trips every finite double.
[[nodiscard]] std::string format_double(double v);

/// Finite values as numbers, others as the strings "inf", "-inf", "nan".
[[nodiscard]] nlohmann::json json_number(double v);
[[nodiscard]] double number_from_json(const nlohmann::json &j);

/// CSV with header x1,...,xd,y[,w]. Lines starting with '#' are comments.
/// Without a w column the weights are uniform.
[[nodiscard]] WeightedDataset read_dataset_csv(const std::filesystem::path &path);
[[nodiscard]] WeightedDataset parse_dataset_csv(const std::string &text);
[[nodiscard]] std::string dataset_csv(const WeightedDataset &data, bool with_weights,
                                      const std::vector<std::string> &comments = {});

[[nodiscard]] nlohmann::json kernel_to_json(const PairKernel &k);
[[nodiscard]] PairKernel kernel_from_json(const nlohmann::json &j);
[[nodiscard]] nlohmann::json loss_to_json(const PairwiseLoss &L);
[[nodiscard]] PairwiseLoss loss_from_json(const nlohmann::json &j);

[[nodiscard]] nlohmann::json model_to_json(const RplModel &f);
[[nodiscard]] RplModel model_from_json(const nlohmann::json &j);
[[nodiscard]] RplModel read_model_json(const std::filesystem::path &path);

/// CSV of the report rows with '#' comment lines carrying the config hash and seed.
[[nodiscard]] std::string report_csv(const ExperimentReport &rep, const std::string &config_hash);
[[nodiscard]] nlohmann::json report_json(const ExperimentReport &rep, const std::string &config_hash);

[[nodiscard]] std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &text);

}  // namespace pairlearn
