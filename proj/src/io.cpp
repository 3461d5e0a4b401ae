#include "pairlearn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pairlearn {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) { out.push_back(cur); }
    if (!line.empty() && line.back() == sep) { out.emplace_back(); }
    return out;
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) { return {}; }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string &s, std::size_t line) {
    const std::string t = trim(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (t.empty() || used != t.size()) {
        throw InvalidInput("dataset csv line " + std::to_string(line) + ": cannot parse '" + t + "'");
    }
    return v;
}

json vector_json(const Eigen::VectorXd &v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) { a.push_back(json_number(v[i])); }
    return a;
}

Eigen::VectorXd vector_from_json(const json &j) {
    if (!j.is_array()) { throw InvalidInput("expected a JSON array of numbers"); }
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) { v[static_cast<Eigen::Index>(i)] = number_from_json(j[i]); }
    return v;
}

template <typename T>
T field(const json &j, const char *key) {
    if (!j.contains(key)) { throw InvalidInput(std::string("missing field '") + key + "'"); }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw InvalidInput(std::string("field '") + key + "': " + e.what());
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json json_number(double v) {
    if (std::isfinite(v)) { return v; }
    if (std::isnan(v)) { return "nan"; }
    return v > 0 ? "inf" : "-inf";
}

double number_from_json(const json &j) {
    if (j.is_number()) { return j.get<double>(); }
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") { return kInfinity; }
        if (s == "-inf") { return -kInfinity; }
        if (s == "nan") { return std::nan(""); }
    }
    throw InvalidInput("expected a number, got " + j.dump());
}

WeightedDataset parse_dataset_csv(const std::string &text) {
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    std::vector<Sample> samples;
    bool weighted = false;
    Eigen::Index d = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') { continue; }
        if (header.empty()) {
            header = split(t, ',');
            for (auto &h : header) { h = trim(h); }
            weighted = !header.empty() && header.back() == "w";
            d = static_cast<Eigen::Index>(header.size()) - (weighted ? 2 : 1);
            if (d < 1) { throw InvalidInput("dataset csv: header needs x1..xd,y[,w]"); }
            for (Eigen::Index c = 0; c < d; ++c) {
                if (header[static_cast<std::size_t>(c)] != "x" + std::to_string(c + 1)) {
                    throw InvalidInput("dataset csv: header column " + std::to_string(c + 1) + " must be x" +
                                       std::to_string(c + 1));
                }
            }
            if (header[static_cast<std::size_t>(d)] != "y") { throw InvalidInput("dataset csv: missing y column"); }
            continue;
        }
        const auto cells = split(t, ',');
        if (cells.size() != header.size()) {
            throw InvalidInput("dataset csv line " + std::to_string(lineno) + ": expected " +
                               std::to_string(header.size()) + " fields, got " + std::to_string(cells.size()));
        }
        Sample s;
        s.x.resize(d);
        for (Eigen::Index c = 0; c < d; ++c) { s.x[c] = parse_number(cells[static_cast<std::size_t>(c)], lineno); }
        s.y = parse_number(cells[static_cast<std::size_t>(d)], lineno);
        s.w = weighted ? parse_number(cells.back(), lineno) : 0.0;
        samples.push_back(std::move(s));
    }
    if (samples.empty()) { throw InvalidInput("dataset csv: no samples"); }
    if (!weighted) {
        const double w = 1.0 / static_cast<double>(samples.size());
        for (auto &s : samples) { s.w = w; }
    }
    return WeightedDataset(std::move(samples));
}

WeightedDataset read_dataset_csv(const std::filesystem::path &path) { return parse_dataset_csv(read_text_file(path)); }

std::string dataset_csv(const WeightedDataset &data, bool with_weights, const std::vector<std::string> &comments) {
    std::ostringstream os;
    for (const auto &c : comments) { os << "# " << c << "\n"; }
    for (Eigen::Index c = 0; c < data.dim(); ++c) { os << "x" << c + 1 << ","; }
    os << "y" << (with_weights ? ",w" : "") << "\n";
    for (const auto &s : data.samples()) {
        for (Eigen::Index c = 0; c < s.x.size(); ++c) { os << format_double(s.x[c]) << ","; }
        os << format_double(s.y);
        if (with_weights) { os << "," << format_double(s.w); }
        os << "\n";
    }
    return os.str();
}

json kernel_to_json(const PairKernel &k) {
    json j{{"kind", to_string(k.kind())}};
    switch (k.kind()) {
        case KernelKind::rbf_concat: j["gamma"] = k.gamma(); break;
        case KernelKind::linear_concat: j["domain_bound"] = k.domain_bound(); break;
        case KernelKind::ranking_difference:
            j["base"] = to_string(k.base());
            if (k.base() == BaseKernel::rbf) {
                j["gamma"] = k.gamma();
            } else {
                j["domain_bound"] = k.domain_bound();
            }
            break;
    }
    return j;
}

PairKernel kernel_from_json(const json &j) {
    if (!j.is_object()) { throw InvalidInput("kernel spec must be an object"); }
    for (const auto &[key, _] : j.items()) {
        if (key != "kind" && key != "gamma" && key != "domain_bound" && key != "base") {
            throw InvalidInput("kernel spec: unknown key '" + key + "'");
        }
    }
    const KernelKind kind = kernel_kind_from_string(field<std::string>(j, "kind"));
    const double gamma = j.contains("gamma") ? field<double>(j, "gamma") : 1.0;
    const double bound = j.contains("domain_bound") ? field<double>(j, "domain_bound") : 1.0;
    switch (kind) {
        case KernelKind::rbf_concat: return PairKernel::rbf_concat(gamma);
        case KernelKind::linear_concat: return PairKernel::linear_concat(bound);
        case KernelKind::ranking_difference:
            return PairKernel::ranking_difference(
                base_kernel_from_string(j.contains("base") ? field<std::string>(j, "base") : "linear"), gamma, bound);
    }
    throw InvalidInput("kernel spec: bad kind");
}

json loss_to_json(const PairwiseLoss &L) {
    json j{{"kind", to_string(L.kind())}};
    if (L.kind() != LossKind::ls_rank) { j["phi"] = to_string(L.phi()); }
    if (L.kind() == LossKind::phi_rank_smoothed) { j["sigma"] = L.sigma(); }
    return j;
}

PairwiseLoss loss_from_json(const json &j) {
    if (!j.is_object()) { throw InvalidInput("loss spec must be an object"); }
    for (const auto &[key, _] : j.items()) {
        if (key != "kind" && key != "phi" && key != "sigma") {
            throw InvalidInput("loss spec: unknown key '" + key + "'");
        }
    }
    const LossKind kind = loss_kind_from_string(field<std::string>(j, "kind"));
    if (kind == LossKind::ls_rank) {
        if (j.contains("phi") || j.contains("sigma")) { throw InvalidInput("loss spec: ls_rank takes no phi or sigma"); }
        return PairwiseLoss::ls_rank();
    }
    const Phi phi = phi_from_string(field<std::string>(j, "phi"));
    if (kind == LossKind::phi_rank) {
        if (j.contains("sigma")) { throw InvalidInput("loss spec: sigma applies to phi_rank_smoothed only"); }
        return PairwiseLoss::phi_rank(phi);
    }
    return PairwiseLoss::phi_rank_smoothed(phi, j.contains("sigma") ? field<double>(j, "sigma") : 0.1);
}

json model_to_json(const RplModel &f) {
    json pts = json::array();
    for (const auto &z : f.expansion_points()) { pts.push_back(json::array({vector_json(z.first), vector_json(z.second)})); }
    return json{{"format_version", kFormatVersion},
                {"kernel", kernel_to_json(f.kernel())},
                {"lambda", f.lambda()},
                {"loss_tag", f.loss_tag()},
                {"dim", f.dim()},
                {"expansion_points", std::move(pts)},
                {"coefficients", vector_json(f.coefficients())}};
}

RplModel model_from_json(const json &j) {
    if (!j.is_object()) { throw InvalidInput("model must be a JSON object"); }
    const int version = field<int>(j, "format_version");
    if (version != kFormatVersion) {
        throw InvalidInput("model format_version " + std::to_string(version) + " is not supported");
    }
    const auto dim = field<Eigen::Index>(j, "dim");
    std::vector<PairPoint> pts;
    for (const auto &p : field<json>(j, "expansion_points")) {
        if (!p.is_array() || p.size() != 2) { throw InvalidInput("model: expansion point must be [first, second]"); }
        pts.push_back({vector_from_json(p[0]), vector_from_json(p[1])});
    }
    return {kernel_from_json(field<json>(j, "kernel")), field<double>(j, "lambda"),
            field<std::string>(j, "loss_tag"), dim, std::move(pts), vector_from_json(field<json>(j, "coefficients"))};
}

RplModel read_model_json(const std::filesystem::path &path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error &e) {
        throw InvalidInput("model file " + path.string() + ": " + e.what());
    }
    // model files written by `train` nest the model next to diagnostics
    return model_from_json(j.contains("model") ? j.at("model") : j);
}

std::string report_csv(const ExperimentReport &rep, const std::string &config_hash) {
    std::ostringstream os;
    os << "# experiment=" << rep.name << "\n";
    os << "# config_hash=" << config_hash << "\n";
    os << "# seed=" << rep.seed << "\n";
    for (std::size_t c = 0; c < rep.columns.size(); ++c) { os << (c ? "," : "") << rep.columns[c]; }
    os << "\n";
    for (const auto &row : rep.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) { os << (c ? "," : "") << format_double(row[c]); }
        os << "\n";
    }
    return os.str();
}

json report_json(const ExperimentReport &rep, const std::string &config_hash) {
    json checks = json::array();
    for (const auto &c : rep.checks) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"measured", json_number(c.measured)},
                          {"reference", json_number(c.reference)}});
    }
    json stats = json::object();
    for (const auto &[k, v] : rep.stats) { stats[k] = json_number(v); }
    return json{{"format_version", kFormatVersion},
                {"experiment", rep.name},
                {"config_hash", config_hash},
                {"seed", rep.seed},
                {"columns", rep.columns},
                {"row_count", rep.rows.size()},
                {"models_trained", rep.models_trained},
                {"norm_bound_violations", rep.norm_bound_violations},
                {"checks", std::move(checks)},
                {"stats", std::move(stats)},
                {"all_passed", rep.all_passed()}};
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) { throw InvalidInput("cannot open " + path.string()); }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) { throw InvalidInput("cannot write " + path.string()); }
    out << text;
    if (!out.flush()) { throw InvalidInput("write failed for " + path.string()); }
}

}  // namespace pairlearn
