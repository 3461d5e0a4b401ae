#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "pairlearn/config.hpp"
#include "pairlearn/io.hpp"

#include <cstdlib>
#include <filesystem>

using namespace pairlearn;
using namespace pairlearn::testing;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kConfigs = PAIRLEARN_TEST_CONFIGS;
const fs::path kWork = fs::path(PAIRLEARN_TEST_WORK) / "io_work";

int run_cli(const std::string &args) {
    const std::string cmd = std::string("\"") + PAIRLEARN_CLI + "\" " + args + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path fresh_dir(const std::string &name) {
    const fs::path d = kWork / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string q(const fs::path &p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("double formatting round-trips") {
    Rng rng(81);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.normal() * std::pow(10.0, rng.uniform(-300.0, 300.0));
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(number_from_json(json_number(kInfinity)) == kInfinity);
    CHECK(number_from_json(json_number(-kInfinity)) == -kInfinity);
    CHECK(std::isnan(number_from_json(json_number(std::nan("")))));
    CHECK(json_number(1.5) == json(1.5));
}

TEST_CASE("dataset csv round-trip") {
    Rng rng(82);
    const auto D = random_weighted(rng, 9, 3);
    for (bool weights : {true, false}) {
        const auto text = dataset_csv(D, weights, {"a comment"});
        const auto back = parse_dataset_csv(text);
        REQUIRE(back.size() == D.size());
        for (std::size_t i = 0; i < D.size(); ++i) {
            CHECK(back[i].x == D[i].x);
            CHECK(back[i].y == D[i].y);
            CHECK(back[i].w == (weights ? D[i].w : 1.0 / 9.0));
        }
    }
    const auto small = parse_dataset_csv("# c\nx1,x2,y\n0.5,1,2\n\n1,2,3\n");
    CHECK(small.size() == 2);
    CHECK(small.dim() == 2);
    CHECK_THROWS_AS((void)parse_dataset_csv("x2,y\n1,2\n"), InvalidInput);
    CHECK_THROWS_AS((void)parse_dataset_csv("x1,y\n1\n"), InvalidInput);
    CHECK_THROWS_AS((void)parse_dataset_csv("x1,y\n1,abc\n"), InvalidInput);
    CHECK_THROWS_AS((void)parse_dataset_csv("x1,y\n1,nan\n"), InvalidInput);
    CHECK_THROWS_AS((void)parse_dataset_csv("x1,y,w\n1,2,0.3\n"), InvalidInput);
}

TEST_CASE("kernel, loss and model json round-trip") {
    for (const auto &k : {PairKernel::rbf_concat(0.3), PairKernel::linear_concat(2.0),
                          PairKernel::ranking_difference(BaseKernel::linear, 1.0, 1.5),
                          PairKernel::ranking_difference(BaseKernel::rbf, 0.7)}) {
        CHECK(kernel_from_json(kernel_to_json(k)) == k);
    }
    for (const auto &L : {PairwiseLoss::phi_rank(Phi::hinge), PairwiseLoss::phi_rank_smoothed(Phi::logistic2, 0.25),
                          PairwiseLoss::ls_rank()}) {
        CHECK(loss_from_json(loss_to_json(L)) == L);
    }
    CHECK_THROWS_AS((void)kernel_from_json(json{{"kind", "rbf_concat"}, {"gama", 1.0}}), InvalidInput);
    CHECK_THROWS_AS((void)loss_from_json(json{{"kind", "ls_rank"}, {"sigma", 1.0}, {"extra", 1}}), InvalidInput);

    Rng rng(83);
    const auto f = random_model(rng, PairKernel::rbf_concat(0.9), 12, 2);
    const auto j = model_to_json(f);
    CHECK(j.at("format_version") == kFormatVersion);
    const auto g = model_from_json(json::parse(j.dump()));
    CHECK(g.coefficients() == f.coefficients());
    for (int t = 0; t < 100; ++t) {
        const auto z = random_pair(rng, 2);
        CHECK(evaluate(g, z.first, z.second) == evaluate(f, z.first, z.second));
    }
    auto bad = j;
    bad["format_version"] = 99;
    CHECK_THROWS_AS((void)model_from_json(bad), InvalidInput);
}

TEST_CASE("run config parsing") {
    const auto base = json::parse(R"({"seed": 3, "kernel": {"kind": "rbf_concat", "gamma": 1.0},
        "loss": {"kind": "phi_rank_smoothed", "phi": "logistic2"}, "train": {"lambda": 0.2},
        "bootstrap": {"reps": 6, "base_samples": 2}})");
    const auto cfg = parse_run_config(base);
    CHECK(cfg.seed == 3);
    CHECK(cfg.train.lambda == 0.2);
    CHECK(cfg.bootstrap.reps == 6);
    CHECK(cfg.bootstrap.base_samples == 2);
    CHECK(cfg.bootstrap.train.lambda == 0.2);
    CHECK(cfg.hash.size() == 64);
    // key order and whitespace do not change the hash
    const auto reordered = json::parse(R"({"train": {"lambda": 0.2}, "bootstrap": {"base_samples": 2, "reps": 6},
        "loss": {"phi": "logistic2", "kind": "phi_rank_smoothed"}, "kernel": {"gamma": 1.0, "kind": "rbf_concat"},
        "seed": 3})");
    CHECK(parse_run_config(reordered).hash == cfg.hash);
    auto other = base;
    other["seed"] = 4;
    CHECK(parse_run_config(other).hash != cfg.hash);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

    for (const char *bad : {R"({"sed": 1})", R"({"train": {"lamda": 1}})", R"({"data": {"n": 101}})",
                            R"({"format_version": 2})", R"({"train": {"lambda": -1}})",
                            R"({"bias_sweep": {"epsilons": [1.0]}})", R"({"consistency": {"nope": 1}})",
                            R"({"contaminant": [{"x": [1], "y": 1, "z": 2}]})", R"({"train": {"solver": "sgd"}})"}) {
        INFO(bad);
        CHECK_THROWS_AS((void)parse_run_config(json::parse(bad)), InvalidInput);
    }
    CHECK_THROWS_AS((void)parse_run_config(json::parse("{}")).require_kernel(), InvalidInput);
}

TEST_CASE("report serialization") {
    ExperimentReport rep;
    rep.name = "demo";
    rep.seed = 5;
    rep.columns = {"a", "b"};
    rep.rows = {{1.0, 0.1}, {2.0, kInfinity}};
    rep.checks = {{"ok", true, 1.0, 2.0}};
    const auto csv = report_csv(rep, "h");
    CHECK(csv.find("# config_hash=h\n") != std::string::npos);
    CHECK(csv.find("a,b\n1,0.10000000000000001\n2,inf\n") != std::string::npos);
    const auto j = report_json(rep, "h");
    CHECK(j.at("all_passed") == true);
    CHECK(j.at("seed") == 5);
}

TEST_CASE("cli gen-data") {
    const auto out = fresh_dir("gen");
    REQUIRE(run_cli("gen-data --config " + q(kConfigs / "gen.json") + " --out " + q(out)) == 0);
    const auto text = read_text_file(out / "data.csv");
    const auto D = parse_dataset_csv(text);
    CHECK(D.size() == 3);
    CHECK(D.dim() == 2);
    CHECK(text.find("x1,x2,y\n") != std::string::npos);
    // the seed flag overrides the config
    REQUIRE(run_cli("gen-data --config " + q(kConfigs / "gen.json") + " --seed 5 --out " + q(out / "s5")) == 0);
    CHECK(read_text_file(out / "s5" / "data.csv") != text);
}

TEST_CASE("cli train on the two-point least-squares fixture") {
    const auto out = fresh_dir("ls");
    write_text_file(out / "d.csv", "x1,y\n0,0\n1,1\n");
    REQUIRE(run_cli("train --config " + q(kConfigs / "ls_fixture.json") + " --data " + q(out / "d.csv") + " --out " +
                    q(out)) == 0);
    const auto f = read_model_json(out / "model.json");
    // (lambda * 4 I + G) alpha = dy over pairs (0,0), (1,0), (0,1), (1,1)
    Eigen::Matrix4d G;
    G << 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 1, 0, 1, 1, 2;
    const Eigen::Vector4d dy(0.0, 1.0, -1.0, 0.0);
    const Eigen::Vector4d alpha = (2.0 * Eigen::Matrix4d::Identity() + G).fullPivLu().solve(dy);
    REQUIRE(f.size() == 4);
    CHECK((f.coefficients() - alpha).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("cli train with constant labels gives the zero model") {
    const auto out = fresh_dir("const");
    write_text_file(out / "d.csv", "x1,x2,y\n0.1,0.2,1\n-0.3,0.5,1\n0.7,-0.1,1\n0.2,0.2,1\n");
    REQUIRE(run_cli("train --config " + q(kConfigs / "train.json") + " --data " + q(out / "d.csv") + " --out " +
                    q(out)) == 0);
    CHECK(h_norm(read_model_json(out / "model.json")) <= 1e-8);
}

TEST_CASE("cli train, warm start and saved-model predictions") {
    const auto out = fresh_dir("train");
    REQUIRE(run_cli("train --config " + q(kConfigs / "train.json") + " --out " + q(out)) == 0);
    const auto j = json::parse(read_text_file(out / "model.json"));
    CHECK(j.at("all_passed") == true);
    CHECK(j.at("diagnostics").at("norm_bounds").size() == 7);
    const auto f = read_model_json(out / "model.json");

    REQUIRE(run_cli("train --config " + q(kConfigs / "train.json") + " --model " + q(out / "model.json") + " --out " +
                    q(out / "warm")) == 0);
    const auto g = read_model_json(out / "warm" / "model.json");
    Rng rng(84);
    for (int t = 0; t < 100; ++t) {
        const auto z = random_pair(rng, 2);
        CHECK(std::abs(evaluate(g, z.first, z.second) - evaluate(f, z.first, z.second)) <= 1e-9);
    }
}

TEST_CASE("cli errors") {
    const auto out = fresh_dir("errors");
    CHECK(run_cli("train --config " + q(kConfigs / "unknown_key.json") + " --out " + q(out)) == 2);
    CHECK(run_cli("influence --config " + q(kConfigs / "hinge_influence.json") + " --out " + q(out)) == 2);
    CHECK(run_cli("influence --config " + q(out / "missing.json")) != 0);
    CHECK(run_cli("frobnicate --config " + q(kConfigs / "gen.json")) != 0);
    // bias-sweep without a contaminant
    CHECK(run_cli("bias-sweep --config " + q(kConfigs / "train.json") + " --out " + q(out)) == 2);
}
