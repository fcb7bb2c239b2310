#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ripkit/error.hpp"
#include "ripkit/json_io.hpp"
#include "ripkit/runner.hpp"

using namespace ripkit;
namespace fs = std::filesystem;

namespace {

template <typename F>
std::string validation_message(F&& f) {
    try {
        f();
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

ExperimentConfig parse_config(const std::string& text) {
    return config_from_json(Json::parse(text));
}

ExperimentConfig diagnose_config() {
    return parse_config(R"({
        "command": "diagnose", "seed": 7,
        "ensemble": {"kind": "simplex_etf", "m": 3, "n": 4},
        "s": 1, "rip_trials": 50
    })");
}

ExperimentConfig recover_config() {
    return parse_config(R"({
        "command": "recover", "seed": 11,
        "ensemble": {"kind": "gaussian", "m": 8, "n": 16,
                     "normalize_columns": true},
        "s": 1, "trials": 4, "eta": 0
    })");
}

ExperimentConfig manifold_config() {
    return parse_config(R"({
        "command": "manifold", "seed": 3,
        "ensemble": {"kind": "gaussian"},
        "manifold": {"m": 4, "mode": "shared",
                     "dataset": {"count": 10, "dim": 20,
                                 "depth": 2, "decay": 0.5}}
    })");
}

ExperimentConfig mp_config() {
    return parse_config(R"({
        "command": "mp-check", "seed": 5,
        "ensemble": {"kind": "gaussian", "m": 30, "n": 120},
        "trials": 2
    })");
}

Json envelope_for(const ExperimentConfig& c) {
    Json env = Json::object();
    env["tool"] = "ripkit";
    env["version"] = "0.1.0";
    env["command"] = c.command;
    env["config"] = config_to_json(c);
    env["payload"] = run_payload(c);
    return env;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing fills defaults and rejects unknown keys") {
    const ExperimentConfig c = parse_config(R"({"seed": 9})");
    CHECK(c.command.empty());
    CHECK(c.seed == 9);
    CHECK(c.out_dir == ".");
    CHECK(c.ensemble.kind == EnsembleKind::gaussian);
    CHECK(!c.ensemble_seed_explicit);
    CHECK(c.s == 1);
    CHECK(c.trials == 1);
    CHECK(c.eta == 0.0);
    CHECK(c.rip_trials == 2000);
    CHECK(c.manifold.mode == CompressionMode::shared);
    CHECK(!c.manifold.radius_grid.has_value());
    CHECK(c.manifold.dataset.count == 50);
    CHECK(c.manifold.dataset.dim == 100);

    CHECK(validation_message([] { parse_config(R"({"tirals": 3})"); })
              .find("tirals") != std::string::npos);
    CHECK(validation_message([] {
              parse_config(R"({"ensemble": {"rows": 3}})");
          }).find("rows") != std::string::npos);
    CHECK_THROWS_AS(parse_config(R"([1, 2])"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"command": "solve"})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"eta": -0.5})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"seed": -4})"), ValidationError);
    CHECK_THROWS_AS(
        parse_config(R"({"manifold": {"radius_grid": [1.0, -2.0]}})"),
        ValidationError);
}

TEST_CASE("validation names the failing field and runs before any work") {
    ExperimentConfig c = diagnose_config();
    c.s = 9;
    CHECK(validation_message([&] { (void)run_payload(c); }).find("'s'") !=
          std::string::npos);

    ExperimentConfig r = recover_config();
    r.trials = 0;
    CHECK(validation_message([&] { (void)run_payload(r); }).find("trials") !=
          std::string::npos);

    ExperimentConfig m = manifold_config();
    m.manifold.m = 100;
    CHECK(validation_message([&] { (void)run_payload(m); })
              .find("manifold.m") != std::string::npos);
    m = manifold_config();
    m.ensemble.kind = EnsembleKind::simplex_etf;
    CHECK(validation_message([&] { (void)run_payload(m); })
              .find("ensemble.kind") != std::string::npos);

    ExperimentConfig p = mp_config();
    p.ensemble.m = 200;
    p.ensemble.n = 100;
    CHECK(validation_message([&] { (void)run_payload(p); })
              .find("ensemble.m") != std::string::npos);

    ExperimentConfig unknown;
    unknown.command = "solve";
    CHECK_THROWS_AS((void)run_payload(unknown), ValidationError);
    unknown.command.clear();
    CHECK_THROWS_AS((void)run_payload(unknown), ValidationError);
}

TEST_CASE("payloads are deterministic and reproducible from the echo") {
    const std::vector<ExperimentConfig> configs = {
        diagnose_config(), recover_config(), manifold_config(), mp_config()};
    for (const ExperimentConfig& c : configs) {
        CAPTURE(c.command);
        const std::string first = run_payload(c).dump();
        CHECK(run_payload(c).dump() == first);
        const ExperimentConfig echoed = config_from_json(config_to_json(c));
        CHECK(run_payload(echoed).dump() == first);
    }
}

TEST_CASE("changing the master seed changes the payload") {
    ExperimentConfig c = mp_config();
    const std::string base = run_payload(c).dump();
    c.seed += 1;
    CHECK(run_payload(c).dump() != base);

    ExperimentConfig m = manifold_config();
    const std::string mbase = run_payload(m).dump();
    m.seed += 1;
    CHECK(run_payload(m).dump() != mbase);
}

TEST_CASE("an explicit ensemble seed pins the matrix draw") {
    ExperimentConfig a = recover_config();
    a.ensemble.seed = 424242;
    a.ensemble_seed_explicit = true;
    ExperimentConfig b = a;
    b.seed += 17;  // master seed differs, matrix seed does not
    const Json pa = run_payload(a);
    const Json pb = run_payload(b);
    CHECK(pa.at("matrix").dump() == pb.at("matrix").dump());
    CHECK(pa.at("summary").dump() != pb.at("summary").dump());
}

TEST_CASE("run_experiment writes the report plus bulk files and verifies") {
    const struct {
        ExperimentConfig config;
        std::size_t expected_files;
    } cases[] = {
        {diagnose_config(), 1},
        {recover_config(), 2},
        {manifold_config(), 2},
        {mp_config(), 2},
    };
    for (const auto& [config, expected_files] : cases) {
        CAPTURE(config.command);
        TempDir dir("tmp-runner-" + config.command);
        ExperimentConfig c = config;
        c.out_dir = dir.path.string();
        const RunArtifacts art = run_experiment(c);
        REQUIRE(art.files.size() == expected_files);
        for (const std::string& f : art.files) {
            CHECK(fs::exists(f));
        }
        CHECK(art.envelope.at("tool") == Json("ripkit"));
        CHECK(art.envelope.at("command") == Json(c.command));
        CHECK(art.envelope.at("wall_time_s").is_number());

        std::ifstream in(art.files.front());
        REQUIRE(in.good());
        const Json reread = Json::parse(in);
        CHECK(reread.at("payload").dump() ==
              art.envelope.at("payload").dump());
        const VerifyResult vr = verify_report(reread);
        CHECK(vr.ok);
        CHECK(vr.violations.empty());
    }
}

TEST_CASE("a rejected config leaves no output behind") {
    ExperimentConfig c = diagnose_config();
    c.s = 9;
    c.out_dir = "tmp-runner-rejected/nested";
    CHECK_THROWS_AS((void)run_experiment(c), ValidationError);
    CHECK(!fs::exists("tmp-runner-rejected"));
}

TEST_CASE("verify flags a perturbed null space witness") {
    Json env = envelope_for(diagnose_config());
    CHECK(verify_report(env).ok);
    Json& nsp = env["payload"]["report"]["nsp"];
    REQUIRE(nsp.is_array());
    REQUIRE(!nsp.empty());
    bool perturbed = false;
    for (Json& block : nsp) {
        if (!block.at("witness").is_null()) {
            block["witness"]["v"][0] =
                block["witness"]["v"][0].get<double>() + 1e-3;
            perturbed = true;
            break;
        }
    }
    REQUIRE(perturbed);
    const VerifyResult vr = verify_report(env);
    CHECK(!vr.ok);
    REQUIRE(!vr.violations.empty());
    CHECK(vr.violations.front().find("witness") != std::string::npos);
}

TEST_CASE("verify flags tampered recover aggregates") {
    Json env = envelope_for(recover_config());
    CHECK(verify_report(env).ok);
    Json tampered = env;
    tampered["payload"]["summary"]["success_rate"] = 0.5;
    VerifyResult vr = verify_report(tampered);
    CHECK(!vr.ok);
    CHECK(vr.violations.front().find("success rate") != std::string::npos);

    tampered = env;
    tampered["payload"]["summary"]["records"][0]["err_l2"] = 1e9;
    vr = verify_report(tampered);
    CHECK(!vr.ok);
}

TEST_CASE("verify flags manifold tampering entry by entry") {
    const Json env = envelope_for(manifold_config());
    CHECK(verify_report(env).ok);

    Json t = env;
    t["payload"]["fit"]["extension"]["geodesic"]["data"][1] =
        t["payload"]["fit"]["extension"]["geodesic"]["data"][1].get<double>() +
        1e-3;
    VerifyResult vr = verify_report(t);
    CHECK(!vr.ok);
    CHECK(vr.violations.front().find("symmetric") != std::string::npos);

    // Symmetric corruption slips past the shape checks; the re-computation
    // from the lifted points catches it.
    t = env;
    const std::size_t n =
        t["payload"]["fit"]["extension"]["geodesic"]["rows"].get<std::size_t>();
    Json& data = t["payload"]["fit"]["extension"]["geodesic"]["data"];
    const double bumped = data[1].get<double>() + 1e-3;
    data[1] = bumped;
    data[n] = bumped;
    vr = verify_report(t);
    CHECK(!vr.ok);
    CHECK(vr.violations.front().find("lifted points") != std::string::npos);

    t = env;
    t["payload"]["fit"]["extension"]["delta_sphere"] =
        t["payload"]["fit"]["extension"]["delta_sphere"].get<double>() + 0.5;
    vr = verify_report(t);
    CHECK(!vr.ok);
    CHECK(vr.violations.front().find("delta_sphere") != std::string::npos);

    t = env;
    Json& pb = t["payload"]["run"]["pullbacks"][0]["data"];
    pb[0] = pb[0].get<double>() + 1e-3;
    vr = verify_report(t);
    CHECK(!vr.ok);
    CHECK(vr.violations.front().find("right inverse") != std::string::npos);

    t = env;
    Json& lifted = t["payload"]["fit"]["extension"]["lifted"]["points"][0];
    lifted[0] = lifted[0].get<double>() + 1.0;
    vr = verify_report(t);
    CHECK(!vr.ok);
    bool named = false;
    for (const std::string& msg : vr.violations) {
        if (msg.find("off the sphere") != std::string::npos) named = true;
    }
    CHECK(named);
}

TEST_CASE("verify flags tampered spectral summaries") {
    const Json env = envelope_for(mp_config());
    CHECK(verify_report(env).ok);

    Json t = env;
    t["payload"]["comparison"]["ks_statistic"] =
        t["payload"]["comparison"]["ks_statistic"].get<double>() + 1e-3;
    VerifyResult vr = verify_report(t);
    CHECK(!vr.ok);
    CHECK(vr.violations.front().find("KS") != std::string::npos);

    t = env;
    t["payload"]["comparison"]["support_hi"] = 9.0;
    vr = verify_report(t);
    CHECK(!vr.ok);
    CHECK(vr.violations.front().find("support") != std::string::npos);
}

TEST_CASE("verify rejects malformed envelopes outright") {
    CHECK_THROWS_AS((void)verify_report(Json::array()), ValidationError);

    Json env = envelope_for(diagnose_config());
    Json t = env;
    t.erase("payload");
    CHECK(validation_message([&] { (void)verify_report(t); })
              .find("payload") != std::string::npos);
    t = env;
    t["tool"] = "otherkit";
    CHECK_THROWS_AS((void)verify_report(t), ValidationError);
    t = env;
    t["command"] = "solve";
    CHECK_THROWS_AS((void)verify_report(t), ValidationError);
    t = env;
    t["payload"].erase("report");
    CHECK_THROWS_AS((void)verify_report(t), ValidationError);
}
