// Command-line front end. Exit codes: 0 success, 2 rejected input (bad
// arguments, unreadable or invalid config, malformed report), 3 numerical
// failure inside an experiment. `verify` additionally exits 1 when a report
// parses but one of its embedded certificates no longer holds.

#include <array>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ripkit/error.hpp"
#include "ripkit/json_io.hpp"
#include "ripkit/runner.hpp"

namespace {

struct RunCmd {
    const char* name;
    const char* help;
    CLI::App* sub = nullptr;
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ripkit::ValidationError("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ripkit::Json parse_document(const std::string& path, const char* what) {
    ripkit::Json doc = ripkit::Json::parse(read_file(path), nullptr, false);
    if (doc.is_discarded()) {
        throw ripkit::ValidationError(std::string(what) + " '" + path +
                                      "' is not valid JSON");
    }
    return doc;
}

void print_summary(const ripkit::Json& envelope) {
    const std::string cmd = envelope.at("command").get<std::string>();
    const ripkit::Json& p = envelope.at("payload");
    if (cmd == "gen-matrix") {
        const ripkit::Json& m = p.at("matrix");
        std::cout << "matrix: " << m.at("rows").dump() << " x "
                  << m.at("cols").dump() << " ("
                  << m.at("field").get<std::string>() << ")\n";
    } else if (cmd == "diagnose") {
        const ripkit::Json& r = p.at("report");
        std::cout << "mu = " << r.at("mu").dump() << ", certified = "
                  << r.at("guarantees").at("certified").dump() << "\n";
    } else if (cmd == "recover") {
        const ripkit::Json& s = p.at("summary");
        std::cout << "success rate = " << s.at("success_rate").dump()
                  << ", max l2 error = " << s.at("max_err_l2").dump() << "\n";
    } else if (cmd == "manifold") {
        const ripkit::Json& f = p.at("fit");
        const ripkit::Json& e = f.at("extension");
        std::cout << "fit radius = " << f.at("radius").dump()
                  << ", delta_sphere = " << e.at("delta_sphere").dump()
                  << ", delta_linear = " << e.at("delta_linear").dump()
                  << "\n";
    } else if (cmd == "mp-check") {
        const ripkit::Json& c = p.at("comparison");
        std::cout << "ks = " << c.at("ks_statistic").dump() << ", lambda = "
                  << c.at("lambda").dump() << "\n";
    }
}

int run_command(const RunCmd& c) {
    ripkit::ExperimentConfig cfg =
        ripkit::config_from_json(parse_document(c.config, "config"));
    if (cfg.command.empty()) {
        cfg.command = c.name;
    } else if (cfg.command != c.name) {
        throw ripkit::ValidationError("config names command '" + cfg.command +
                                      "' but the subcommand is '" +
                                      std::string(c.name) + "'");
    }
    if (c.sub->count("--out") > 0) cfg.out_dir = c.out;
    if (c.sub->count("--seed") > 0) cfg.seed = c.seed;
    const ripkit::RunArtifacts art = ripkit::run_experiment(cfg);
    for (const std::string& f : art.files) {
        std::cout << "wrote " << f << "\n";
    }
    print_summary(art.envelope);
    return 0;
}

int verify_command(const std::string& path) {
    const ripkit::VerifyResult result =
        ripkit::verify_report(parse_document(path, "report"));
    if (result.ok) {
        std::cout << "report ok\n";
        return 0;
    }
    for (const std::string& msg : result.violations) {
        std::cerr << "violation: " << msg << "\n";
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compressed sensing diagnostics, recovery experiments, and "
                 "compressed-manifold checks"};
    app.require_subcommand(1);

    std::array<RunCmd, 5> cmds = {{
        {"gen-matrix", "draw a measurement matrix and write it as JSON"},
        {"diagnose", "coherence, null space, and isometry certificates"},
        {"recover", "batch sparse-recovery experiment"},
        {"manifold", "compress a point cloud and fit a sphere extension"},
        {"mp-check", "compare a spectrum against the Marchenko-Pastur law"},
    }};
    for (RunCmd& c : cmds) {
        c.sub = app.add_subcommand(c.name, c.help);
        c.sub->add_option("--config", c.config, "experiment config (JSON)")
            ->required();
        c.sub->add_option("--out", c.out,
                          "output directory (overrides the config)");
        c.sub->add_option("--seed", c.seed,
                          "master seed (overrides the config)");
    }
    std::string report_path;
    CLI::App* verify =
        app.add_subcommand("verify", "re-check certificates in a report");
    verify->add_option("report", report_path, "report JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (const RunCmd& c : cmds) {
            if (c.sub->parsed()) return run_command(c);
        }
        if (verify->parsed()) return verify_command(report_path);
    } catch (const ripkit::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ripkit::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
