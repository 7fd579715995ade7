// SPDX-License-Identifier: Apache-2.0
// dlpp-lab: command-line front end for the experiment runner.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dlpp/config.hpp"
#include "dlpp/io.hpp"
#include "dlpp/runner.hpp"

namespace {

using nlohmann::json;

int fail(const std::string& kind, const std::string& message, int status = 2)
{
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
    return status;
}

json parse_pair(const std::string& text, const std::string& flag)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw dlpp::ConfigError(flag, "expected x,y");
    try {
        const double x = std::stod(text.substr(0, comma));
        const double y = std::stod(text.substr(comma + 1));
        return json::array({x, y});
    } catch (const std::exception&) {
        throw dlpp::ConfigError(flag, "expected x,y with numeric components, got '" + text + "'");
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Directed last passage percolation lab"};
    app.set_help_flag("--help", "print help");
    app.set_version_flag("--version", std::string(dlpp::kVersion));

    std::string command;
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<double> h;
    std::optional<std::string> extent;
    std::optional<std::string> base;
    std::vector<std::string> from;
    std::optional<double> eps;
    std::optional<double> s_step;

    app.add_option("command", command, "solve|simulate|compare|path|tasep|convergence")->required();
    app.add_option("--config", config_path, "experiment config (JSON)")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "base seed");
    app.add_option("--threads", threads, "worker threads (default: $DLPP_LAB_THREADS or 1)");
    app.add_option("--h", h, "solver grid spacing");
    app.add_option("--extent", extent, "solver extent x1,x2");
    app.add_option("--base", base, "base point x1,x2");
    app.add_option("--from", from, "curve endpoint x1,x2 (repeatable)");
    app.add_option("--eps", eps, "curve step length");
    app.add_option("--s-step", s_step, "direction grid step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what());
    }

    try {
        const dlpp::Command cmd = dlpp::parse_command(command);

        json j;
        try {
            j = json::parse(dlpp::io::read_text_file(config_path));
        } catch (const json::parse_error& e) {
            throw dlpp::ConfigError(config_path, std::string("invalid JSON: ") + e.what());
        }
        if (!j.is_object()) throw dlpp::ConfigError("", "config must be a JSON object");

        if (seed) j["simulation"]["seed"] = *seed;
        if (!threads) {
            if (const char* env = std::getenv("DLPP_LAB_THREADS"); env && *env) {
                try {
                    threads = std::stoi(env);
                } catch (const std::exception&) {
                    throw dlpp::ConfigError("DLPP_LAB_THREADS", std::string("not an integer: '") + env + "'");
                }
            }
        }
        if (threads) j["threads"] = *threads;
        if (h) j["solver"]["h"] = *h;
        if (extent) j["solver"]["extent"] = parse_pair(*extent, "--extent");
        if (base) j["solver"]["base"] = parse_pair(*base, "--base");
        if (!from.empty()) {
            json pts = json::array();
            for (const auto& f : from) pts.push_back(parse_pair(f, "--from"));
            j["path"]["from"] = pts;
        }
        if (eps) j["path"]["eps"] = *eps;
        if (s_step) j["path"]["s_step"] = *s_step;

        const dlpp::ExperimentConfig config = dlpp::parse_config(j);
        const auto result = dlpp::run(config, cmd, out_dir.value_or(config.out_dir));
        json summary{{"command", dlpp::to_string(cmd)}, {"artifacts", json::array()}};
        for (const auto& a : result.artifacts) summary["artifacts"].push_back(a.string());
        std::cout << summary.dump(2) << '\n';
        return result.exit_status;
    } catch (const dlpp::ConfigError& e) {
        return fail("config", e.what());
    } catch (const dlpp::io::IoError& e) {
        return fail("io", e.what(), 3);
    } catch (const dlpp::DomainError& e) {
        return fail("domain", e.what(), 4);
    } catch (const std::invalid_argument& e) {
        return fail("invalid_argument", e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 5);
    }
}
