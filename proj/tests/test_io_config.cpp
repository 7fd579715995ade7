// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"

#include "dlpp/config.hpp"
#include "dlpp/io.hpp"
#include "dlpp/lattice.hpp"
#include "dlpp/runner.hpp"

using namespace dlpp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("dlpp_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

struct Exec {
    int status = 0;
    std::string output;
};

Exec run_lab(const std::string& args, const std::string& env = {})
{
    const std::string cmd = env + (env.empty() ? "" : " ") + std::string(DLPP_LAB_EXE) + " " + args + " 2>&1";
    Exec r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

json small_config()
{
    return json::parse(R"({
        "field": {"preset": "lambda1"},
        "solver": {"h": 0.01},
        "simulation": {"N": 50, "trials": 2, "seed": 9},
        "path": {"from": [[0.75, 0.75], [1.0, 0.4]]},
        "tasep": {"times": [2.0, 6.0], "slow_bond": {"r": 0.5, "N": 60, "trials": 2}},
        "convergence": {"h_list": [0.04, 0.02]}
    })");
}

}  // namespace

TEST_CASE("format_double round-trips")
{
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int k = 0; k < 1000; ++k) {
        const double v = u(gen) * std::pow(10.0, static_cast<int>(gen() % 40) - 20);
        CHECK(std::stod(io::format_double(v)) == v);
    }
}

TEST_CASE("grid CSV round-trip")
{
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int draw = 0; draw < 20; ++draw) {
        GridArray<double> a(1 + gen() % 9, 1 + gen() % 9);
        for (Eigen::Index k = 0; k < a.size(); ++k) a(k) = u(gen);
        std::stringstream ss;
        io::write_grid_csv(ss, a, "kind=test, dims=xx");
        const auto back = io::read_grid_csv(ss);
        CHECK(back.header.at("kind") == "test");
        CHECK((back.values == a).all());
    }
    std::stringstream bad("no header\n1,2\n");
    CHECK_THROWS_AS(io::read_grid_csv(bad), io::IoError);
    std::stringstream ragged("# a=b\n1,2\n3\n");
    CHECK_THROWS_AS(io::read_grid_csv(ragged), io::IoError);
}

TEST_CASE("binary round-trip")
{
    GridArray<double> a(3, 4);
    a << 0.1, 0.2, 0.3, 0.4, 1e-300, -0.0, 5.5, 7, 8, 9, 10, 11;
    std::stringstream ss;
    io::write_grid_binary(ss, a);
    const std::string bytes = ss.str();
    CHECK(bytes.substr(0, 5) == "DLPP1");
    CHECK(bytes.size() == 5 + 16 + 12 * 8);
    CHECK(static_cast<unsigned char>(bytes[5]) == 3);  // little-endian row count
    std::stringstream in(bytes);
    CHECK((io::read_grid_binary(in) == a).all());

    std::stringstream wrong("DLPQ1xxxxxxxxxxxxxxxx");
    CHECK_THROWS_AS(io::read_grid_binary(wrong), io::IoError);
    std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(io::read_grid_binary(truncated), io::IoError);
}

TEST_CASE("passage and value grid headers")
{
    const auto pf = last_passage(sample_lattice(WeightField::constant(1.0), {4, 3}, 3, 77));
    std::stringstream ss;
    io::write_passage_csv(ss, pf);
    const auto f = io::read_grid_csv(ss);
    CHECK(f.header.at("dims") == "4x3");
    CHECK(f.header.at("N") == "3");
    CHECK(f.header.at("seed") == "77");
    CHECK((f.values == pf.values()).all());

    std::stringstream vs;
    io::write_value_grid_csv(vs, solve(WeightField::constant(1.0), 0.5, {1.0, 1.0}));
    const auto g = io::read_grid_csv(vs);
    CHECK(g.header.at("kind") == "value_grid");
    CHECK(g.header.at("h") == "0.5");
}

TEST_CASE("NDJSON and tabular exports")
{
    std::stringstream p;
    io::write_path_ndjson(p, {{0, 0}, {0, 1}, {1, 1}});
    CHECK(p.str() == "{\"i\":0,\"j\":0}\n{\"i\":0,\"j\":1}\n{\"i\":1,\"j\":1}\n");

    MonotoneCurve c;
    c.points = {Point(0, 0), Point(0.5, 0.25)};
    std::stringstream cs;
    io::write_curve_ndjson(cs, c);
    std::string line;
    std::getline(cs, line);
    CHECK(json::parse(line) == json{{"x", 0.0}, {"y", 0.0}});
    std::getline(cs, line);
    CHECK(json::parse(line) == json{{"x", 0.5}, {"y", 0.25}});

    std::stringstream ls;
    io::write_level_sets_csv(ls, {LevelSet{1.0, {{Point(0, 1), Point(1, 0)}}}});
    CHECK(ls.str() == "x,y,level,polyline\n0,1,1,0\n1,0,1,0\n");

    std::stringstream hs;
    io::write_height_csv(hs, HeightProfile{0.0, -1, {1, 0, 1}});
    CHECK(hs.str() == "j,h\n-1,1\n0,0\n1,1\n");
}

TEST_CASE("fnv1a64")
{
    CHECK(io::fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(io::hex64(0xabcull) == "0000000000000abc");
}

TEST_CASE("config parsing")
{
    const auto c = parse_config(small_config());
    CHECK(c.field.description() == "lambda1");
    CHECK(c.h == 0.01);
    CHECK(c.N == 50);
    CHECK(c.seed == 9);
    CHECK(c.path_from.size() == 2);
    REQUIRE(c.slow_bond.has_value());
    CHECK(c.slow_bond->r == 0.5);
    CHECK(c.h_list == std::vector<double>{0.04, 0.02});
    CHECK(c.config_hash() == parse_config(small_config()).config_hash());

    SUBCASE("piecewise with sources")
    {
        const auto pc = parse_config(json::parse(R"({
            "family": "geometric",
            "field": {"piecewise": [{"region": "disk", "params": [0.5, 0.5, 0.2], "mu": 0.25}], "default_mu": 1.5},
            "boundary_source": {"x_axis": 2.0},
            "line_sources": [{"axis": "vertical", "offset": 0.3, "strength": 1.0}]
        })"));
        CHECK(pc.field.family() == DistributionFamily::Geometric);
        CHECK(pc.field.bulk_mean(Point(0.5, 0.6)) == 0.25);
        CHECK(pc.field.bulk_mean(Point(0.9, 0.9)) == 1.5);
        CHECK(pc.field.boundary_source().x_axis == 2.0);
        CHECK(effective_mean(pc.field, 30, 90, 100) == 2.5);
        CHECK(effective_mean(pc.field, 30, 50, 100) == 1.25);
    }

    auto expect_error = [](const std::string& text, const std::string& where) {
        try {
            parse_config(json::parse(text));
            FAIL("expected a config error for " << text);
        } catch (const ConfigError& e) {
            CHECK(e.where() == where);
        }
    };
    expect_error(R"({"field": {"preset": "lambda1"}, "bogus": 1})", "/bogus");
    expect_error(R"({"solver": {"h": 0.01}})", "/field");
    expect_error(R"({"field": {"preset": "lambda1"}, "solver": {"h": -0.01}})", "/solver/h");
    expect_error(R"({"field": {"preset": "lambda1"}, "family": "poisson"})", "/family");
    expect_error(R"({"field": {"preset": "nope"}})", "/field/preset");
    expect_error(R"({"field": {"preset": "lambda1"}, "simulation": {"seed": -4}})", "/simulation/seed");
    expect_error(R"({"field": {"preset": "lambda1"}, "path": {"from": [[0.5]]}})", "/path/from/0");
}

TEST_CASE("runner writes artifacts with sidecars")
{
    const auto dir = scratch("runner");
    const auto config = parse_config(small_config());
    for (auto cmd : {Command::Solve, Command::Simulate, Command::Compare, Command::Path, Command::Tasep,
                     Command::Convergence}) {
        const auto result = run(config, cmd, dir / to_string(cmd));
        CHECK(result.exit_status == 0);
        CHECK(fs::exists(dir / to_string(cmd) / (to_string(cmd) + "_report.json")));
        for (const auto& a : result.artifacts) {
            REQUIRE(fs::exists(a));
            const auto meta = json::parse(io::read_text_file(a.string() + ".meta.json"));
            CHECK(meta.at("config_hash") == config.config_hash());
            CHECK(meta.at("version") == kVersion);
            CHECK(meta.at("command") == to_string(cmd));
        }
    }
    CHECK(fs::exists(dir / "path" / "curve_1.ndjson"));
    CHECK(fs::exists(dir / "path" / "path_t1_1.ndjson"));
    CHECK(fs::exists(dir / "tasep" / "height_1.csv"));
    const auto sb = json::parse(io::read_text_file(dir / "tasep" / "slow_bond.json"));
    for (const char* key : {"r", "N", "trials", "kappa_hat", "lower", "upper", "naive_pde", "caveat"}) {
        CHECK(sb.contains(key));
    }
    CHECK(sb.at("naive_pde") == 8.0);

    const auto report = json::parse(io::read_text_file(dir / "compare" / "compare_report.json"));
    CHECK(report.at("level_distances").size() == 9);
    CHECK(report.at("seeds").size() == 2);
    CHECK(parse_command("tasep") == Command::Tasep);
    CHECK_THROWS_AS(parse_command("plot"), std::invalid_argument);
}

TEST_CASE("dlpp-lab command line")
{
    const auto dir = scratch("cli");
    io::write_text_file(dir / "config.json", small_config().dump());
    const std::string cfg = "--config " + (dir / "config.json").string();

    SUBCASE("artifacts are byte-identical across runs and thread counts")
    {
        for (const char* cmd : {"compare", "path", "tasep"}) {
            const auto a = run_lab(std::string(cmd) + " " + cfg + " --out " + (dir / "a").string());
            const auto b = run_lab(std::string(cmd) + " " + cfg + " --out " + (dir / "b").string() + " --threads 3");
            REQUIRE_MESSAGE(a.status == 0, a.output);
            REQUIRE_MESSAGE(b.status == 0, b.output);
        }
        int compared = 0;
        for (const auto& entry : fs::directory_iterator(dir / "a")) {
            const auto ext = entry.path().extension();
            if (ext != ".csv" && ext != ".ndjson") continue;
            CHECK(io::read_text_file(entry.path()) == io::read_text_file(dir / "b" / entry.path().filename()));
            ++compared;
        }
        CHECK(compared >= 10);
    }
    SUBCASE("overrides")
    {
        const auto r = run_lab("solve " + cfg + " --out " + (dir / "o").string() + " --h 0.05 --extent 1,0.5");
        REQUIRE_MESSAGE(r.status == 0, r.output);
        const auto report = json::parse(io::read_text_file(dir / "o" / "solve_report.json"));
        CHECK(report.at("dims") == json::array({21, 11}));

        const auto p = run_lab("path " + cfg + " --out " + (dir / "p").string() + " --from 0.5,0.5 --from 1,1 --eps 0.02");
        REQUIRE_MESSAGE(p.status == 0, p.output);
        const auto pr = json::parse(io::read_text_file(dir / "p" / "path_report.json"));
        CHECK(pr.at("curves").size() == 2);
        CHECK(pr.at("eps") == 0.02);
    }
    SUBCASE("thread count from the environment")
    {
        CHECK(run_lab("simulate " + cfg + " --out " + (dir / "e").string(), "DLPP_LAB_THREADS=2").status == 0);
        const auto bad = run_lab("simulate " + cfg + " --out " + (dir / "e").string(), "DLPP_LAB_THREADS=many");
        CHECK(bad.status != 0);
        CHECK(json::parse(bad.output).at("error") == "config");
    }
    SUBCASE("errors are machine readable")
    {
        io::write_text_file(dir / "bad.json", R"({"field": {"preset": "lambda1"}, "solver": {"h": 0}})");
        const auto r = run_lab("solve --config " + (dir / "bad.json").string());
        CHECK(r.status != 0);
        const auto err = json::parse(r.output);
        CHECK(err.at("error") == "config");
        CHECK(err.at("message").get<std::string>().find("/solver/h") != std::string::npos);

        const auto missing = run_lab("solve --config " + (dir / "missing.json").string());
        CHECK(missing.status != 0);
        CHECK(json::parse(missing.output).at("error") == "io");

        const auto unknown = run_lab("plot " + cfg);
        CHECK(unknown.status != 0);
        CHECK(json::parse(unknown.output).at("error") == "invalid_argument");

        const auto usage = run_lab("solve");
        CHECK(usage.status != 0);
        CHECK(json::parse(usage.output).at("error") == "usage");
    }
}

TEST_CASE("shipped configs validate")
{
    int count = 0;
    for (const auto& entry : fs::directory_iterator(DLPP_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") continue;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_config(entry.path().string()));
        ++count;
    }
    CHECK(count >= 5);
}
