// SPDX-License-Identifier: Apache-2.0
#include "dlpp/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dlpp/analysis.hpp"
#include "dlpp/io.hpp"
#include "dlpp/lattice.hpp"
#include "dlpp/rng.hpp"
#include "dlpp/tasep.hpp"

namespace dlpp {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

class ArtifactWriter {
  public:
    ArtifactWriter(const ExperimentConfig& config, Command command, std::filesystem::path dir)
        : config_(config), command_(command), dir_(std::move(dir))
    {
    }

    void set_seeds(std::vector<std::uint64_t> seeds) { seeds_ = std::move(seeds); }
    void add_notes(const std::vector<std::string>& notes)
    {
        for (const auto& n : notes) {
            if (std::find(notes_.begin(), notes_.end(), n) == notes_.end()) notes_.push_back(n);
        }
    }

    void write(const std::string& name, const std::string& content)
    {
        const auto path = dir_ / name;
        io::write_text_file(path, content);
        json meta{{"artifact", name},
                  {"command", to_string(command_)},
                  {"config_hash", config_.config_hash()},
                  {"seeds", seeds_},
                  {"version", kVersion},
                  {"field", config_.field.description()},
                  {"family", to_string(config_.field.family())},
                  {"notes", notes_}};
        io::write_text_file(dir_ / (name + ".meta.json"), meta.dump(2) + "\n");
        artifacts_.push_back(path);
    }

    template <typename Fn>
    void write_with(const std::string& name, Fn&& fn)
    {
        std::ostringstream os;
        fn(os);
        write(name, os.str());
    }

    std::vector<std::filesystem::path> artifacts() const { return artifacts_; }

  private:
    const ExperimentConfig& config_;
    Command command_;
    std::filesystem::path dir_;
    std::vector<std::uint64_t> seeds_;
    std::vector<std::string> notes_;
    std::vector<std::filesystem::path> artifacts_;
};

LatticeDims lattice_dims(const ExperimentConfig& c)
{
    const double h = 1.0 / static_cast<double>(c.N);
    return {grid_intervals(c.extent.x1, h) + 1, grid_intervals(c.extent.x2, h) + 1};
}

std::vector<std::uint64_t> trial_seeds(const ExperimentConfig& c, int trials)
{
    std::vector<std::uint64_t> s;
    for (int k = 0; k < trials; ++k) s.push_back(rng::derive_seed(c.seed, static_cast<std::uint64_t>(k)));
    return s;
}

ValueGrid solve_configured(const ExperimentConfig& c)
{
    const GridIndex b = c.base_index();
    if (b.i != 0 || b.j != 0) return solve_relative(c.field, c.h, c.extent, b, {c.threads});
    return solve(c.field, c.h, c.extent, {c.threads});
}

void write_grid(ArtifactWriter& out, const ExperimentConfig& c, const std::string& stem, const ValueGrid& vg)
{
    out.write_with(stem + ".csv", [&](std::ostream& os) { io::write_value_grid_csv(os, vg); });
    if (c.write_binary) out.write_with(stem + ".bin", [&](std::ostream& os) { io::write_grid_binary(os, vg.values()); });
}

std::vector<LevelSet> contours(const ValueGrid& vg, const std::vector<double>& levels)
{
    std::vector<LevelSet> sets;
    for (double t : levels) sets.push_back(level_set(vg, t));
    return sets;
}

json finite_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json run_solve(const ExperimentConfig& c, ArtifactWriter& out)
{
    const auto t0 = Clock::now();
    const ValueGrid vg = solve_configured(c);
    const double runtime = seconds_since(t0);
    out.add_notes(vg.notes());
    write_grid(out, c, "value_grid", vg);
    return {{"h", vg.spacing()},
            {"dims", {vg.rows(), vg.cols()}},
            {"base", {vg.base().i, vg.base().j}},
            {"runtime_seconds", runtime},
            {"boundary_residual", boundary_residual(vg, c.field)},
            {"max_value", vg.values().maxCoeff()},
            {"notes", vg.notes()}};
}

json run_simulate(const ExperimentConfig& c, ArtifactWriter& out)
{
    const auto dims = lattice_dims(c);
    out.set_seeds(trial_seeds(c, c.trials));
    const auto t0 = Clock::now();
    const auto trials = run_trials(c.field, dims, c.N, c.trials, c.seed, {c.threads, false, {}});
    const double runtime = seconds_since(t0);

    const auto pf = last_passage(sample_lattice(c.field, dims, c.N, trials.front().seed));
    out.write_with("passage_0.csv", [&](std::ostream& os) { io::write_passage_csv(os, pf); });
    if (c.write_binary) {
        out.write_with("passage_0.bin", [&](std::ostream& os) { io::write_grid_binary(os, pf.values()); });
    }

    json rows = json::array();
    for (const auto& s : trials) {
        rows.push_back({{"trial", s.index}, {"seed", s.seed}, {"corner", s.corner}, {"scaled_corner", s.scaled_corner}});
    }
    return {{"dims", {dims.rows, dims.cols}}, {"N", c.N}, {"trials", rows}, {"runtime_seconds", runtime}};
}

json run_compare(const ExperimentConfig& c, ArtifactWriter& out)
{
    const auto dims = lattice_dims(c);
    out.set_seeds(trial_seeds(c, c.trials));

    const auto t0 = Clock::now();
    const ValueGrid solved = solve(c.field, c.h, c.extent, {c.threads});
    const double solve_seconds = seconds_since(t0);
    out.add_notes(solved.notes());

    const auto t1 = Clock::now();
    TrialOptions opts;
    opts.threads = c.threads;
    opts.observable = [&solved](const PassageField& pf) { return sup_error(scaled_field(pf), solved); };
    const auto trials = run_trials(c.field, dims, c.N, c.trials, c.seed, opts);
    const double sim_seconds = seconds_since(t1);

    const ValueGrid scaled0 = scaled_field(last_passage(sample_lattice(c.field, dims, c.N, trials.front().seed)));
    const std::vector<double> levels = c.levels.empty() ? decile_levels(solved) : c.levels;
    const auto pde_sets = contours(solved, levels);
    const auto sim_sets = contours(scaled0, levels);

    std::vector<double> errors;
    for (const auto& s : trials) errors.push_back(s.observable);
    std::vector<double> sorted = errors;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    json per_level = json::array();
    for (std::size_t k = 0; k < levels.size(); ++k) {
        per_level.push_back({{"level", levels[k]},
                             {"pde_to_sim", finite_or_null(one_sided_hausdorff(pde_sets[k], sim_sets[k]))},
                             {"sim_to_pde", finite_or_null(one_sided_hausdorff(sim_sets[k], pde_sets[k]))}});
    }

    write_grid(out, c, "value_grid", solved);
    out.write_with("level_sets_pde.csv", [&](std::ostream& os) { io::write_level_sets_csv(os, pde_sets); });
    out.write_with("level_sets_sim.csv", [&](std::ostream& os) { io::write_level_sets_csv(os, sim_sets); });

    json seeds = json::array();
    double corner_mean = 0.0;
    for (const auto& s : trials) {
        seeds.push_back(s.seed);
        corner_mean += s.scaled_corner / static_cast<double>(trials.size());
    }
    return {{"sup_error", median},
            {"sup_errors", errors},
            {"mean_scaled_corner", corner_mean},
            {"level_distances", per_level},
            {"grid", {{"h", c.h}, {"dims", {solved.rows(), solved.cols()}}}},
            {"lattice", {{"N", c.N}, {"dims", {dims.rows, dims.cols}}}},
            {"seeds", seeds},
            {"runtime_seconds", {{"solve", solve_seconds}, {"simulate", sim_seconds}}},
            {"notes", solved.notes()}};
}

json energy_json(const EnergyReport& r)
{
    return {{"energy", r.energy},       {"reference", r.reference}, {"gap", r.gap},
            {"epsilon", r.epsilon},     {"h", r.h},                 {"tolerance", r.tolerance},
            {"status", r.pass ? "PASS" : "FAIL"}};
}

json run_path(const ExperimentConfig& c, ArtifactWriter& out)
{
    const auto t0 = Clock::now();
    const ValueGrid solved = solve(c.field, c.h, c.extent, {c.threads});
    const double solve_seconds = seconds_since(t0);
    out.add_notes(solved.notes());

    json curves = json::array();
    for (std::size_t k = 0; k < c.path_from.size(); ++k) {
        const auto t1 = Clock::now();
        const auto curve = extract_curve(solved, c.field, c.path_from[k], c.extract);
        const double extract_seconds = seconds_since(t1);
        const auto report = certify(solved, c.field, curve, c.tolerance);
        out.write_with("curve_" + std::to_string(k) + ".ndjson",
                       [&](std::ostream& os) { io::write_curve_ndjson(os, curve); });
        json entry = energy_json(report);
        entry["from"] = {c.path_from[k].x(), c.path_from[k].y()};
        entry["steps"] = curve.s_star.size();
        entry["runtime_seconds"] = extract_seconds;
        curves.push_back(entry);
    }

    const auto dims = lattice_dims(c);
    out.set_seeds(trial_seeds(c, c.trials));
    for (int t = 0; t < c.trials; ++t) {
        const auto pf = last_passage(sample_lattice(c.field, dims, c.N, rng::derive_seed(c.seed, static_cast<std::uint64_t>(t))));
        for (std::size_t k = 0; k < c.path_from.size(); ++k) {
            const GridIndex end{std::min<Eigen::Index>(std::llround(c.path_from[k].x() * static_cast<double>(c.N)), dims.rows - 1),
                                std::min<Eigen::Index>(std::llround(c.path_from[k].y() * static_cast<double>(c.N)), dims.cols - 1)};
            const auto path = optimal_path(pf, end);
            out.write_with("path_t" + std::to_string(t) + "_" + std::to_string(k) + ".ndjson",
                           [&](std::ostream& os) { io::write_path_ndjson(os, path); });
        }
    }

    const std::vector<double> levels = c.levels.empty() ? decile_levels(solved) : c.levels;
    out.write_with("level_sets_pde.csv", [&](std::ostream& os) { io::write_level_sets_csv(os, contours(solved, levels)); });
    return {{"curves", curves},
            {"eps", c.extract.eps},
            {"s_step", c.extract.s_step},
            {"lattice", {{"N", c.N}, {"trials", c.trials}}},
            {"runtime_seconds", {{"solve", solve_seconds}}},
            {"notes", solved.notes()}};
}

json run_tasep(const ExperimentConfig& c, ArtifactWriter& out)
{
    json report;
    const auto dims = lattice_dims(c);
    out.set_seeds(trial_seeds(c, 1));
    const auto pf = last_passage(sample_lattice(c.field, dims, c.N, rng::derive_seed(c.seed, 0)));
    std::vector<double> times = c.tasep_times;
    if (times.empty()) {
        const double top = pf(dims.rows - 1, dims.cols - 1);
        times = {0.25 * top, 0.5 * top, 0.75 * top};
    }
    json heights = json::array();
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto profile = height_function(pf, times[k]);
        const std::string name = "height_" + std::to_string(k) + ".csv";
        out.write_with(name, [&](std::ostream& os) { io::write_height_csv(os, profile); });
        heights.push_back({{"t", times[k]}, {"file", name}});
    }
    report["heights"] = heights;

    const ValueGrid solved = solve(c.field, c.h, c.extent, {c.threads});
    out.add_notes(solved.notes());
    const auto density = density_from_value(solved);
    out.write_with("density.csv", [&](std::ostream& os) { io::write_density_csv(os, density); });
    report["density_defined_points"] = density.defined.count();

    if (c.slow_bond) {
        const auto sb = slow_bond_estimate(c.slow_bond->r, c.slow_bond->N, c.slow_bond->trials, c.seed, c.threads);
        json j{{"r", sb.r},
               {"N", sb.N},
               {"trials", sb.trials},
               {"kappa_hat", sb.kappa_hat},
               {"std_error", sb.std_error},
               {"lower", sb.lower},
               {"upper", sb.upper},
               {"naive_pde", sb.naive_pde},
               {"naive_pde_valid", false},
               {"caveat", sb.caveat},
               {"per_trial", sb.per_trial}};
        out.write("slow_bond.json", j.dump(2) + "\n");
        report["slow_bond"] = j;
    }
    return report;
}

json run_convergence(const ExperimentConfig& c, ArtifactWriter& out)
{
    ConvergenceOptions opts;
    opts.extent = c.extent;
    opts.reference_h = c.reference_h;
    opts.threads = c.threads;
    const auto table = convergence_study(c.field, c.h_list, opts);
    out.write_with("convergence.csv", [&](std::ostream& os) {
        os << "h,sup_error,boundary_residual\n";
        for (const auto& r : table.rows) {
            os << io::format_double(r.h) << ',' << io::format_double(r.sup_error) << ','
               << io::format_double(r.boundary_residual) << '\n';
        }
    });
    json rows = json::array();
    for (const auto& r : table.rows) {
        rows.push_back({{"h", r.h},
                        {"sup_error", r.sup_error},
                        {"boundary_residual", r.boundary_residual},
                        {"runtime_seconds", r.runtime_seconds}});
    }
    return {{"reference", table.closed_form_reference ? "closed_form" : "fine_grid"},
            {"reference_h", table.reference_h},
            {"rows", rows}};
}

}  // namespace

Command parse_command(std::string_view name)
{
    if (name == "solve") return Command::Solve;
    if (name == "simulate") return Command::Simulate;
    if (name == "compare") return Command::Compare;
    if (name == "path") return Command::Path;
    if (name == "tasep") return Command::Tasep;
    if (name == "convergence") return Command::Convergence;
    throw std::invalid_argument("unknown command '" + std::string(name) +
                                "' (expected solve|simulate|compare|path|tasep|convergence)");
}

std::string to_string(Command command)
{
    switch (command) {
    case Command::Solve: return "solve";
    case Command::Simulate: return "simulate";
    case Command::Compare: return "compare";
    case Command::Path: return "path";
    case Command::Tasep: return "tasep";
    case Command::Convergence: return "convergence";
    }
    return "?";
}

RunResult run(const ExperimentConfig& config, Command command, const std::filesystem::path& out_dir)
{
    ArtifactWriter out(config, command, out_dir);
    json report;
    switch (command) {
    case Command::Solve: report = run_solve(config, out); break;
    case Command::Simulate: report = run_simulate(config, out); break;
    case Command::Compare: report = run_compare(config, out); break;
    case Command::Path: report = run_path(config, out); break;
    case Command::Tasep: report = run_tasep(config, out); break;
    case Command::Convergence: report = run_convergence(config, out); break;
    }
    report["command"] = to_string(command);
    report["config_hash"] = config.config_hash();
    report["field"] = config.field.description();
    out.write(to_string(command) + "_report.json", report.dump(2) + "\n");

    RunResult result;
    result.artifacts = out.artifacts();
    result.report = std::move(report);
    return result;
}

}  // namespace dlpp
