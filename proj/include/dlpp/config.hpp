// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "dlpp/curve.hpp"
#include "dlpp/hjb_solver.hpp"
#include "dlpp/weight_field.hpp"

namespace dlpp {

/// Schema violation; `where` is a JSON-pointer-like path to the bad entry.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string where, const std::string& message)
        : std::runtime_error(where + ": " + message), where_(std::move(where))
    {
    }
    const std::string& where() const { return where_; }

  private:
    std::string where_;
};

struct SlowBondSpec {
    double r = 1.0;
    long N = 1000;
    int trials = 5;
};

/// Everything an experiment needs, validated before any computation.
///
/// JSON layout (all sections optional except "field"):
///   family            "exponential" | "geometric"
///   field             {"preset": name, "params": {...}}
///                     | {"piecewise": [{"region": "rect"|"disk"|"halfplane",
///                                       "params": [...], "mu": m}, ...],
///                        "default_mu": m}
///   boundary_source   {"x_axis": m, "y_axis": m}
///   line_sources      [{"axis": "horizontal"|"vertical"|"diagonal",
///                       "offset": a, "strength": s}, ...]
///   solver            {"h": h, "extent": [x1, x2], "base": [x1, x2]}
///   simulation        {"N": n, "trials": k, "seed": s}
///   compare           {"levels": [t, ...]}
///   path              {"from": [[x1, x2], ...], "eps": e, "s_step": d,
///                      "tolerance": {"eps_factor": a, "h_factor": b}}
///   tasep             {"times": [t, ...], "slow_bond": {"r": r, "N": n, "trials": k}}
///   convergence       {"h_list": [h, ...], "reference_h": h}
///   output            {"dir": path, "binary": bool}
///   threads           worker count
struct ExperimentConfig {
    nlohmann::json raw;
    WeightField field;

    double h = 1e-3;
    Extent extent{1.0, 1.0};
    Point base = Point::Zero();

    long N = 1000;
    int trials = 10;
    std::uint64_t seed = 42;
    int threads = 1;

    std::vector<double> levels;  // empty: deciles of U

    std::vector<Point> path_from{Point(0.75, 0.75)};
    ExtractOptions extract;
    CertifyTolerance tolerance;

    std::vector<double> tasep_times;
    std::optional<SlowBondSpec> slow_bond;

    std::vector<double> h_list{1.0 / 125, 1.0 / 250, 1.0 / 500};
    double reference_h = 0.0;

    std::string out_dir = "out";
    bool write_binary = false;

    /// Grid index of `base` at spacing h.
    GridIndex base_index() const;
    /// Hash of the canonical JSON dump of `raw`.
    std::string config_hash() const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Rebuild the field after edits to raw["field"] and friends.
WeightField build_field(const nlohmann::json& j);

}  // namespace dlpp
