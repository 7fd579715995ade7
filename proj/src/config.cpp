// SPDX-License-Identifier: Apache-2.0
#include "dlpp/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "dlpp/io.hpp"

namespace dlpp {

namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!obj.is_object()) throw ConfigError(where, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!ok.count(key)) throw ConfigError(where + "/" + key, "unknown key");
    }
}

double number(const json& obj, const std::string& where)
{
    if (!obj.is_number()) throw ConfigError(where, "expected a number");
    const double v = obj.get<double>();
    if (!std::isfinite(v)) throw ConfigError(where, "expected a finite number");
    return v;
}

double positive(const json& obj, const std::string& where)
{
    const double v = number(obj, where);
    if (!(v > 0.0)) throw ConfigError(where, "must be > 0");
    return v;
}

double nonnegative(const json& obj, const std::string& where)
{
    const double v = number(obj, where);
    if (v < 0.0) throw ConfigError(where, "must be >= 0");
    return v;
}

long integer(const json& obj, const std::string& where, long min_value)
{
    if (!obj.is_number_integer()) throw ConfigError(where, "expected an integer");
    const long v = obj.get<long>();
    if (v < min_value) throw ConfigError(where, "must be >= " + std::to_string(min_value));
    return v;
}

std::string text(const json& obj, const std::string& where)
{
    if (!obj.is_string()) throw ConfigError(where, "expected a string");
    return obj.get<std::string>();
}

std::vector<double> numbers(const json& arr, const std::string& where)
{
    if (!arr.is_array()) throw ConfigError(where, "expected an array");
    std::vector<double> out;
    for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(number(arr[k], where + "/" + std::to_string(k)));
    return out;
}

Point pair(const json& arr, const std::string& where)
{
    auto v = numbers(arr, where);
    if (v.size() != 2) throw ConfigError(where, "expected [x1, x2]");
    if (v[0] < 0.0 || v[1] < 0.0) throw ConfigError(where, "coordinates must be >= 0");
    return {v[0], v[1]};
}

std::string format_param(double v)
{
    return io::format_double(v);
}

WeightField preset_from_json(const json& f, const std::string& where)
{
    const std::string name = text(f["preset"], where + "/preset");
    if (!f.contains("params")) {
        try {
            return preset(name);
        } catch (const std::exception& e) {
            throw ConfigError(where + "/preset", e.what());
        }
    }
    const json& p = f["params"];
    const std::string pw = where + "/params";
    std::string spec;
    if (name == "slow_bond") {
        only_keys(p, pw, {"r"});
        spec = "slow_bond(" + format_param(number(p.at("r"), pw + "/r")) + ")";
    } else if (name == "constant") {
        only_keys(p, pw, {"mu"});
        spec = "constant(" + format_param(number(p.at("mu"), pw + "/mu")) + ")";
    } else if (name == "line_source") {
        only_keys(p, pw, {"axis", "offset", "strength"});
        if (!p.contains("axis") || !p.contains("offset") || !p.contains("strength")) {
            throw ConfigError(pw, "line_source needs axis, offset and strength");
        }
        spec = "line_source(" + text(p["axis"], pw + "/axis") + "," + format_param(number(p["offset"], pw + "/offset")) +
               "," + format_param(number(p["strength"], pw + "/strength")) + ")";
    } else {
        if (!p.is_object() || !p.empty()) throw ConfigError(pw, "preset '" + name + "' takes no parameters");
        spec = name;
    }
    try {
        return preset(spec);
    } catch (const std::exception& e) {
        throw ConfigError(where, e.what());
    }
}

WeightField piecewise_from_json(const json& f, const std::string& where, DistributionFamily family)
{
    const json& list = f["piecewise"];
    if (!list.is_array()) throw ConfigError(where + "/piecewise", "expected an array");
    std::vector<Region> regions;
    for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string rw = where + "/piecewise/" + std::to_string(k);
        const json& r = list[k];
        only_keys(r, rw, {"region", "params", "mu"});
        if (!r.contains("region") || !r.contains("params") || !r.contains("mu")) {
            throw ConfigError(rw, "region entries need region, params and mu");
        }
        Region reg;
        const std::string kind = text(r["region"], rw + "/region");
        const auto params = numbers(r["params"], rw + "/params");
        std::size_t expected = 0;
        if (kind == "rect") {
            reg.kind = Region::Kind::Rect;
            expected = 4;
        } else if (kind == "disk") {
            reg.kind = Region::Kind::Disk;
            expected = 3;
        } else if (kind == "halfplane") {
            reg.kind = Region::Kind::HalfPlane;
            expected = 3;
        } else {
            throw ConfigError(rw + "/region", "expected rect|disk|halfplane");
        }
        if (params.size() != expected) {
            throw ConfigError(rw + "/params", "expected " + std::to_string(expected) + " numbers for " + kind);
        }
        reg.a = params[0];
        reg.b = params[1];
        reg.c = params[2];
        if (expected == 4) reg.d = params[3];
        reg.mu = nonnegative(r["mu"], rw + "/mu");
        regions.push_back(reg);
    }
    const double default_mu = f.contains("default_mu") ? nonnegative(f["default_mu"], where + "/default_mu") : 0.0;
    return piecewise(family, std::move(regions), default_mu);
}

}  // namespace

WeightField build_field(const json& j)
{
    if (!j.contains("field")) throw ConfigError("/field", "missing");
    const json& f = j["field"];
    const std::string where = "/field";
    if (!f.is_object()) throw ConfigError(where, "expected an object");

    std::optional<DistributionFamily> family;
    if (j.contains("family")) {
        try {
            family = parse_family(text(j["family"], "/family"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("/family", e.what());
        }
    }

    WeightField field;
    if (f.contains("preset")) {
        only_keys(f, where, {"preset", "params"});
        field = preset_from_json(f, where);
    } else if (f.contains("piecewise")) {
        only_keys(f, where, {"piecewise", "default_mu"});
        field = piecewise_from_json(f, where, family.value_or(DistributionFamily::Exponential));
    } else {
        throw ConfigError(where, "expected either 'preset' or 'piecewise'");
    }
    if (family) field.set_family(*family);

    try {
        if (j.contains("boundary_source")) {
            const json& b = j["boundary_source"];
            only_keys(b, "/boundary_source", {"x_axis", "y_axis"});
            BoundarySource src;
            if (b.contains("x_axis")) src.x_axis = nonnegative(b["x_axis"], "/boundary_source/x_axis");
            if (b.contains("y_axis")) src.y_axis = nonnegative(b["y_axis"], "/boundary_source/y_axis");
            field.set_boundary_source(src);
        }
        if (j.contains("line_sources")) {
            const json& list = j["line_sources"];
            if (!list.is_array()) throw ConfigError("/line_sources", "expected an array");
            for (std::size_t k = 0; k < list.size(); ++k) {
                const std::string lw = "/line_sources/" + std::to_string(k);
                only_keys(list[k], lw, {"axis", "offset", "strength"});
                if (!list[k].contains("axis") || !list[k].contains("offset") || !list[k].contains("strength")) {
                    throw ConfigError(lw, "line sources need axis, offset and strength");
                }
                LineSource src;
                try {
                    src.axis = parse_axis(text(list[k]["axis"], lw + "/axis"));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(lw + "/axis", e.what());
                }
                src.offset = number(list[k]["offset"], lw + "/offset");
                src.strength = nonnegative(list[k]["strength"], lw + "/strength");
                field.add_line_source(src);
            }
        }
    } catch (const DomainError& e) {
        throw ConfigError("/", e.what());
    }
    return field;
}

ExperimentConfig parse_config(const json& j)
{
    only_keys(j, "", {"family", "field", "boundary_source", "line_sources", "solver", "simulation", "compare", "path",
                      "tasep", "convergence", "output", "threads"});
    ExperimentConfig c;
    c.raw = j;
    c.field = build_field(j);

    if (j.contains("solver")) {
        const json& s = j["solver"];
        only_keys(s, "/solver", {"h", "extent", "base"});
        if (s.contains("h")) c.h = positive(s["h"], "/solver/h");
        if (s.contains("extent")) {
            const Point e = pair(s["extent"], "/solver/extent");
            if (!(e.x() > 0.0) || !(e.y() > 0.0)) throw ConfigError("/solver/extent", "must be positive");
            c.extent = {e.x(), e.y()};
        }
        if (s.contains("base")) c.base = pair(s["base"], "/solver/base");
    }
    if (c.base.x() > c.extent.x1 || c.base.y() > c.extent.x2) throw ConfigError("/solver/base", "outside the extent");

    if (j.contains("simulation")) {
        const json& s = j["simulation"];
        only_keys(s, "/simulation", {"N", "trials", "seed"});
        if (s.contains("N")) c.N = integer(s["N"], "/simulation/N", 1);
        if (s.contains("trials")) c.trials = static_cast<int>(integer(s["trials"], "/simulation/trials", 1));
        if (s.contains("seed")) {
            if (!s["seed"].is_number_unsigned()) throw ConfigError("/simulation/seed", "expected an unsigned integer");
            c.seed = s["seed"].get<std::uint64_t>();
        }
    }

    if (j.contains("compare")) {
        only_keys(j["compare"], "/compare", {"levels"});
        if (j["compare"].contains("levels")) c.levels = numbers(j["compare"]["levels"], "/compare/levels");
    }

    if (j.contains("path")) {
        const json& p = j["path"];
        only_keys(p, "/path", {"from", "eps", "s_step", "tolerance"});
        if (p.contains("from")) {
            if (!p["from"].is_array() || p["from"].empty()) throw ConfigError("/path/from", "expected a non-empty array");
            c.path_from.clear();
            for (std::size_t k = 0; k < p["from"].size(); ++k) {
                c.path_from.push_back(pair(p["from"][k], "/path/from/" + std::to_string(k)));
            }
        }
        if (p.contains("eps")) c.extract.eps = positive(p["eps"], "/path/eps");
        if (p.contains("s_step")) c.extract.s_step = positive(p["s_step"], "/path/s_step");
        if (p.contains("tolerance")) {
            only_keys(p["tolerance"], "/path/tolerance", {"eps_factor", "h_factor"});
            if (p["tolerance"].contains("eps_factor")) {
                c.tolerance.eps_factor = nonnegative(p["tolerance"]["eps_factor"], "/path/tolerance/eps_factor");
            }
            if (p["tolerance"].contains("h_factor")) {
                c.tolerance.h_factor = nonnegative(p["tolerance"]["h_factor"], "/path/tolerance/h_factor");
            }
        }
    }

    if (j.contains("tasep")) {
        const json& t = j["tasep"];
        only_keys(t, "/tasep", {"times", "slow_bond"});
        if (t.contains("times")) {
            c.tasep_times = numbers(t["times"], "/tasep/times");
            for (double v : c.tasep_times) {
                if (v < 0.0) throw ConfigError("/tasep/times", "times must be >= 0");
            }
        }
        if (t.contains("slow_bond")) {
            const json& s = t["slow_bond"];
            only_keys(s, "/tasep/slow_bond", {"r", "N", "trials"});
            SlowBondSpec sb;
            if (s.contains("r")) sb.r = positive(s["r"], "/tasep/slow_bond/r");
            if (sb.r > 1.0) throw ConfigError("/tasep/slow_bond/r", "must lie in (0, 1]");
            if (s.contains("N")) sb.N = integer(s["N"], "/tasep/slow_bond/N", 1);
            if (s.contains("trials")) sb.trials = static_cast<int>(integer(s["trials"], "/tasep/slow_bond/trials", 1));
            c.slow_bond = sb;
        }
    }

    if (j.contains("convergence")) {
        const json& v = j["convergence"];
        only_keys(v, "/convergence", {"h_list", "reference_h"});
        if (v.contains("h_list")) {
            c.h_list = numbers(v["h_list"], "/convergence/h_list");
            if (c.h_list.empty()) throw ConfigError("/convergence/h_list", "must not be empty");
            for (std::size_t k = 0; k < c.h_list.size(); ++k) {
                if (!(c.h_list[k] > 0.0)) throw ConfigError("/convergence/h_list", "entries must be > 0");
                if (k > 0 && !(c.h_list[k] < c.h_list[k - 1])) {
                    throw ConfigError("/convergence/h_list", "must be strictly decreasing");
                }
            }
        }
        if (v.contains("reference_h")) c.reference_h = positive(v["reference_h"], "/convergence/reference_h");
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        only_keys(o, "/output", {"dir", "binary"});
        if (o.contains("dir")) c.out_dir = text(o["dir"], "/output/dir");
        if (o.contains("binary")) {
            if (!o["binary"].is_boolean()) throw ConfigError("/output/binary", "expected a boolean");
            c.write_binary = o["binary"].get<bool>();
        }
    }

    if (j.contains("threads")) c.threads = static_cast<int>(integer(j["threads"], "/threads", 1));
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    json j;
    try {
        j = json::parse(io::read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError(path, std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

GridIndex ExperimentConfig::base_index() const
{
    return {static_cast<Eigen::Index>(std::llround(base.x() / h)), static_cast<Eigen::Index>(std::llround(base.y() / h))};
}

std::string ExperimentConfig::config_hash() const
{
    return io::hex64(io::fnv1a64(raw.dump()));
}

}  // namespace dlpp
