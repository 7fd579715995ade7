// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "dlpp/analysis.hpp"
#include "dlpp/curve.hpp"
#include "dlpp/lattice.hpp"
#include "dlpp/tasep.hpp"
#include "dlpp/value_grid.hpp"

namespace dlpp::io {

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A grid read back from disk together with its "# key=value, ..." header.
struct GridFile {
    std::map<std::string, std::string> header;
    GridArray<double> values;
};

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

// CSV grids: one header line "# k=v, k=v, ...", then one line per i holding
// the comma-separated values for j = 0..cols-1.
void write_grid_csv(std::ostream& os, const GridArray<double>& values, std::string_view header);
GridFile read_grid_csv(std::istream& is);

/// Header "# dims=RxC, N=..., seed=...".
void write_passage_csv(std::ostream& os, const PassageField& pf);
/// Header "# kind=value_grid, dims=RxC, h=..., base=i;j".
void write_value_grid_csv(std::ostream& os, const ValueGrid& vg);

// Binary grids: magic "DLPP1", then rows and cols as little-endian uint64,
// then rows*cols little-endian IEEE-754 doubles in row-major order.
inline constexpr std::string_view kBinaryMagic = "DLPP1";
void write_grid_binary(std::ostream& os, const GridArray<double>& values);
GridArray<double> read_grid_binary(std::istream& is);

/// One {"i":..,"j":..} object per line.
void write_path_ndjson(std::ostream& os, const LatticePath& path);
/// One {"x":..,"y":..} object per line, origin first.
void write_curve_ndjson(std::ostream& os, const MonotoneCurve& curve);

/// Columns x,y,level,polyline.
void write_level_sets_csv(std::ostream& os, const std::vector<LevelSet>& sets);
/// Columns j,h.
void write_height_csv(std::ostream& os, const HeightProfile& profile);
/// Columns i,j,x1,x2,s,t,rho,defined.
void write_density_csv(std::ostream& os, const DensitySample& density);

/// 64-bit FNV-1a, used for config hashes in metadata sidecars.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace dlpp::io
