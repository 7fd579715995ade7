// SPDX-License-Identifier: Apache-2.0
#include "dlpp/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace dlpp::io {

namespace {

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    return std::string(s.substr(b, e - b + 1));
}

void put_u64_le(std::ostream& os, std::uint64_t v)
{
    std::array<char, 8> bytes{};
    for (int k = 0; k < 8; ++k) bytes[static_cast<std::size_t>(k)] = static_cast<char>((v >> (8 * k)) & 0xffu);
    os.write(bytes.data(), 8);
}

std::uint64_t get_u64_le(std::istream& is)
{
    std::array<unsigned char, 8> bytes{};
    if (!is.read(reinterpret_cast<char*>(bytes.data()), 8)) throw IoError("truncated binary grid");
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(bytes[static_cast<std::size_t>(k)]) << (8 * k);
    return v;
}

}  // namespace

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw IoError("failed to format number");
    return std::string(buf.data(), end);
}

void write_grid_csv(std::ostream& os, const GridArray<double>& values, std::string_view header)
{
    os << "# " << header << '\n';
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            if (j) os << ',';
            os << format_double(values(i, j));
        }
        os << '\n';
    }
}

GridFile read_grid_csv(std::istream& is)
{
    GridFile file;
    std::string line;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw IoError("grid CSV is missing its '# ' header");
    std::stringstream header(line.substr(2));
    std::string item;
    while (std::getline(header, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw IoError("malformed header entry '" + item + "'");
        file.header[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }

    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        while (std::getline(ls, item, ',')) {
            const std::string t = trim(item);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc{} || ptr != t.data() + t.size()) throw IoError("bad number '" + t + "' in grid CSV");
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) throw IoError("ragged grid CSV");
        rows.push_back(std::move(row));
    }
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = rows.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.front().size());
    file.values.resize(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) file.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return file;
}

void write_passage_csv(std::ostream& os, const PassageField& pf)
{
    std::ostringstream h;
    h << "dims=" << pf.dims().rows << 'x' << pf.dims().cols << ", N=" << pf.sample().scale_N
      << ", seed=" << pf.sample().seed;
    write_grid_csv(os, pf.values(), h.str());
}

void write_value_grid_csv(std::ostream& os, const ValueGrid& vg)
{
    std::ostringstream h;
    h << "kind=value_grid, dims=" << vg.rows() << 'x' << vg.cols() << ", h=" << format_double(vg.spacing())
      << ", base=" << vg.base().i << ';' << vg.base().j;
    write_grid_csv(os, vg.values(), h.str());
}

void write_grid_binary(std::ostream& os, const GridArray<double>& values)
{
    os.write(kBinaryMagic.data(), static_cast<std::streamsize>(kBinaryMagic.size()));
    put_u64_le(os, static_cast<std::uint64_t>(values.rows()));
    put_u64_le(os, static_cast<std::uint64_t>(values.cols()));
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) put_u64_le(os, std::bit_cast<std::uint64_t>(values(i, j)));
    }
}

GridArray<double> read_grid_binary(std::istream& is)
{
    std::array<char, 5> magic{};
    if (!is.read(magic.data(), 5) || std::string_view(magic.data(), 5) != kBinaryMagic) {
        throw IoError("not a DLPP1 binary grid");
    }
    const std::uint64_t rows = get_u64_le(is);
    const std::uint64_t cols = get_u64_le(is);
    if (rows > (1ull << 32) || cols > (1ull << 32)) throw IoError("implausible binary grid dims");
    GridArray<double> values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) values(i, j) = std::bit_cast<double>(get_u64_le(is));
    }
    return values;
}

void write_path_ndjson(std::ostream& os, const LatticePath& path)
{
    for (const auto& p : path) os << "{\"i\":" << p.i << ",\"j\":" << p.j << "}\n";
}

void write_curve_ndjson(std::ostream& os, const MonotoneCurve& curve)
{
    for (const auto& p : curve.points) {
        os << "{\"x\":" << format_double(p.x()) << ",\"y\":" << format_double(p.y()) << "}\n";
    }
}

void write_level_sets_csv(std::ostream& os, const std::vector<LevelSet>& sets)
{
    os << "x,y,level,polyline\n";
    for (const auto& set : sets) {
        for (std::size_t k = 0; k < set.polylines.size(); ++k) {
            for (const auto& p : set.polylines[k]) {
                os << format_double(p.x()) << ',' << format_double(p.y()) << ',' << format_double(set.level) << ','
                   << k << '\n';
            }
        }
    }
}

void write_height_csv(std::ostream& os, const HeightProfile& profile)
{
    os << "j,h\n";
    for (long j = profile.j_min; j <= profile.j_max(); ++j) os << j << ',' << profile.at(j) << '\n';
}

void write_density_csv(std::ostream& os, const DensitySample& d)
{
    os << "i,j,x1,x2,s,t,rho,defined\n";
    for (Eigen::Index i = 0; i < d.rho.rows(); ++i) {
        for (Eigen::Index j = 0; j < d.rho.cols(); ++j) {
            os << i << ',' << j << ',' << format_double(static_cast<double>(i) * d.h) << ','
               << format_double(static_cast<double>(j) * d.h) << ',' << format_double(d.chart_s(i, j)) << ','
               << format_double(d.chart_t(i, j)) << ',' << (d.defined(i, j) ? format_double(d.rho(i, j)) : "nan")
               << ',' << (d.defined(i, j) ? 1 : 0) << '\n';
        }
    }
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf.data(), 16);
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace dlpp::io
