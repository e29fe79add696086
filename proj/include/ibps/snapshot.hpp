#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ibps/field.hpp"
#include "ibps/grid.hpp"

namespace ibps {

/// One stored field: the grid it lives on, the simulation time it was taken
/// at, a short name such as "omega" or "u1", and the values themselves.
struct Snapshot {
    Grid grid{2, 2, 1.0, 1.0};
    double time = 0.0;
    std::string name;
    std::vector<double> values; ///< row-major, x1 fastest

    PhysicalField field() const {
        PhysicalField f(grid);
        std::memcpy(f.data(), values.data(), values.size() * sizeof(double));
        return f;
    }
};

namespace detail {

inline bool little_endian_host() {
    const std::uint16_t probe = 1;
    std::uint8_t byte;
    std::memcpy(&byte, &probe, 1);
    return byte == 1;
}

/// Copy doubles as little-endian bytes regardless of host order.
inline void to_little_endian(const double* src, std::size_t count, std::vector<char>& out) {
    out.resize(count * 8);
    std::memcpy(out.data(), src, count * 8);
    if (!little_endian_host())
        for (std::size_t m = 0; m < count; ++m)
            for (int b = 0; b < 4; ++b) std::swap(out[8 * m + b], out[8 * m + 7 - b]);
}

inline void from_little_endian(std::vector<char>& bytes, double* dst, std::size_t count) {
    if (!little_endian_host())
        for (std::size_t m = 0; m < count; ++m)
            for (int b = 0; b < 4; ++b) std::swap(bytes[8 * m + b], bytes[8 * m + 7 - b]);
    std::memcpy(dst, bytes.data(), count * 8);
}

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

/// Write a field snapshot:
///   line 1          magic "FPS1"
///   comment lines   optional, starting with '#'
///   header line     n1 n2 l1 l2 time name
///   payload         n1*n2 doubles, 64-bit little-endian, row-major, x1 fastest
/// Lengths are printed with 17 significant digits so the header round-trips
/// the exact doubles.
inline void write_snapshot(const std::string& path, const PhysicalField& f, double time,
                           const std::string& name,
                           const std::vector<std::string>& comments = {}) {
    if (name.empty() || name.find_first_of(" \t\n\r") != std::string::npos)
        throw std::invalid_argument("snapshot name must be non-empty without whitespace");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open snapshot file for writing: " + path);
    const Grid& g = f.grid();
    out << "FPS1\n";
    for (const std::string& c : comments) out << "# " << c << "\n";
    out << g.n1 << " " << g.n2 << " " << detail::format_g17(g.l1) << " "
        << detail::format_g17(g.l2) << " " << detail::format_g17(time) << " " << name << "\n";
    std::vector<char> bytes;
    detail::to_little_endian(f.data(), f.size(), bytes);
    out.write(bytes.data(), std::streamsize(bytes.size()));
    out.flush();
    if (!out) throw std::runtime_error("short write on snapshot file: " + path);
}

/// Read a snapshot written by write_snapshot. Rejects a missing or wrong
/// magic line, malformed headers, and truncated payloads.
inline Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "FPS1")
        throw std::runtime_error("not a field snapshot (bad magic): " + path);
    do {
        if (!std::getline(in, line))
            throw std::runtime_error("snapshot header missing: " + path);
    } while (!line.empty() && line[0] == '#');
    std::istringstream header(line);
    Snapshot s;
    int n1 = 0, n2 = 0;
    double l1 = 0.0, l2 = 0.0;
    std::string trailing;
    if (!(header >> n1 >> n2 >> l1 >> l2 >> s.time >> s.name) || (header >> trailing))
        throw std::runtime_error("malformed snapshot header: " + path);
    if (n1 < 2 || n2 < 2 || l1 <= 0.0 || l2 <= 0.0)
        throw std::runtime_error("invalid snapshot dimensions: " + path);
    s.grid = Grid(n1, n2, l1, l2);
    const std::size_t count = std::size_t(n1) * std::size_t(n2);
    std::vector<char> bytes(count * 8);
    in.read(bytes.data(), std::streamsize(bytes.size()));
    if (std::size_t(in.gcount()) != bytes.size())
        throw std::runtime_error("truncated snapshot payload: " + path);
    s.values.resize(count);
    detail::from_little_endian(bytes, s.values.data(), count);
    return s;
}

} // namespace ibps
