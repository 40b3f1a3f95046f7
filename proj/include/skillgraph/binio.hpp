#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "skillgraph/errors.hpp"

namespace skillgraph::util {

// Little-endian primitives for index persistence. Indexes are rebuildable
// artifacts, so the format favors simplicity over cross-arch portability.

inline void write_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

inline void write_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

inline void write_string(std::ostream& out, const std::string& s) {
    write_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline void write_f32_vec(std::ostream& out, const std::vector<float>& v) {
    write_u32(out, static_cast<std::uint32_t>(v.size()));
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(float)));
}

inline void write_u32_vec(std::ostream& out, const std::vector<std::uint32_t>& v) {
    write_u32(out, static_cast<std::uint32_t>(v.size()));
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(std::uint32_t)));
}

inline std::uint32_t read_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw IoError("unexpected end of index file");
    return v;
}

inline std::uint64_t read_u64(std::istream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw IoError("unexpected end of index file");
    return v;
}

inline double read_f64(std::istream& in) {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw IoError("unexpected end of index file");
    return v;
}

inline std::string read_string(std::istream& in) {
    auto n = read_u32(in);
    std::string s(n, '\0');
    in.read(s.data(), n);
    if (!in) throw IoError("unexpected end of index file");
    return s;
}

inline std::vector<float> read_f32_vec(std::istream& in) {
    auto n = read_u32(in);
    std::vector<float> v(n);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(n * sizeof(float)));
    if (!in) throw IoError("unexpected end of index file");
    return v;
}

inline std::vector<std::uint32_t> read_u32_vec(std::istream& in) {
    auto n = read_u32(in);
    std::vector<std::uint32_t> v(n);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(n * sizeof(std::uint32_t)));
    if (!in) throw IoError("unexpected end of index file");
    return v;
}

}  // namespace skillgraph::util
