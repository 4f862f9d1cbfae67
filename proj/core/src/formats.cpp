// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#include "stagradar/formats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "stagradar/error.hpp"

namespace stagradar {

namespace {

constexpr std::array<char, 4> kCubeMagic{'R', 'D', 'C', '1'};
constexpr std::array<char, 4> kMapMagic{'R', 'A', 'M', '1'};

class Writer {
public:
    template <typename T>
    void put(T value) {
        using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                     std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                        std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
        const auto bits = std::bit_cast<U>(value);
        for (std::size_t i = 0; i < sizeof(T); ++i) bytes_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
    void put_bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        bytes_.insert(bytes_.end(), p, p + n);
    }
    [[nodiscard]] const std::vector<std::uint8_t>& bytes() const { return bytes_; }
    void reserve(std::size_t n) { bytes_.reserve(n); }

private:
    std::vector<std::uint8_t> bytes_;
};

class Reader {
public:
    explicit Reader(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}

    template <typename T>
    T get(const char* what) {
        using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                     std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                        std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
        need(sizeof(T), what);
        U bits = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(static_cast<U>(bytes_[pos_ + i]) << (8 * i));
        pos_ += sizeof(T);
        return std::bit_cast<T>(bits);
    }
    void get_bytes(void* out, std::size_t n, const char* what) {
        need(n, what);
        std::memcpy(out, bytes_.data() + pos_, n);
        pos_ += n;
    }
    void need(std::size_t n, const char* what) const {
        if (bytes_.size() - pos_ < n) {
            throw Error(ErrorKind::Parse, std::string("truncated file: ") + what + " at offset " + std::to_string(pos_) +
                                              " needs " + std::to_string(n) + " bytes, " +
                                              std::to_string(bytes_.size() - pos_) + " available");
        }
    }
    [[nodiscard]] std::size_t offset() const { return pos_; }
    [[nodiscard]] bool at_end() const { return pos_ == bytes_.size(); }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    in.seekg(0, std::ios::end);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(in.tellg()));
    in.seekg(0);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
    return bytes;
}

void dump(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace

void write_cube(const DataCube& cube, const ParamsDigest& digest, const std::filesystem::path& path) {
    Writer w;
    w.reserve(kCubeHeaderSize + cube.samples.size() * 8);
    w.put_bytes(kCubeMagic.data(), kCubeMagic.size());
    w.put<std::uint16_t>(kCubeFormatVersion);
    w.put<std::uint32_t>(cube.n_rx);
    w.put<std::uint32_t>(cube.n_chirps);
    w.put<std::uint32_t>(cube.n_fast);
    w.put<std::uint32_t>(cube.frame_index);
    w.put<double>(cube.pri);
    w.put_bytes(digest.data(), digest.size());
    if constexpr (std::endian::native == std::endian::little) {
        w.put_bytes(cube.samples.data(), cube.samples.size() * 8);
    } else {
        for (const auto& s : cube.samples) {
            w.put<float>(s.real());
            w.put<float>(s.imag());
        }
    }
    dump(w.bytes(), path);
}

CubeFile read_cube(const std::filesystem::path& path) {
    Reader r(slurp(path));
    std::array<char, 4> magic{};
    r.get_bytes(magic.data(), magic.size(), "magic");
    if (magic != kCubeMagic) throw Error(ErrorKind::Parse, "bad magic at offset 0 (expected RDC1)");
    CubeFile f;
    f.header.version = r.get<std::uint16_t>("version");
    if (f.header.version != kCubeFormatVersion) {
        throw Error(ErrorKind::Parse, "unsupported version " + std::to_string(f.header.version) + " at offset 4");
    }
    f.header.n_rx = r.get<std::uint32_t>("n_rx");
    f.header.n_chirps = r.get<std::uint32_t>("n_chirps");
    f.header.n_fast = r.get<std::uint32_t>("n_fast");
    f.header.frame_index = r.get<std::uint32_t>("frame_index");
    f.header.pri = r.get<double>("pri");
    r.get_bytes(f.header.params_digest.data(), f.header.params_digest.size(), "params digest");
    if (f.header.n_rx == 0 || f.header.n_chirps == 0 || f.header.n_fast == 0) {
        throw Error(ErrorKind::Parse, "zero dimension in header at offset 6");
    }
    const std::size_t count = static_cast<std::size_t>(f.header.n_rx) * f.header.n_chirps * f.header.n_fast;
    r.need(count * 8, "sample payload");
    f.cube = DataCube(f.header.n_rx, f.header.n_chirps, f.header.n_fast, f.header.frame_index, f.header.pri);
    if constexpr (std::endian::native == std::endian::little) {
        r.get_bytes(f.cube.samples.data(), count * 8, "sample payload");
    } else {
        for (auto& s : f.cube.samples) {
            const float re = r.get<float>("sample");
            const float im = r.get<float>("sample");
            s = {re, im};
        }
    }
    if (!r.at_end()) {
        throw Error(ErrorKind::Parse, "trailing bytes after sample payload at offset " + std::to_string(r.offset()));
    }
    return f;
}

void write_maps(std::span<const RangeAzimuthMap> maps, const std::filesystem::path& path) {
    Writer w;
    for (const auto& m : maps) {
        if (m.values.size() != static_cast<std::size_t>(m.rows) * m.cols || m.rows == 0 || m.cols == 0) {
            throw_invalid("map dimensions inconsistent with its values");
        }
        w.put_bytes(kMapMagic.data(), kMapMagic.size());
        w.put<std::uint8_t>(static_cast<std::uint8_t>(m.kind));
        w.put<std::uint32_t>(m.rows);
        w.put<std::uint32_t>(m.cols);
        w.put<double>(m.axis0_origin);
        w.put<double>(m.axis0_step);
        w.put<double>(m.axis1_origin);
        w.put<double>(m.axis1_step);
        w.put<double>(m.floor_db);
        for (double v : m.values) w.put<double>(v);
    }
    dump(w.bytes(), path);
}

std::vector<RangeAzimuthMap> read_maps(const std::filesystem::path& path) {
    Reader r(slurp(path));
    std::vector<RangeAzimuthMap> maps;
    do {
        const std::size_t start = r.offset();
        std::array<char, 4> magic{};
        r.get_bytes(magic.data(), magic.size(), "magic");
        if (magic != kMapMagic) throw Error(ErrorKind::Parse, "bad magic at offset " + std::to_string(start) + " (expected RAM1)");
        RangeAzimuthMap m;
        const auto kind = r.get<std::uint8_t>("kind");
        if (kind > 1) throw Error(ErrorKind::Parse, "unknown map kind at offset " + std::to_string(start + 4));
        m.kind = static_cast<MapKind>(kind);
        m.rows = r.get<std::uint32_t>("rows");
        m.cols = r.get<std::uint32_t>("cols");
        if (m.rows == 0 || m.cols == 0) throw Error(ErrorKind::Parse, "zero map dimension at offset " + std::to_string(start + 5));
        m.axis0_origin = r.get<double>("axis0 origin");
        m.axis0_step = r.get<double>("axis0 step");
        m.axis1_origin = r.get<double>("axis1 origin");
        m.axis1_step = r.get<double>("axis1 step");
        m.floor_db = r.get<double>("floor");
        const std::size_t n = static_cast<std::size_t>(m.rows) * m.cols;
        r.need(n * 8, "map payload");
        m.values.resize(n);
        for (auto& v : m.values) v = r.get<double>("map value");
        maps.push_back(std::move(m));
    } while (!r.at_end());
    return maps;
}

void write_pgm(const RangeAzimuthMap& map, const std::filesystem::path& path) {
    if (map.values.empty()) throw_invalid("cannot export an empty map");
    const double peak = *std::max_element(map.values.begin(), map.values.end());
    const double lo = map.floor_db;
    const double span = peak - lo;
    std::string header = "P5\n" + std::to_string(map.cols) + " " + std::to_string(map.rows) + "\n65535\n";
    std::vector<std::uint8_t> bytes(header.begin(), header.end());
    bytes.reserve(bytes.size() + map.values.size() * 2);
    for (double v : map.values) {
        const double t = span > 0.0 ? std::clamp((v - lo) / span, 0.0, 1.0) : 0.0;
        const auto px = static_cast<std::uint16_t>(std::lround(t * 65535.0));
        bytes.push_back(static_cast<std::uint8_t>(px >> 8));  // PGM samples are big-endian
        bytes.push_back(static_cast<std::uint8_t>(px & 0xff));
    }
    dump(bytes, path);
}

}  // namespace stagradar
