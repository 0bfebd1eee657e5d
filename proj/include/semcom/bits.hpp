#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace semcom {

enum class Direction { Uplink, Downlink };
enum class SchemeTag { A, B, C };

inline const char* to_string(Direction d) {
    return d == Direction::Uplink ? "uplink" : "downlink";
}

inline const char* to_string(SchemeTag s) {
    switch (s) {
        case SchemeTag::A: return "A";
        case SchemeTag::B: return "B";
        default: return "C";
    }
}

using Bits = std::vector<std::uint8_t>;  // one 0/1 value per element

/// A counted payload of bits plus hop metadata; the unit of all bit
/// accounting in the simulator.
struct BitFrame {
    Bits bits;
    Direction direction = Direction::Downlink;
    SchemeTag scheme = SchemeTag::C;
    std::string purpose;

    std::size_t size() const { return bits.size(); }
};

/// Appends `width` bits of `value`, most significant first.
inline void append_bits(Bits& out, std::uint64_t value, int width) {
    for (int i = width - 1; i >= 0; --i)
        out.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
}

/// Reads `width` bits starting at `pos`, most significant first.
inline std::uint64_t read_bits(std::span<const std::uint8_t> bits, std::size_t pos, int width) {
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | (bits[pos + static_cast<std::size_t>(i)] & 1u);
    return v;
}

inline std::size_t hamming_distance(std::span<const std::uint8_t> a,
                                    std::span<const std::uint8_t> b) {
    std::size_t d = 0;
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    for (std::size_t i = 0; i < n; ++i) d += static_cast<std::size_t>(a[i] != b[i]);
    return d + (a.size() > b.size() ? a.size() - n : b.size() - n);
}

}  // namespace semcom
