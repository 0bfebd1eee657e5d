#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "semcom/bits.hpp"

namespace semcom {

/// Canonical prefix code over byte symbols. Canonical form makes the
/// codebook unique for a given frequency table, so sender and receiver can
/// derive it independently from shared statistics.
struct HuffmanCodebook {
    std::array<std::uint8_t, 256> length{};  // 0 = symbol absent
    std::array<std::uint32_t, 256> code{};   // MSB-first in the low `length` bits

    // canonical decode tables, indexed by code length
    std::array<std::uint32_t, 33> first_code{};
    std::array<std::uint32_t, 33> first_index{};
    std::array<std::uint32_t, 33> level_count{};
    std::vector<std::uint8_t> canonical_order;

    bool contains(std::uint8_t symbol) const { return length[symbol] != 0; }
    int max_length() const;

    /// Expected bits/symbol under the weights used to build the book.
    double average_length(const std::map<std::uint8_t, std::uint64_t>& freq) const;
};

/// Builds the canonical codebook. Throws ConfigError when no symbol has a
/// positive count. A single-symbol table degenerates to one 1-bit codeword.
HuffmanCodebook huffman_build(const std::map<std::uint8_t, std::uint64_t>& frequencies);

/// Throws CodingError on a symbol absent from the codebook.
BitFrame huffman_encode(std::span<const std::uint8_t> symbols, const HuffmanCodebook& book);

/// Strict inverse of huffman_encode; dangling suffix bits raise CodingError.
std::vector<std::uint8_t> huffman_decode(const BitFrame& frame, const HuffmanCodebook& book);

/// Lenient decode for noisy pipelines: emits at most `max_symbols` symbols
/// and silently drops an incomplete trailing codeword.
std::vector<std::uint8_t> huffman_decode_prefix(std::span<const std::uint8_t> bits,
                                                const HuffmanCodebook& book,
                                                std::size_t max_symbols);

/// Empirical entropy in bits/symbol of a frequency table.
double empirical_entropy(const std::map<std::uint8_t, std::uint64_t>& frequencies);

}  // namespace semcom
