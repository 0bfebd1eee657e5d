#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semcom/bits.hpp"
#include "semcom/channel.hpp"
#include "semcom/huffman.hpp"
#include "semcom/ldpc.hpp"

namespace semcom {

/// The traditional transmission stack: variable-length source coding plus
/// LDPC channel coding. Below `repeat_below_db` the coded frame is sent
/// `low_snr_repeat` times and combined by per-position majority before
/// decoding; a hard-decision rate-1/2 code is unusable at 0 dB otherwise.
struct ClassicalStack {
    HuffmanCodebook codebook;
    LdpcCode code;
    double repeat_below_db = 3.0;
    int low_snr_repeat = 3;  // odd

    int repeats_for(double snr_db) const {
        return snr_db < repeat_below_db ? low_snr_repeat : 1;
    }
};

/// Huffman -> zero-pad to a block multiple -> LDPC -> optional repetition.
BitFrame classical_encode(std::span<const std::uint8_t> payload, const ClassicalStack& stack,
                          double snr_db);

struct ClassicalDecodeResult {
    std::vector<std::uint8_t> payload;  // zero-padded up to expected_symbols
    int blocks = 0;
    int converged_blocks = 0;
    std::size_t decoded_symbols = 0;  // before padding
};

/// Majority-combine repeats, LDPC-decode, then prefix-decode at most
/// `expected_symbols` symbols; shortfall is padded with zero symbols so the
/// caller always gets a fixed-size payload.
ClassicalDecodeResult classical_decode(std::span<const std::uint8_t> bits,
                                       const ClassicalStack& stack, double snr_db,
                                       std::size_t expected_symbols);

/// One classical hop: encode, transmit, decode.
struct ClassicalHopResult {
    std::vector<std::uint8_t> payload;
    long long bits_on_air = 0;
    int bit_errors = 0;
    int blocks = 0;
    int converged_blocks = 0;
};

ClassicalHopResult classical_hop(std::span<const std::uint8_t> payload,
                                 const ClassicalStack& stack, const ChannelConfig& cfg,
                                 std::size_t expected_symbols);

}  // namespace semcom
