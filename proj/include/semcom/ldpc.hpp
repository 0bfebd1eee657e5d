#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semcom/bits.hpp"

namespace semcom {

/// Regular (3,6) LDPC code with a systematic encoder and hard-decision
/// bit-flipping decoder. The parity matrix is built deterministically from a
/// seed: column weight 3, row weight 6, no two columns share more than one
/// check, full row rank. Message bits occupy positions [0, k).
class LdpcCode {
public:
    static LdpcCode make(int n, int k, int max_iterations, std::uint64_t seed);

    int n() const { return n_; }
    int k() const { return k_; }
    int max_iterations() const { return max_iterations_; }

    /// Row r of the parity matrix as the sorted list of column indices.
    const std::vector<std::vector<int>>& check_columns() const { return check_cols_; }

    /// H * word over GF(2); true entries are unsatisfied checks.
    std::vector<std::uint8_t> syndrome(std::span<const std::uint8_t> word) const;
    bool parity_ok(std::span<const std::uint8_t> word) const;

private:
    int n_ = 0, k_ = 0, max_iterations_ = 0;
    std::vector<std::vector<int>> check_cols_;           // (n-k) x 6
    std::vector<std::vector<int>> col_checks_;           // n x 3
    std::vector<std::vector<std::uint64_t>> parity_of_;  // per message bit, packed parity pattern

    friend Bits ldpc_encode(std::span<const std::uint8_t>, const LdpcCode&);
    friend struct LdpcDecodeResult ldpc_decode(std::span<const std::uint8_t>, const LdpcCode&);
};

/// message must be exactly k bits (callers pad shorter tails with zeros).
Bits ldpc_encode(std::span<const std::uint8_t> message, const LdpcCode& code);

struct LdpcDecodeResult {
    Bits message;
    bool converged = false;
};

/// Gallager bit-flipping: per iteration flips every bit attaining the maximum
/// unsatisfied-check count (when that maximum is at least 2). Non-convergence
/// is reported, never thrown.
LdpcDecodeResult ldpc_decode(std::span<const std::uint8_t> received, const LdpcCode& code);

/// Segments into k-bit blocks, zero-padding the tail.
Bits ldpc_encode_stream(std::span<const std::uint8_t> message, const LdpcCode& code);

struct LdpcStreamDecodeResult {
    Bits message;  // k bits per block, padding included
    int blocks = 0;
    int converged_blocks = 0;
};

LdpcStreamDecodeResult ldpc_decode_stream(std::span<const std::uint8_t> received,
                                          const LdpcCode& code);

}  // namespace semcom
