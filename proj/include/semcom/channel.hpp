#pragma once

#include <cstdint>

#include "semcom/bits.hpp"

namespace semcom {

/// snr_db is Es/N0 per BPSK symbol. The seed fixes the noise realization, so
/// transmit is a pure function of (frame, cfg).
struct ChannelConfig {
    double snr_db = 0.0;
    std::uint64_t seed = 0;
};

struct TransmitResult {
    BitFrame received;
    int bit_errors = 0;
};

/// BPSK over AWGN: 0 -> +1, 1 -> -1, noise variance 1/(2*10^(snr_db/10)) per
/// real dimension, hard demodulation by sign.
TransmitResult transmit(const BitFrame& frame, const ChannelConfig& cfg);

}  // namespace semcom
