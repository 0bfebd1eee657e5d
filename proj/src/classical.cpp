#include "semcom/classical.hpp"

#include "semcom/errors.hpp"

namespace semcom {

BitFrame classical_encode(std::span<const std::uint8_t> payload, const ClassicalStack& stack,
                          double snr_db) {
    BitFrame source = huffman_encode(payload, stack.codebook);
    Bits coded = ldpc_encode_stream(source.bits, stack.code);

    BitFrame frame;
    frame.purpose = "classical";
    const int repeats = stack.repeats_for(snr_db);
    frame.bits.reserve(coded.size() * static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) frame.bits.insert(frame.bits.end(), coded.begin(), coded.end());
    return frame;
}

ClassicalDecodeResult classical_decode(std::span<const std::uint8_t> bits,
                                       const ClassicalStack& stack, double snr_db,
                                       std::size_t expected_symbols) {
    const int repeats = stack.repeats_for(snr_db);
    if (repeats < 1 || bits.size() % static_cast<std::size_t>(repeats) != 0)
        throw CodingError("classical_decode: length not a repeat multiple");
    const std::size_t coded_len = bits.size() / static_cast<std::size_t>(repeats);

    Bits combined(coded_len, 0);
    for (std::size_t i = 0; i < coded_len; ++i) {
        int ones = 0;
        for (int r = 0; r < repeats; ++r)
            ones += bits[static_cast<std::size_t>(r) * coded_len + i] & 1u;
        combined[i] = ones * 2 > repeats ? 1u : 0u;
    }

    auto stream = ldpc_decode_stream(combined, stack.code);

    ClassicalDecodeResult res;
    res.blocks = stream.blocks;
    res.converged_blocks = stream.converged_blocks;
    res.payload = huffman_decode_prefix(stream.message, stack.codebook, expected_symbols);
    res.decoded_symbols = res.payload.size();
    res.payload.resize(expected_symbols, 0);
    return res;
}

ClassicalHopResult classical_hop(std::span<const std::uint8_t> payload,
                                 const ClassicalStack& stack, const ChannelConfig& cfg,
                                 std::size_t expected_symbols) {
    BitFrame frame = classical_encode(payload, stack, cfg.snr_db);
    auto tx = transmit(frame, cfg);
    auto dec = classical_decode(tx.received.bits, stack, cfg.snr_db, expected_symbols);

    ClassicalHopResult res;
    res.payload = std::move(dec.payload);
    res.bits_on_air = static_cast<long long>(frame.size());
    res.bit_errors = tx.bit_errors;
    res.blocks = dec.blocks;
    res.converged_blocks = dec.converged_blocks;
    return res;
}

}  // namespace semcom
