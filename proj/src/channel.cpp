#include "semcom/channel.hpp"

#include <cmath>

#include "semcom/errors.hpp"
#include "semcom/rng.hpp"

namespace semcom {

TransmitResult transmit(const BitFrame& frame, const ChannelConfig& cfg) {
    if (!std::isfinite(cfg.snr_db)) throw ConfigError("transmit: snr_db must be finite");
    const double es_n0 = std::pow(10.0, cfg.snr_db / 10.0);
    const double sigma = std::sqrt(1.0 / (2.0 * es_n0));

    TransmitResult res;
    res.received = frame;
    GaussianSource noise(derive_seed(cfg.seed, 0xA36Bu));
    for (auto& b : res.received.bits) {
        const double x = b ? -1.0 : 1.0;
        const double y = x + sigma * noise.next();
        const std::uint8_t hard = y < 0.0 ? 1u : 0u;
        res.bit_errors += (hard != b) ? 1 : 0;
        b = hard;
    }
    return res;
}

}  // namespace semcom
