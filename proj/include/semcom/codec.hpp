#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "semcom/bits.hpp"
#include "semcom/channel.hpp"
#include "semcom/gai.hpp"
#include "semcom/scene.hpp"

namespace semcom {

/// Repetition factors per field group; higher repetition means higher
/// semantic importance. All factors must be odd so majority votes resolve.
struct ProtectionProfile {
    int header_rep = 5;
    int class_rep = 3;
    int attribute_rep = 1;
};

/// SNR-banded encoder selection: harsher channels get heavier protection.
struct ProtectionBands {
    double low_below_db = 3.0;
    double high_at_db = 8.0;
    ProtectionProfile low{7, 5, 3};
    ProtectionProfile mid{5, 3, 3};
    ProtectionProfile high{5, 3, 1};

    const ProtectionProfile& select(double snr_db) const {
        if (snr_db < low_below_db) return low;
        return snr_db < high_at_db ? mid : high;
    }
};

/// Fixed per-record field widths, derived from the vocabulary domain sizes so
/// both endpoints compute the same layout.
struct RecordLayout {
    int class_bits = 1;
    int row_bits = 1;
    int col_bits = 1;
    int size_bits = 1;
    int color_bits = 1;

    static RecordLayout for_vocab(const Vocabulary& vocab);

    int record_width(const ProtectionProfile& p) const {
        return class_bits * p.class_rep + (row_bits + col_bits + size_bits + color_bits) * p.attribute_rep;
    }
    // header block: 16-bit object count, 16-bit vocabulary version,
    // background color field
    int header_width(const ProtectionProfile& p) const {
        return (16 + 16 + color_bits) * p.header_rep;
    }
};

struct SemanticFrame {
    Bits bits;
    int object_count = 0;
    int vocab_version = 0;
};

/// One fixed-layout record per object (ascending id order). Attributes
/// outside the knowledge base vocabulary raise KnowledgeMismatchError.
SemanticFrame semantic_encode(const Scene& scene, const KnowledgeBase& kb,
                              const ProtectionProfile& profile);

struct SemanticDecodeResult {
    Scene scene;
    bool semantic_failure = false;  // unrecoverable header; scene is empty
};

/// Majority vote per repeated field, then projection of each field value
/// onto the nearest valid vocabulary entry (Hamming distance on field bits,
/// ties to the lowest index). Never throws on noisy input; `project=false`
/// is the raw-majority ablation used by tests.
SemanticDecodeResult semantic_decode(std::span<const std::uint8_t> bits, const KnowledgeBase& kb,
                                     const ProtectionProfile& profile, bool project = true);

struct JsccResult {
    Scene decoded;
    long long downlink_bits = 0;
    bool semantic_failure = false;
    int bit_errors = 0;
};

/// semantic_encode -> transmit -> semantic_decode with the profile selected
/// by the SNR band. downlink_bits is exactly the frame length on air.
JsccResult jscc_session(const Scene& scene, const KnowledgeBase& kb, const ChannelConfig& cfg,
                        const ProtectionBands& bands);

/// Debug dump: header line plus one hex line per record.
std::string frame_hex_dump(const SemanticFrame& frame, const KnowledgeBase& kb,
                           const ProtectionProfile& profile);

}  // namespace semcom
