#include "semcom/codec.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "semcom/errors.hpp"

namespace semcom {

namespace {

int width_for(int domain_size) {
    int w = 1;
    while ((1 << w) < domain_size) ++w;
    return w;
}

void append_repeated(Bits& out, std::uint64_t value, int width, int repeats) {
    for (int r = 0; r < repeats; ++r) append_bits(out, value, width);
}

// Majority vote per bit position across `repeats` contiguous copies.
std::uint64_t majority_field(std::span<const std::uint8_t> bits, std::size_t base, int width,
                             int repeats) {
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
        int ones = 0;
        for (int r = 0; r < repeats; ++r)
            ones += bits[base + static_cast<std::size_t>(r * width + i)] & 1u;
        v = (v << 1) | (ones * 2 > repeats ? 1u : 0u);
    }
    return v;
}

// Nearest valid value by Hamming distance on the field bits, ties to the
// lowest index. Values already in the domain project to themselves.
int project_value(std::uint64_t raw, int domain_size) {
    if (raw < static_cast<std::uint64_t>(domain_size)) return static_cast<int>(raw);
    int best = 0;
    int best_dist = 65;
    for (int v = 0; v < domain_size; ++v) {
        const int dist = std::popcount(raw ^ static_cast<std::uint64_t>(v));
        if (dist < best_dist) {
            best_dist = dist;
            best = v;
        }
    }
    return best;
}

int resolve_value(std::uint64_t raw, int domain_size, bool project) {
    return project ? project_value(raw, domain_size)
                   : static_cast<int>(raw % static_cast<std::uint64_t>(domain_size));
}

}  // namespace

RecordLayout RecordLayout::for_vocab(const Vocabulary& vocab) {
    RecordLayout layout;
    layout.class_bits = width_for(vocab.class_count());
    layout.row_bits = width_for(vocab.canvas_height);
    layout.col_bits = width_for(vocab.canvas_width);
    layout.size_bits = width_for(vocab.size_count());
    layout.color_bits = width_for(vocab.color_count());
    return layout;
}

SemanticFrame semantic_encode(const Scene& scene, const KnowledgeBase& kb,
                              const ProtectionProfile& profile) {
    const Vocabulary& vocab = kb.vocab;
    if (scene.canvas_height != vocab.canvas_height || scene.canvas_width != vocab.canvas_width)
        throw KnowledgeMismatchError("semantic_encode: canvas disagrees with knowledge base");
    if (scene.background < 0 || scene.background >= vocab.color_count())
        throw KnowledgeMismatchError("semantic_encode: background outside palette");
    if (scene.objects.size() > 0xFFFF)
        throw ConfigError("semantic_encode: object count exceeds header range");

    std::vector<const SceneObject*> order;
    order.reserve(scene.objects.size());
    for (const auto& o : scene.objects) {
        if (o.class_id < 0 || o.class_id >= vocab.class_count())
            throw KnowledgeMismatchError("semantic_encode: class outside vocabulary");
        if (o.color < 0 || o.color >= vocab.color_count())
            throw KnowledgeMismatchError("semantic_encode: color outside palette");
        if (vocab.size_level_index(o.size) < 0)
            throw KnowledgeMismatchError("semantic_encode: size not a vocabulary level");
        if (o.row < 0 || o.col < 0 || o.row + o.size > scene.canvas_height ||
            o.col + o.size > scene.canvas_width)
            throw ConfigError("semantic_encode: object outside canvas");
        order.push_back(&o);
    }
    std::sort(order.begin(), order.end(),
              [](const SceneObject* a, const SceneObject* b) { return a->id < b->id; });

    const RecordLayout layout = RecordLayout::for_vocab(vocab);
    SemanticFrame frame;
    frame.object_count = static_cast<int>(scene.objects.size());
    frame.vocab_version = kb.version;

    Bits header_block;
    append_bits(header_block, static_cast<std::uint64_t>(frame.object_count), 16);
    append_bits(header_block, static_cast<std::uint64_t>(kb.version & 0xFFFF), 16);
    append_bits(header_block, static_cast<std::uint64_t>(scene.background), layout.color_bits);
    for (int r = 0; r < profile.header_rep; ++r)
        frame.bits.insert(frame.bits.end(), header_block.begin(), header_block.end());

    for (const SceneObject* o : order) {
        append_repeated(frame.bits, static_cast<std::uint64_t>(o->class_id), layout.class_bits,
                        profile.class_rep);
        append_repeated(frame.bits, static_cast<std::uint64_t>(o->row), layout.row_bits,
                        profile.attribute_rep);
        append_repeated(frame.bits, static_cast<std::uint64_t>(o->col), layout.col_bits,
                        profile.attribute_rep);
        append_repeated(frame.bits, static_cast<std::uint64_t>(vocab.size_level_index(o->size)),
                        layout.size_bits, profile.attribute_rep);
        append_repeated(frame.bits, static_cast<std::uint64_t>(o->color), layout.color_bits,
                        profile.attribute_rep);
    }
    return frame;
}

SemanticDecodeResult semantic_decode(std::span<const std::uint8_t> bits, const KnowledgeBase& kb,
                                     const ProtectionProfile& profile, bool project) {
    const Vocabulary& vocab = kb.vocab;
    const RecordLayout layout = RecordLayout::for_vocab(vocab);
    const int header_block = 16 + 16 + layout.color_bits;
    const std::size_t header_width = static_cast<std::size_t>(layout.header_width(profile));

    SemanticDecodeResult res;
    res.scene.canvas_height = vocab.canvas_height;
    res.scene.canvas_width = vocab.canvas_width;
    res.scene.background = 0;

    if (bits.size() < header_width) {
        res.semantic_failure = true;
        return res;
    }

    // header fields interleave within each repeated block, so majority runs
    // per field with stride = header block width
    const auto header_majority = [&](int offset, int width) {
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) {
            int ones = 0;
            for (int r = 0; r < profile.header_rep; ++r)
                ones += bits[static_cast<std::size_t>(r * header_block + offset + i)] & 1u;
            v = (v << 1) | (ones * 2 > profile.header_rep ? 1u : 0u);
        }
        return v;
    };

    const std::uint64_t count = header_majority(0, 16);
    const std::uint64_t version = header_majority(16, 16);
    const std::uint64_t bg_raw = header_majority(32, layout.color_bits);
    (void)version;  // replica equivalence is enforced at session start, not from noisy headers

    const std::size_t record_width = static_cast<std::size_t>(layout.record_width(profile));
    if (bits.size() != header_width + count * record_width) {
        res.semantic_failure = true;
        return res;
    }

    res.scene.background = resolve_value(bg_raw, vocab.color_count(), project);

    std::size_t pos = header_width;
    for (std::uint64_t i = 0; i < count; ++i) {
        SceneObject o;
        o.id = static_cast<int>(i);
        o.class_id = resolve_value(majority_field(bits, pos, layout.class_bits, profile.class_rep),
                                   vocab.class_count(), project);
        pos += static_cast<std::size_t>(layout.class_bits * profile.class_rep);
        int row = resolve_value(majority_field(bits, pos, layout.row_bits, profile.attribute_rep),
                                vocab.canvas_height, project);
        pos += static_cast<std::size_t>(layout.row_bits * profile.attribute_rep);
        int col = resolve_value(majority_field(bits, pos, layout.col_bits, profile.attribute_rep),
                                vocab.canvas_width, project);
        pos += static_cast<std::size_t>(layout.col_bits * profile.attribute_rep);
        const int size_level =
            resolve_value(majority_field(bits, pos, layout.size_bits, profile.attribute_rep),
                          vocab.size_count(), project);
        pos += static_cast<std::size_t>(layout.size_bits * profile.attribute_rep);
        o.color = resolve_value(majority_field(bits, pos, layout.color_bits, profile.attribute_rep),
                                vocab.color_count(), project);
        pos += static_cast<std::size_t>(layout.color_bits * profile.attribute_rep);

        o.size = vocab.size_levels[static_cast<std::size_t>(size_level)];
        o.row = std::min(row, vocab.canvas_height - o.size);
        o.col = std::min(col, vocab.canvas_width - o.size);
        res.scene.objects.push_back(o);
    }
    return res;
}

JsccResult jscc_session(const Scene& scene, const KnowledgeBase& kb, const ChannelConfig& cfg,
                        const ProtectionBands& bands) {
    const ProtectionProfile& profile = bands.select(cfg.snr_db);
    SemanticFrame frame = semantic_encode(scene, kb, profile);

    BitFrame on_air;
    on_air.bits = frame.bits;
    on_air.purpose = "semantic-frame";
    auto tx = transmit(on_air, cfg);
    auto dec = semantic_decode(tx.received.bits, kb, profile);

    JsccResult res;
    res.decoded = std::move(dec.scene);
    res.downlink_bits = static_cast<long long>(frame.bits.size());
    res.semantic_failure = dec.semantic_failure;
    res.bit_errors = tx.bit_errors;
    return res;
}

std::string frame_hex_dump(const SemanticFrame& frame, const KnowledgeBase& kb,
                           const ProtectionProfile& profile) {
    const RecordLayout layout = RecordLayout::for_vocab(kb.vocab);
    const std::size_t header_width = static_cast<std::size_t>(layout.header_width(profile));
    const std::size_t record_width = static_cast<std::size_t>(layout.record_width(profile));

    const auto hex_of = [&](std::size_t base, std::size_t width) {
        static const char* digits = "0123456789abcdef";
        std::string s;
        std::uint8_t nibble = 0;
        int filled = 0;
        for (std::size_t i = 0; i < width; ++i) {
            nibble = static_cast<std::uint8_t>((nibble << 1) | (frame.bits[base + i] & 1u));
            if (++filled == 4) {
                s += digits[nibble];
                nibble = 0;
                filled = 0;
            }
        }
        if (filled) s += digits[nibble << (4 - filled)];
        return s;
    };

    std::ostringstream out;
    out << "header count=" << frame.object_count << " version=" << frame.vocab_version << ' '
        << hex_of(0, std::min(header_width, frame.bits.size())) << '\n';
    for (int i = 0; i < frame.object_count; ++i)
        out << "record " << i << ' ' << hex_of(header_width + static_cast<std::size_t>(i) * record_width, record_width)
            << '\n';
    return out.str();
}

}  // namespace semcom
