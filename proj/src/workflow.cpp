#include "semcom/workflow.hpp"

#include <algorithm>
#include <sstream>

#include "semcom/errors.hpp"
#include "semcom/rng.hpp"

namespace semcom {

namespace {

HuffmanCodebook uniform_codebook() {
    std::map<std::uint8_t, std::uint64_t> freq;
    for (int s = 0; s < 256; ++s) freq[static_cast<std::uint8_t>(s)] = 1;
    return huffman_build(freq);
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

std::uint64_t uplink_seed(const ChannelConfig& cfg) { return derive_seed(cfg.seed, 0x0A11u); }
std::uint64_t downlink_seed(const ChannelConfig& cfg) { return derive_seed(cfg.seed, 0x0D22u); }
std::uint64_t generation_seed(const ChannelConfig& cfg) { return derive_seed(cfg.seed, 0x6A33u); }

void require_provisioning(const NetworkState& net) {
    if (net.stage != Stage::Provisioning)
        throw ConfigError("session: network is not in the provisioning stage");
}

void require_knowledge_equivalence(const NetworkState& net) {
    if (net.kb_cloud.version != net.kb_edge.version || net.kb_edge.version != net.kb_td.version)
        throw KnowledgeMismatchError("session: knowledge replicas disagree on version");
}

struct PromptLoopResult {
    Prompt sent_prompt;
    Scene generated;
    HopRecord hop;
};

// Steps shared by schemes A and C: extraction at the terminal, prompt uplink
// over the traditional stack, regeneration in the cloud.
PromptLoopResult prompt_loop(const Scene& scene, const NetworkState& net, const ChannelConfig& cfg,
                             int user_id) {
    const UserProfile& user = net.users.at(static_cast<std::size_t>(user_id));
    const int k = net.params.keyword_budget;

    PromptLoopResult res;
    res.sent_prompt = extract_keywords(scene, user, k, net.kb_td.vocab);

    const std::string wire = prompt_to_text(res.sent_prompt, net.kb_td.vocab, k);
    std::vector<std::uint8_t> payload(wire.begin(), wire.end());
    const std::size_t expected = prompt_text_width(net.kb_td.vocab, k);

    ChannelConfig up{cfg.snr_db, uplink_seed(cfg)};
    auto hop = classical_hop(payload, net.text_stack, up, expected);

    res.hop = {"prompt-uplink", Direction::Uplink, "prompt", hop.bits_on_air, hop.bit_errors};

    const std::string received(hop.payload.begin(), hop.payload.end());
    const Prompt prompt_rx = prompt_from_text(received, net.kb_cloud.vocab, k);
    res.generated = generate_content(prompt_rx, user, net.kb_cloud, generation_seed(cfg));
    return res;
}

}  // namespace

NetworkState prepare_network(int user_count, const Vocabulary& vocab, std::uint64_t seed,
                             const SessionParams& params, const LdpcCode& code) {
    if (user_count < 1) throw ConfigError("prepare_network: need at least one user");
    vocab.validate();

    NetworkState net;
    net.params = params;
    net.kb_cloud = make_knowledge_base(vocab, derive_seed(seed, 0x0F00u));
    net.kb_edge = net.kb_cloud;
    net.kb_td = net.kb_cloud;

    for (int u = 0; u < user_count; ++u) {
        UserProfile profile = make_user_profile(u, vocab, derive_seed(seed, 0x0F01u));
        profile.history_capacity = params.history_capacity;
        net.users.push_back(std::move(profile));
    }

    net.text_stack = {uniform_codebook(), code, params.classical_repeat_below_db,
                      params.classical_low_snr_repeat};
    net.pixel_stack = net.text_stack;
    net.embedding = EmbeddingTable::make(vocab.class_count(), params.embedding_dim,
                                         params.embedding_seed);
    net.epoch = 0;
    net.stage = Stage::Provisioning;
    return net;
}

SessionResult run_session_on(SchemeTag scheme, const Scene& scene, const NetworkState& net,
                             const ChannelConfig& cfg, int user_id) {
    require_provisioning(net);
    require_knowledge_equivalence(net);
    if (user_id < 0 || user_id >= static_cast<int>(net.users.size()))
        throw ConfigError("session: unknown user");

    const SessionParams& p = net.params;
    const UserProfile& user = net.users[static_cast<std::size_t>(user_id)];

    SessionResult res;
    res.scheme = scheme;
    res.snr_db = cfg.snr_db;
    res.user_id = user_id;
    res.original_scene = scene;

    if (scheme == SchemeTag::B) {
        const ProtectionProfile& profile = p.bands.select(cfg.snr_db);

        SemanticFrame up_frame = semantic_encode(scene, net.kb_td, profile);
        BitFrame up_air{up_frame.bits, Direction::Uplink, SchemeTag::B, "semantic-frame"};
        auto up_tx = transmit(up_air, ChannelConfig{cfg.snr_db, uplink_seed(cfg)});
        auto up_dec = semantic_decode(up_tx.received.bits, net.kb_edge, profile);
        res.uplink_bits = static_cast<long long>(up_frame.bits.size());
        res.hops.push_back({"scene-uplink", Direction::Uplink, "semantic-frame",
                            res.uplink_bits, up_tx.bit_errors});

        SemanticFrame down_frame = semantic_encode(up_dec.scene, net.kb_edge, profile);
        BitFrame down_air{down_frame.bits, Direction::Downlink, SchemeTag::B, "semantic-frame"};
        auto down_tx = transmit(down_air, ChannelConfig{cfg.snr_db, downlink_seed(cfg)});
        auto down_dec = semantic_decode(down_tx.received.bits, net.kb_td, profile);
        res.downlink_bits = static_cast<long long>(down_frame.bits.size());
        res.downlink_bit_errors = down_tx.bit_errors;
        res.hops.push_back({"scene-downlink", Direction::Downlink, "semantic-frame",
                            res.downlink_bits, down_tx.bit_errors});

        res.sent_scene = scene;
        res.downlink_decoded_scene = down_dec.scene;
        res.received_scene = down_dec.scene;
        res.semantic_failure = up_dec.semantic_failure || down_dec.semantic_failure;
        res.sent_image = render(res.sent_scene, p.render_height, p.render_width);
        res.received_image = render(res.received_scene, p.render_height, p.render_width);
        res.feedback_score =
            clamp01(semantic_similarity(res.original_scene, res.received_scene, net.embedding));
        return res;
    }

    // Schemes A and C share the extraction / uplink / regeneration loop.
    PromptLoopResult loop = prompt_loop(scene, net, cfg, user_id);
    res.prompt = loop.sent_prompt;
    res.uplink_bits = loop.hop.bits;
    res.hops.push_back(loop.hop);
    res.sent_scene = loop.generated;
    res.sent_image = render(loop.generated, p.render_height, p.render_width);

    if (scheme == SchemeTag::A) {
        const std::size_t expected =
            static_cast<std::size_t>(p.render_height) * static_cast<std::size_t>(p.render_width);
        ChannelConfig down{cfg.snr_db, downlink_seed(cfg)};
        auto hop = classical_hop(res.sent_image.pixels, net.pixel_stack, down, expected);
        res.downlink_bits = hop.bits_on_air;
        res.downlink_bit_errors = hop.bit_errors;
        res.hops.push_back({"pixel-downlink", Direction::Downlink, "pixels", hop.bits_on_air,
                            hop.bit_errors});

        res.received_image = Image{p.render_height, p.render_width, std::move(hop.payload)};
        res.object_metrics = false;  // no scene view at the receiver
        res.feedback_score =
            clamp01(psnr(res.sent_image, res.received_image, p.psnr_cap_db) / p.psnr_cap_db);
        return res;
    }

    // Scheme C: SNR-banded semantic downlink, then receiver-side calibration.
    const ProtectionProfile& profile = p.bands.select(cfg.snr_db);
    SemanticFrame frame = semantic_encode(loop.generated, net.kb_edge, profile);
    BitFrame on_air{frame.bits, Direction::Downlink, SchemeTag::C, "semantic-frame"};
    auto tx = transmit(on_air, ChannelConfig{cfg.snr_db, downlink_seed(cfg)});
    auto dec = semantic_decode(tx.received.bits, net.kb_td, profile);
    res.downlink_bits = static_cast<long long>(frame.bits.size());
    res.downlink_bit_errors = tx.bit_errors;
    res.hops.push_back({"semantic-downlink", Direction::Downlink, "semantic-frame",
                        res.downlink_bits, tx.bit_errors});

    res.downlink_decoded_scene = dec.scene;
    res.received_scene = calibrate(dec.scene, net.kb_td, user);
    res.semantic_failure = dec.semantic_failure;
    res.received_image = render(res.received_scene, p.render_height, p.render_width);
    res.feedback_score =
        clamp01(semantic_similarity(res.original_scene, res.received_scene, net.embedding));
    return res;
}

namespace {

SessionResult run_with_retry(SchemeTag scheme, const Scene& scene, NetworkState& net,
                             const ChannelConfig& cfg, int user_id) {
    long long control_bits = 0;
    SessionResult res;
    try {
        res = run_session_on(scheme, scene, net, cfg, user_id);
    } catch (const KnowledgeMismatchError&) {
        control_bits = share_knowledge(net);
        res = run_session_on(scheme, scene, net, cfg, user_id);  // one retry
    }
    res.control_bits = control_bits;
    if (res.prompt)
        net.users.at(static_cast<std::size_t>(user_id)).remember(*res.prompt);
    return res;
}

}  // namespace

SessionResult run_session_c(const Scene& scene, NetworkState& net, const ChannelConfig& cfg) {
    return run_with_retry(SchemeTag::C, scene, net, cfg, 0);
}

SessionResult run_session_a(const Scene& scene, NetworkState& net, const ChannelConfig& cfg) {
    return run_with_retry(SchemeTag::A, scene, net, cfg, 0);
}

SessionResult run_session_b(const Scene& scene, NetworkState& net, const ChannelConfig& cfg) {
    return run_with_retry(SchemeTag::B, scene, net, cfg, 0);
}

std::string serialize_vocabulary(const Vocabulary& vocab) {
    std::ostringstream out;
    out << "vocab " << vocab.version << ' ' << vocab.canvas_height << ' ' << vocab.canvas_width
        << '\n';
    out << "classes";
    for (const auto& c : vocab.class_labels) out << ' ' << c;
    out << "\ncolors";
    for (const auto& c : vocab.color_palette) out << ' ' << c;
    out << "\nsizes";
    for (int s : vocab.size_levels) out << ' ' << s;
    out << '\n';
    return out.str();
}

long long share_knowledge(NetworkState& net) {
    KnowledgeBase* replicas[] = {&net.kb_cloud, &net.kb_edge, &net.kb_td};
    KnowledgeBase* newest = replicas[0];
    for (auto* kb : replicas)
        if (kb->version > newest->version) newest = kb;

    bool any_stale = false;
    for (auto* kb : replicas) any_stale = any_stale || kb->version != newest->version;
    if (!any_stale) return 0;

    const KnowledgeBase shared = *newest;
    for (auto* kb : replicas) *kb = shared;
    return static_cast<long long>(serialize_vocabulary(shared.vocab).size()) * 8;
}

void sync_update(NetworkState& net, std::span<const SessionResult> results) {
    if (results.empty()) throw ConfigError("sync_update: no session results");
    for (const auto& r : results) {
        if (r.user_id < 0 || r.user_id >= static_cast<int>(net.users.size())) continue;
        net.users[static_cast<std::size_t>(r.user_id)].feedback_scores.push_back(r.feedback_score);
        net.feedback_cache.push_back({r.user_id, r.feedback_score, r.received_scene});
    }
    if (static_cast<int>(net.feedback_cache.size()) < net.params.sync_period) return;

    net.stage = Stage::SyncUpdate;

    // flush: each user's preferences adopt the attributes of their
    // highest-scoring cached session (earliest entry wins ties)
    for (auto& user : net.users) {
        const FeedbackEntry* best = nullptr;
        for (const auto& e : net.feedback_cache) {
            if (e.user_id != user.user_id) continue;
            if (!best || e.score > best->score) best = &e;
        }
        if (!best) continue;
        std::vector<const SceneObject*> order;
        for (const auto& o : best->received.objects) order.push_back(&o);
        std::sort(order.begin(), order.end(),
                  [](const SceneObject* a, const SceneObject* b) { return a->id < b->id; });
        std::map<int, bool> seen;
        for (const SceneObject* o : order) {
            if (seen[o->class_id]) continue;
            seen[o->class_id] = true;
            const int level = net.kb_td.vocab.size_level_index(o->size);
            if (level < 0) continue;
            user.preference[o->class_id] = {o->color, level};
        }
    }
    net.feedback_cache.clear();
    ++net.epoch;
    net.stage = Stage::Provisioning;
}

SessionRow make_session_row(const SessionResult& result, int session_index,
                            const NetworkState& net) {
    SessionRow row;
    row.scheme = result.scheme;
    row.snr_db = result.snr_db;
    row.session_index = session_index;
    row.original_objects = static_cast<int>(result.original_scene.objects.size());
    row.psnr_db = psnr(result.sent_image, result.received_image, net.params.psnr_cap_db);
    row.object_metrics = result.object_metrics;
    if (result.object_metrics) {
        row.similarity = semantic_similarity(result.original_scene, result.received_scene,
                                             net.embedding);
        row.recovery = recovery_ratio(result.original_scene, result.received_scene);
        row.discrepancy = quantity_discrepancy(result.original_scene, result.received_scene);
    }
    row.semantic_failure = result.semantic_failure;
    row.uplink_bits = result.uplink_bits;
    row.downlink_bits = result.downlink_bits;
    row.control_bits = result.control_bits;
    row.feedback = result.feedback_score;
    return row;
}

}  // namespace semcom
