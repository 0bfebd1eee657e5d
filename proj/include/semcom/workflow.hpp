#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semcom/bits.hpp"
#include "semcom/channel.hpp"
#include "semcom/classical.hpp"
#include "semcom/codec.hpp"
#include "semcom/gai.hpp"
#include "semcom/metrics.hpp"
#include "semcom/scene.hpp"

namespace semcom {

enum class Stage { Preparation, Provisioning, SyncUpdate };

/// Engine knobs shared by every session; the experiment layer fills this
/// from its config file.
struct SessionParams {
    int keyword_budget = 3;
    int render_height = 64;
    int render_width = 64;
    double psnr_cap_db = 100.0;
    int sync_period = 10;
    std::size_t history_capacity = 16;
    ProtectionBands bands;
    double classical_repeat_below_db = 3.0;
    int classical_low_snr_repeat = 3;
    int embedding_dim = 16;
    std::uint64_t embedding_seed = 20240601;
};

struct FeedbackEntry {
    int user_id = 0;
    double score = 0.0;
    Scene received;  // attribute source for the preference update
};

/// Node model of the three-layer network: knowledge replicas for cloud,
/// edge and terminal, the per-user branch profiles, the shared channel
/// stacks and the lifecycle stage.
struct NetworkState {
    Stage stage = Stage::Preparation;
    std::vector<UserProfile> users;
    KnowledgeBase kb_cloud, kb_edge, kb_td;
    std::vector<FeedbackEntry> feedback_cache;
    int epoch = 0;
    SessionParams params;
    ClassicalStack text_stack;   // prompts and any serialized-scene payloads
    ClassicalStack pixel_stack;  // raw luminance payloads (scheme A downlink)
    EmbeddingTable embedding;

    /// Corpus statistics arrive after preparation; both stacks share the
    /// LDPC code already installed by prepare_network.
    void set_codebooks(HuffmanCodebook text, HuffmanCodebook pixel) {
        text_stack.codebook = std::move(text);
        pixel_stack.codebook = std::move(pixel);
    }
};

/// Builds aligned knowledge replicas, one seeded branch profile per user and
/// the channel machinery; exits in the Provisioning stage. Codebooks start
/// from uniform byte statistics until corpus tables are attached.
NetworkState prepare_network(int user_count, const Vocabulary& vocab, std::uint64_t seed,
                             const SessionParams& params, const LdpcCode& code);

struct HopRecord {
    std::string step;
    Direction direction = Direction::Downlink;
    std::string purpose;
    long long bits = 0;
    int bit_errors = 0;
};

struct SessionResult {
    SchemeTag scheme = SchemeTag::C;
    double snr_db = 0.0;
    int user_id = 0;

    long long uplink_bits = 0;
    long long downlink_bits = 0;
    long long control_bits = 0;

    Scene original_scene;           // what the service asked to deliver
    Scene sent_scene;               // reference on the downlink (AIGC for A/C)
    Scene received_scene;           // what the terminal ends up with
    Scene downlink_decoded_scene;   // before calibration
    Image sent_image, received_image;

    bool semantic_failure = false;
    bool object_metrics = true;  // false when the receiver has no scene view
    int downlink_bit_errors = 0;

    double feedback_score = 0.0;
    std::optional<Prompt> prompt;
    std::vector<HopRecord> hops;
};

/// Scheme C: keyword prompt uplink over the traditional stack, cloud-side
/// regeneration, SNR-banded semantic downlink, receiver calibration.
SessionResult run_session_c(const Scene& scene, NetworkState& net, const ChannelConfig& cfg);

/// Scheme A: same prompt/regeneration loop, then the rendered image is
/// delivered pixel-exact over Huffman+LDPC. Object metrics unavailable.
SessionResult run_session_a(const Scene& scene, NetworkState& net, const ChannelConfig& cfg);

/// Scheme B: the original scene takes two semantic hops (terminal->edge,
/// edge->terminal); no generation, no calibration.
SessionResult run_session_b(const Scene& scene, NetworkState& net, const ChannelConfig& cfg);

// Snapshot variant used by the parallel engine: no retry, no mutation.
SessionResult run_session_on(SchemeTag scheme, const Scene& scene, const NetworkState& net,
                             const ChannelConfig& cfg, int user_id = 0);

/// Aligns every replica to the maximum version (vocabulary, priors and
/// background travel with it). Returns control-plane bits spent, i.e. the
/// serialized vocabulary length.
long long share_knowledge(NetworkState& net);

/// Appends feedback to the edge cache; once the cache reaches sync_period
/// entries it flushes to the cloud: each user's preferences adopt the
/// attribute values of their highest-scoring cached session, and the epoch
/// advances.
void sync_update(NetworkState& net, std::span<const SessionResult> results);

/// Serialized vocabulary (the payload knowledge sharing pays for).
std::string serialize_vocabulary(const Vocabulary& vocab);

/// Metrics row for a finished session, scored against the original scene.
SessionRow make_session_row(const SessionResult& result, int session_index,
                            const NetworkState& net);

}  // namespace semcom
