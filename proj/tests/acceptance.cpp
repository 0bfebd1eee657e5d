// Acceptance suite: runs every benchmark-level criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "semcom/experiment.hpp"
#include "semcom/rng.hpp"

using namespace semcom;

namespace {

int failures = 0;

struct Criterion {
    int id;
    std::string name;
    std::function<bool(std::string&)> body;
};

void run(const Criterion& c) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
        ok = c.body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d %s: %s (%.1fs)\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
                detail.c_str(), secs);
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

double elapsed_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

NetworkState corpus_network(const ExperimentConfig& cfg, const Vocabulary& vocab,
                            const std::vector<Scene>& corpus) {
    const auto code = LdpcCode::make(cfg.ldpc_n, cfg.ldpc_k, cfg.ldpc_max_iterations, cfg.ldpc_seed);
    auto net = prepare_network(cfg.user_count, vocab, cfg.master_seed, cfg.session_params(), code);
    std::map<std::uint8_t, std::uint64_t> tf, pf;
    for (int s = 0; s < 256; ++s) tf[static_cast<std::uint8_t>(s)] = pf[static_cast<std::uint8_t>(s)] = 1;
    for (unsigned char c : serialize_corpus(corpus, vocab)) ++tf[c];
    for (const auto& s : corpus)
        for (auto p : render(s, cfg.render_height, cfg.render_width).pixels) ++pf[p];
    net.set_codebooks(huffman_build(tf), huffman_build(pf));
    return net;
}

char format_buffer[256];

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    std::snprintf(format_buffer, sizeof(format_buffer), f, args...);
    return format_buffer;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria;

    criteria.push_back({1, "channel physics oracle", [](std::string& d) {
        const auto t0 = std::chrono::steady_clock::now();
        auto eng = make_engine(20260810);
        BitFrame frame;
        frame.bits.resize(1000000);
        for (auto& b : frame.bits) b = static_cast<std::uint8_t>(eng() & 1u);
        const auto res = transmit(frame, {0.0, 424242});
        const double ber = static_cast<double>(res.bit_errors) / 1e6;
        const double target = 0.5 * std::erfc(1.0);  // Q(sqrt(2))
        const double secs = elapsed_since(t0);
        d = fmt("BER=%.4f target=%.4f+/-0.003", ber, target);
        return std::abs(ber - target) <= 0.003 && secs < 10.0;
    }});

    criteria.push_back({2, "coding correctness", [](std::string& d) {
        const Vocabulary vocab = default_vocabulary();
        ExperimentConfig cfg;
        cfg.output_dir = "";
        const auto corpus = build_corpus(cfg, vocab);

        // Huffman round-trip identity over the full corpus
        std::map<std::uint8_t, std::uint64_t> freq;
        for (int s = 0; s < 256; ++s) freq[static_cast<std::uint8_t>(s)] = 1;
        const std::string text = serialize_corpus(corpus, vocab);
        for (unsigned char c : text) ++freq[c];
        const auto book = huffman_build(freq);
        for (const auto& scene : corpus) {
            const std::string line = serialize_scene(scene, vocab);
            const std::vector<std::uint8_t> payload(line.begin(), line.end());
            if (huffman_decode(huffman_encode(payload, book), book) != payload) {
                d = "huffman round-trip mismatch";
                return false;
            }
        }

        // exhaustive single-error sweep on the (96,48) code
        const auto code = LdpcCode::make(96, 48, 50, 7);
        auto eng = make_engine(2);
        Bits msg(48);
        for (auto& b : msg) b = static_cast<std::uint8_t>(eng() & 1u);
        const Bits cw = ldpc_encode(msg, code);
        int corrected = 0;
        for (int flip = 0; flip < 96; ++flip) {
            Bits noisy = cw;
            noisy[static_cast<std::size_t>(flip)] ^= 1u;
            const auto dec = ldpc_decode(noisy, code);
            corrected += dec.converged && dec.message == msg ? 1 : 0;
        }

        // coding gain at 4 dB over 1e5 message bits
        Bits stream(100000);
        for (auto& b : stream) b = static_cast<std::uint8_t>(eng() & 1u);
        BitFrame coded;
        coded.bits = ldpc_encode_stream(stream, code);
        const auto tx = transmit(coded, {4.0, 1717});
        const double pre =
            static_cast<double>(tx.bit_errors) / static_cast<double>(coded.bits.size());
        const auto dec = ldpc_decode_stream(tx.received.bits, code);
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < stream.size(); ++i) wrong += dec.message[i] != stream[i];
        const double post = static_cast<double>(wrong) / static_cast<double>(stream.size());

        d = fmt("roundtrip=300/300 single-error=%d/96 BER pre=%.4f post=%.4f", corrected, pre, post);
        return corrected == 96 && post < pre;
    }});

    criteria.push_back({3, "downlink bit ordering C < B < A", [](std::string& d) {
        const auto t0 = std::chrono::steady_clock::now();
        ExperimentConfig cfg;  // 300 scenes, 0 dB, all schemes
        cfg.output_dir = "";
        const auto res = run_experiment(cfg);
        double a = 0, b = 0, c = 0;
        for (const auto& s : res.report.summaries) {
            if (s.scheme == SchemeTag::A) a = s.downlink_bits.mean;
            if (s.scheme == SchemeTag::B) b = s.downlink_bits.mean;
            if (s.scheme == SchemeTag::C) c = s.downlink_bits.mean;
        }
        const double secs = elapsed_since(t0);
        d = fmt("mean downlink bits C=%.0f B=%.0f A=%.0f", c, b, a);
        return c < b && b < a && c < a / 2 && secs < 120.0;
    }});

    criteria.push_back({4, "recovery/discrepancy trend across object-count bins", [](std::string& d) {
        const auto t0 = std::chrono::steady_clock::now();
        ExperimentConfig cfg;
        cfg.corpus_size = 327;
        cfg.schemes = {SchemeTag::C};
        cfg.output_dir = "";
        const auto res = run_experiment(cfg);
        if (res.report.summaries.size() != 1) {
            d = "unexpected summary count";
            return false;
        }
        const auto& bins = res.report.summaries[0].bins;
        if (bins.size() < 4) {
            d = "need at least 4 bins";
            return false;
        }
        bool decreasing = true, non_decreasing = true;
        std::string curve;
        for (std::size_t i = 0; i < bins.size(); ++i) {
            if (i > 0) {
                decreasing = decreasing && bins[i].mean_recovery < bins[i - 1].mean_recovery;
                non_decreasing =
                    non_decreasing && bins[i].mean_discrepancy >= bins[i - 1].mean_discrepancy;
            }
            curve += fmt("%s%.3f/%.2f", i ? " " : "", bins[i].mean_recovery,
                         bins[i].mean_discrepancy);
        }
        const double secs = elapsed_since(t0);
        d = "recovery/discrepancy by bin: " + curve;
        return decreasing && non_decreasing && secs < 120.0;
    }});

    criteria.push_back({5, "bit-error / semantic-error decoupling", [](std::string& d) {
        const Vocabulary vocab = default_vocabulary();
        ExperimentConfig cfg;
        cfg.corpus_size = 1000;
        cfg.output_dir = "";
        const auto corpus = build_corpus(cfg, vocab);
        const auto net = corpus_network(cfg, vocab, corpus);

        int decoupled = 0;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            ChannelConfig ch{0.0, derive_seed(cfg.master_seed, 0x5E55u, i, 0)};
            const auto r = run_session_on(SchemeTag::C, corpus[i], net, ch,
                                          static_cast<int>(i) % cfg.user_count);
            if (r.downlink_bit_errors > 0 && r.downlink_decoded_scene == r.sent_scene)
                ++decoupled;
        }
        d = fmt("%d/1000 sessions with bit errors yet exact semantic recovery", decoupled);
        return decoupled >= 100;
    }});

    criteria.push_back({6, "noiseless closed loop", [](std::string& d) {
        const Vocabulary vocab = default_vocabulary();
        ExperimentConfig cfg;
        cfg.corpus_size = 40;
        cfg.output_dir = "";
        const auto corpus = build_corpus(cfg, vocab);
        const auto net = corpus_network(cfg, vocab, corpus);

        for (std::size_t i = 0; i < corpus.size(); ++i) {
            ChannelConfig ch{100.0, derive_seed(cfg.master_seed, 0x5E55u, i, 1)};
            const int user = static_cast<int>(i) % cfg.user_count;

            const auto a = run_session_on(SchemeTag::A, corpus[i], net, ch, user);
            if (psnr(a.sent_image, a.received_image, cfg.psnr_cap_db) != cfg.psnr_cap_db) {
                d = fmt("scheme A psnr below cap on scene %zu", i);
                return false;
            }
            const auto b = run_session_on(SchemeTag::B, corpus[i], net, ch, user);
            if (recovery_ratio(b.sent_scene, b.received_scene) != 1.0 ||
                semantic_similarity(b.sent_scene, b.received_scene, net.embedding) != 1.0 ||
                quantity_discrepancy(b.sent_scene, b.received_scene) != 0) {
                d = fmt("scheme B imperfect on scene %zu", i);
                return false;
            }
            const auto c = run_session_on(SchemeTag::C, corpus[i], net, ch, user);
            if (recovery_ratio(c.sent_scene, c.received_scene) != 1.0 ||
                semantic_similarity(c.sent_scene, c.received_scene, net.embedding) != 1.0) {
                d = fmt("scheme C imperfect on scene %zu", i);
                return false;
            }
        }
        d = "A at PSNR cap, B and C exact against their references on 40 scenes";
        return true;
    }});

    criteria.push_back({7, "determinism across runs and worker counts", [](std::string& d) {
        ExperimentConfig one;  // full default configuration
        one.output_dir = "";
        one.workers = 1;
        ExperimentConfig four = one;
        four.workers = 4;
        const auto r1 = run_experiment(one);
        const auto r2 = run_experiment(one);
        const auto r4 = run_experiment(four);
        const bool same_run = r1.event_log == r2.event_log && r1.table == r2.table &&
                              r1.records == r2.records;
        const bool same_workers = r1.event_log == r4.event_log && r1.table == r4.table &&
                                  r1.records == r4.records;
        d = fmt("repeat-run identical=%s worker-count identical=%s", same_run ? "yes" : "no",
                same_workers ? "yes" : "no");
        return same_run && same_workers;
    }});

    criteria.push_back({8, "metric identities across the corpus", [](std::string& d) {
        const Vocabulary vocab = default_vocabulary();
        ExperimentConfig cfg;
        cfg.corpus_size = 327;
        cfg.output_dir = "";
        const auto corpus = build_corpus(cfg, vocab);
        const auto table = EmbeddingTable::make(vocab.class_count(), cfg.embedding_dim,
                                                cfg.embedding_seed);
        for (const auto& s : corpus) {
            const Image img = render(s, 64, 64);
            if (psnr(img, img, cfg.psnr_cap_db) != cfg.psnr_cap_db) { d = "psnr(x,x) != cap"; return false; }
            if (std::abs(semantic_similarity(s, s, table) - 1.0) > 1e-12) { d = "sim(s,s) != 1"; return false; }
            if (recovery_ratio(s, s) != 1.0) { d = "recovery(s,s) != 1"; return false; }
            if (quantity_discrepancy(s, s) != 0) { d = "discrepancy(s,s) != 0"; return false; }
        }
        d = "psnr cap, similarity 1, recovery 1, discrepancy 0 on all 327 scenes";
        return true;
    }});

    for (const auto& c : criteria) run(c);
    std::printf("ACCEPTANCE: %zu/%zu criteria passed\n", criteria.size() - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
