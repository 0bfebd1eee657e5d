#include "semcom/experiment.hpp"

#include <atomic>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "semcom/errors.hpp"
#include "semcom/rng.hpp"

#include <nlohmann/json.hpp>

namespace semcom {

namespace {

using nlohmann::json;

SchemeTag scheme_from_string(const std::string& s) {
    if (s == "A") return SchemeTag::A;
    if (s == "B") return SchemeTag::B;
    if (s == "C") return SchemeTag::C;
    throw ConfigError("config: unknown scheme '" + s + "'");
}

std::uint64_t snr_bits(double snr_db) {
    std::uint64_t u = 0;
    static_assert(sizeof(u) == sizeof(snr_db));
    std::memcpy(&u, &snr_db, sizeof(u));
    return u;
}

void parse_profile(const json& j, ProtectionProfile& p) {
    for (const auto& [key, value] : j.items()) {
        if (key == "header") p.header_rep = value.get<int>();
        else if (key == "class") p.class_rep = value.get<int>();
        else if (key == "attribute") p.attribute_rep = value.get<int>();
        else throw ConfigError("config: unknown protection key '" + key + "'");
    }
}

json profile_json(const ProtectionProfile& p) {
    return json{{"header", p.header_rep}, {"class", p.class_rep}, {"attribute", p.attribute_rep}};
}

}  // namespace

void ExperimentConfig::validate() const {
    if (corpus_size < 1) throw ConfigError("config: corpus_size must be >= 1");
    if (object_count_min < 0 || object_count_max < object_count_min)
        throw ConfigError("config: bad object count range");
    if (snr_db.empty()) throw ConfigError("config: snr_db list must be non-empty");
    if (schemes.empty()) throw ConfigError("config: schemes must be non-empty");
    if (keyword_budget < 1) throw ConfigError("config: keyword_budget must be >= 1");
    if (sync_period < 1) throw ConfigError("config: sync_period must be >= 1");
    if (user_count < 1) throw ConfigError("config: user_count must be >= 1");
    if (workers < 1) throw ConfigError("config: workers must be >= 1");
    if (render_height < 1 || render_width < 1) throw ConfigError("config: bad resolution");
    if (bins.empty()) throw ConfigError("config: bins must be non-empty");
    const auto odd = [](int r) { return r >= 1 && r % 2 == 1; };
    for (const auto* p : {&protection.low, &protection.mid, &protection.high})
        if (!odd(p->header_rep) || !odd(p->class_rep) || !odd(p->attribute_rep))
            throw ConfigError("config: protection repetition factors must be odd");
    if (!odd(classical_low_snr_repeat))
        throw ConfigError("config: classical repeat factor must be odd");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    ExperimentConfig c;
    for (const auto& [key, value] : j.items()) {
        if (key == "corpus_size") c.corpus_size = value.get<int>();
        else if (key == "object_count_min") c.object_count_min = value.get<int>();
        else if (key == "object_count_max") c.object_count_max = value.get<int>();
        else if (key == "canvas_height") c.canvas_height = value.get<int>();
        else if (key == "canvas_width") c.canvas_width = value.get<int>();
        else if (key == "render_height") c.render_height = value.get<int>();
        else if (key == "render_width") c.render_width = value.get<int>();
        else if (key == "snr_db") c.snr_db = value.get<std::vector<double>>();
        else if (key == "master_seed") c.master_seed = value.get<std::uint64_t>();
        else if (key == "keyword_budget") c.keyword_budget = value.get<int>();
        else if (key == "schemes") {
            c.schemes.clear();
            for (const auto& s : value) c.schemes.push_back(scheme_from_string(s.get<std::string>()));
        } else if (key == "sync_period") c.sync_period = value.get<int>();
        else if (key == "user_count") c.user_count = value.get<int>();
        else if (key == "workers") c.workers = value.get<int>();
        else if (key == "history_capacity") c.history_capacity = value.get<std::size_t>();
        else if (key == "ldpc") {
            for (const auto& [lk, lv] : value.items()) {
                if (lk == "n") c.ldpc_n = lv.get<int>();
                else if (lk == "k") c.ldpc_k = lv.get<int>();
                else if (lk == "max_iterations") c.ldpc_max_iterations = lv.get<int>();
                else if (lk == "seed") c.ldpc_seed = lv.get<std::uint64_t>();
                else throw ConfigError("config: unknown ldpc key '" + lk + "'");
            }
        } else if (key == "psnr_cap_db") c.psnr_cap_db = value.get<double>();
        else if (key == "embedding") {
            for (const auto& [ek, ev] : value.items()) {
                if (ek == "dim") c.embedding_dim = ev.get<int>();
                else if (ek == "seed") c.embedding_seed = ev.get<std::uint64_t>();
                else throw ConfigError("config: unknown embedding key '" + ek + "'");
            }
        } else if (key == "protection") {
            for (const auto& [pk, pv] : value.items()) {
                if (pk == "low_below_db") c.protection.low_below_db = pv.get<double>();
                else if (pk == "high_at_db") c.protection.high_at_db = pv.get<double>();
                else if (pk == "low") parse_profile(pv, c.protection.low);
                else if (pk == "mid") parse_profile(pv, c.protection.mid);
                else if (pk == "high") parse_profile(pv, c.protection.high);
                else throw ConfigError("config: unknown protection key '" + pk + "'");
            }
        } else if (key == "classical") {
            for (const auto& [ck, cv] : value.items()) {
                if (ck == "repeat_below_db") c.classical_repeat_below_db = cv.get<double>();
                else if (ck == "low_snr_repeat") c.classical_low_snr_repeat = cv.get<int>();
                else throw ConfigError("config: unknown classical key '" + ck + "'");
            }
        } else if (key == "bins") {
            c.bins.clear();
            for (const auto& b : value) {
                if (!b.is_array() || b.size() != 2) throw ConfigError("config: bin must be [lo, hi]");
                ObjectCountBin bin{b[0].get<int>(), b[1].get<int>()};
                if (bin.hi < 0) bin.hi = std::numeric_limits<int>::max();
                c.bins.push_back(bin);
            }
        } else if (key == "output_dir") c.output_dir = value.get<std::string>();
        else throw ConfigError("config: unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

std::string ExperimentConfig::to_json_text() const {
    json schemes_j = json::array();
    for (auto s : schemes) schemes_j.push_back(to_string(s));
    json bins_j = json::array();
    for (const auto& b : bins)
        bins_j.push_back({b.lo, b.hi == std::numeric_limits<int>::max() ? -1 : b.hi});

    json j{
        {"corpus_size", corpus_size},
        {"object_count_min", object_count_min},
        {"object_count_max", object_count_max},
        {"canvas_height", canvas_height},
        {"canvas_width", canvas_width},
        {"render_height", render_height},
        {"render_width", render_width},
        {"snr_db", snr_db},
        {"master_seed", master_seed},
        {"keyword_budget", keyword_budget},
        {"schemes", schemes_j},
        {"sync_period", sync_period},
        {"user_count", user_count},
        {"workers", workers},
        {"history_capacity", history_capacity},
        {"ldpc", {{"n", ldpc_n}, {"k", ldpc_k}, {"max_iterations", ldpc_max_iterations}, {"seed", ldpc_seed}}},
        {"psnr_cap_db", psnr_cap_db},
        {"embedding", {{"dim", embedding_dim}, {"seed", embedding_seed}}},
        {"protection",
         {{"low_below_db", protection.low_below_db},
          {"high_at_db", protection.high_at_db},
          {"low", profile_json(protection.low)},
          {"mid", profile_json(protection.mid)},
          {"high", profile_json(protection.high)}}},
        {"classical",
         {{"repeat_below_db", classical_repeat_below_db},
          {"low_snr_repeat", classical_low_snr_repeat}}},
        {"bins", bins_j},
        {"output_dir", output_dir},
    };
    return j.dump(2) + "\n";
}

SessionParams ExperimentConfig::session_params() const {
    SessionParams p;
    p.keyword_budget = keyword_budget;
    p.render_height = render_height;
    p.render_width = render_width;
    p.psnr_cap_db = psnr_cap_db;
    p.sync_period = sync_period;
    p.history_capacity = history_capacity;
    p.bands = protection;
    p.classical_repeat_below_db = classical_repeat_below_db;
    p.classical_low_snr_repeat = classical_low_snr_repeat;
    p.embedding_dim = embedding_dim;
    p.embedding_seed = embedding_seed;
    return p;
}

std::vector<Scene> build_corpus(const ExperimentConfig& config, const Vocabulary& vocab) {
    std::vector<Scene> corpus;
    corpus.reserve(static_cast<std::size_t>(config.corpus_size));
    const int span = config.object_count_max - config.object_count_min + 1;
    for (int i = 0; i < config.corpus_size; ++i) {
        const int count = config.object_count_min + (i % span);
        corpus.push_back(generate_scene(derive_seed(config.master_seed, 0xC0A7u,
                                                    static_cast<std::uint64_t>(i)),
                                        count, vocab));
    }
    return corpus;
}

namespace {

std::map<std::uint8_t, std::uint64_t> byte_frequencies(const std::string& text) {
    std::map<std::uint8_t, std::uint64_t> freq;
    for (int s = 0; s < 256; ++s) freq[static_cast<std::uint8_t>(s)] = 1;  // full coverage
    for (unsigned char c : text) ++freq[c];
    return freq;
}

std::map<std::uint8_t, std::uint64_t> pixel_frequencies(const std::vector<Scene>& corpus,
                                                        int height, int width) {
    std::map<std::uint8_t, std::uint64_t> freq;
    for (int s = 0; s < 256; ++s) freq[static_cast<std::uint8_t>(s)] = 1;
    for (const auto& scene : corpus)
        for (std::uint8_t p : render(scene, height, width).pixels) ++freq[p];
    return freq;
}

json session_event(int session_index, int scene_index, const SessionResult& r,
                   const SessionRow& row) {
    return json{
        {"event", "session"},
        {"session", session_index},
        {"scheme", to_string(r.scheme)},
        {"snr_db", r.snr_db},
        {"user", r.user_id},
        {"scene", scene_index},
        {"original_objects", row.original_objects},
        {"uplink_bits", r.uplink_bits},
        {"downlink_bits", r.downlink_bits},
        {"control_bits", r.control_bits},
        {"semantic_failure", r.semantic_failure},
        {"object_metrics", r.object_metrics},
        {"downlink_bit_errors", r.downlink_bit_errors},
        {"psnr_db", row.psnr_db},
        {"similarity", row.similarity},
        {"recovery", row.recovery},
        {"quantity_discrepancy", row.discrepancy},
        {"feedback", r.feedback_score},
    };
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();

    // Fail on an unusable output location before any simulation work.
    const bool writing = !config.output_dir.empty();
    if (writing) {
        std::error_code ec;
        std::filesystem::create_directories(config.output_dir, ec);
        if (ec) throw IoError("cannot create output directory '" + config.output_dir + "'");
        write_file(config.output_dir + "/config.json", config.to_json_text());
    }

    const Vocabulary vocab = default_vocabulary(config.canvas_height, config.canvas_width);
    const std::vector<Scene> corpus = build_corpus(config, vocab);
    const std::string corpus_text = serialize_corpus(corpus, vocab);

    const LdpcCode code =
        LdpcCode::make(config.ldpc_n, config.ldpc_k, config.ldpc_max_iterations, config.ldpc_seed);
    NetworkState base_net =
        prepare_network(config.user_count, vocab, config.master_seed, config.session_params(), code);
    base_net.set_codebooks(huffman_build(byte_frequencies(corpus_text)),
                           huffman_build(pixel_frequencies(corpus, config.render_height,
                                                           config.render_width)));

    ExperimentResult result;
    std::string& events = result.event_log;
    events += json{{"event", "prepare"},
                   {"users", config.user_count},
                   {"vocab_version", vocab.version},
                   {"corpus_size", config.corpus_size}}
                  .dump();
    events += '\n';

    int session_index = 0;
    for (double snr : config.snr_db) {
        for (SchemeTag scheme : config.schemes) {
            NetworkState net = base_net;
            events += json{{"event", "lane"}, {"scheme", to_string(scheme)}, {"snr_db", snr}}.dump();
            events += '\n';

            for (std::size_t base = 0; base < corpus.size();
                 base += static_cast<std::size_t>(config.sync_period)) {
                const std::size_t batch =
                    std::min(static_cast<std::size_t>(config.sync_period), corpus.size() - base);
                std::vector<SessionResult> batch_results(batch);

                // sessions in a batch run against the frozen network state;
                // per-session seeds are derived by counter, so any worker
                // count yields the same results
                std::atomic<std::size_t> cursor{0};
                std::exception_ptr failure;
                std::mutex failure_mutex;
                auto worker = [&]() {
                    while (true) {
                        const std::size_t i = cursor.fetch_add(1);
                        if (i >= batch) break;
                        const std::size_t scene_index = base + i;
                        try {
                            ChannelConfig cfg{snr, derive_seed(config.master_seed, 0x5E55u,
                                                               static_cast<std::uint64_t>(scene_index),
                                                               snr_bits(snr))};
                            batch_results[i] =
                                run_session_on(scheme, corpus[scene_index], net, cfg,
                                               static_cast<int>(scene_index) % config.user_count);
                        } catch (...) {
                            std::lock_guard<std::mutex> lock(failure_mutex);
                            if (!failure) failure = std::current_exception();
                            break;
                        }
                    }
                };
                const int nthreads = std::min<int>(config.workers, static_cast<int>(batch));
                if (nthreads <= 1) {
                    worker();
                } else {
                    std::vector<std::thread> pool;
                    pool.reserve(static_cast<std::size_t>(nthreads));
                    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
                    for (auto& t : pool) t.join();
                }
                if (failure) std::rethrow_exception(failure);

                // serial merge in session-index order
                for (std::size_t i = 0; i < batch; ++i) {
                    const SessionResult& r = batch_results[i];
                    if (r.prompt)
                        net.users.at(static_cast<std::size_t>(r.user_id)).remember(*r.prompt);
                    for (const auto& hop : r.hops) {
                        events += json{{"event", "hop"},
                                       {"session", session_index},
                                       {"scheme", to_string(r.scheme)},
                                       {"snr_db", snr},
                                       {"step", hop.step},
                                       {"direction", to_string(hop.direction)},
                                       {"purpose", hop.purpose},
                                       {"bits", hop.bits},
                                       {"bit_errors", hop.bit_errors}}
                                      .dump();
                        events += '\n';
                    }
                    SessionRow row = make_session_row(r, session_index, net);
                    events += session_event(session_index, static_cast<int>(base + i), r, row).dump();
                    events += '\n';
                    result.rows.push_back(row);
                    ++session_index;
                }

                const int epoch_before = net.epoch;
                sync_update(net, batch_results);
                if (net.epoch != epoch_before) {
                    events += json{{"event", "sync"}, {"scheme", to_string(scheme)},
                                   {"snr_db", snr}, {"epoch", net.epoch}}
                                  .dump();
                    events += '\n';
                }
            }
        }
    }

    result.report = aggregate(result.rows, config.bins);
    result.table = report_table(result.report);
    result.records = report_records(result.report);

    if (writing) {
        write_file(config.output_dir + "/events.jsonl", result.event_log);
        write_file(config.output_dir + "/report_table.txt", result.table);
        write_file(config.output_dir + "/report_records.jsonl", result.records);
        write_file(config.output_dir + "/corpus.txt", corpus_text);
    }
    return result;
}

void emit_report(const MetricsReport& report, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "'");
    write_file(dir + "/report_table.txt", report_table(report));
    write_file(dir + "/report_records.jsonl", report_records(report));
}

std::vector<SessionRow> rows_from_event_log(const std::string& event_log) {
    std::vector<SessionRow> rows;
    std::size_t start = 0;
    while (start < event_log.size()) {
        std::size_t end = event_log.find('\n', start);
        if (end == std::string::npos) end = event_log.size();
        const std::string line = event_log.substr(start, end - start);
        start = end + 1;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw IoError(std::string("event log: bad record: ") + e.what());
        }
        if (j.value("event", "") != "session") continue;
        SessionRow row;
        row.scheme = scheme_from_string(j.at("scheme").get<std::string>());
        row.snr_db = j.at("snr_db").get<double>();
        row.session_index = j.at("session").get<int>();
        row.original_objects = j.at("original_objects").get<int>();
        row.psnr_db = j.at("psnr_db").get<double>();
        row.similarity = j.at("similarity").get<double>();
        row.recovery = j.at("recovery").get<double>();
        row.discrepancy = j.at("quantity_discrepancy").get<int>();
        row.object_metrics = j.at("object_metrics").get<bool>();
        row.semantic_failure = j.at("semantic_failure").get<bool>();
        row.uplink_bits = j.at("uplink_bits").get<long long>();
        row.downlink_bits = j.at("downlink_bits").get<long long>();
        row.control_bits = j.at("control_bits").get<long long>();
        row.feedback = j.at("feedback").get<double>();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace semcom
