#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semcom/metrics.hpp"
#include "semcom/scene.hpp"
#include "semcom/workflow.hpp"

namespace semcom {

/// Declarative experiment description; parsed from a JSON file, every field
/// overridable. Defaults give the desk-scale benchmark corpus.
struct ExperimentConfig {
    int corpus_size = 300;
    int object_count_min = 1;
    int object_count_max = 8;
    int canvas_height = 16;
    int canvas_width = 16;
    int render_height = 64;
    int render_width = 64;
    std::vector<double> snr_db = {0.0};
    std::uint64_t master_seed = 1;
    int keyword_budget = 3;
    std::vector<SchemeTag> schemes = {SchemeTag::A, SchemeTag::B, SchemeTag::C};
    int sync_period = 10;
    int user_count = 3;
    int workers = 4;
    std::size_t history_capacity = 16;

    int ldpc_n = 96;
    int ldpc_k = 48;
    int ldpc_max_iterations = 50;
    std::uint64_t ldpc_seed = 7;

    double psnr_cap_db = 100.0;
    int embedding_dim = 16;
    std::uint64_t embedding_seed = 20240601;

    ProtectionBands protection;
    double classical_repeat_below_db = 3.0;
    int classical_low_snr_repeat = 3;

    std::vector<ObjectCountBin> bins = default_bins();
    std::string output_dir = "out";

    void validate() const;  // throws ConfigError

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    std::string to_json_text() const;

    SessionParams session_params() const;
};

struct ExperimentResult {
    MetricsReport report;
    std::vector<SessionRow> rows;
    std::string event_log;  // line-delimited records
    std::string table;
    std::string records;
};

/// Generates the corpus, prepares the network, runs every configured scheme
/// on every (scene, snr) with paired per-session seeds, aggregates and (when
/// output_dir is set) writes events.jsonl, report_table.txt,
/// report_records.jsonl and corpus.txt. Deterministic for a fixed config,
/// regardless of worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes the two report shapes into `dir`; idempotent.
void emit_report(const MetricsReport& report, const std::string& dir);

/// Rebuilds session rows from a saved event log (the `report` CLI path).
std::vector<SessionRow> rows_from_event_log(const std::string& event_log);

/// The deterministic corpus the experiment runs on.
std::vector<Scene> build_corpus(const ExperimentConfig& config, const Vocabulary& vocab);

}  // namespace semcom
