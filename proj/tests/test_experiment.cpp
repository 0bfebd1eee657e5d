#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "semcom/errors.hpp"
#include "semcom/experiment.hpp"

using namespace semcom;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.corpus_size = 12;
    cfg.output_dir = "";
    cfg.workers = 2;
    return cfg;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("noiseless single-scene run caps the PSNR") {
    ExperimentConfig cfg = tiny_config();
    cfg.corpus_size = 1;
    cfg.schemes = {SchemeTag::A};
    cfg.snr_db = {100.0};
    const auto res = run_experiment(cfg);
    REQUIRE(res.report.summaries.size() == 1);
    CHECK(res.report.summaries[0].psnr.mean == 100.0);
    CHECK(res.report.summaries[0].psnr.min == 100.0);
}

TEST_CASE("identical configs give byte-identical outputs") {
    const ExperimentConfig cfg = tiny_config();
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(cfg);
    CHECK(a.event_log == b.event_log);
    CHECK(a.table == b.table);
    CHECK(a.records == b.records);
}

TEST_CASE("worker count does not change the outputs") {
    ExperimentConfig one = tiny_config();
    one.workers = 1;
    ExperimentConfig many = tiny_config();
    many.workers = 4;
    const auto a = run_experiment(one);
    const auto b = run_experiment(many);
    CHECK(a.event_log == b.event_log);
    CHECK(a.table == b.table);
    CHECK(a.records == b.records);
}

TEST_CASE("downlink ordering C < B < A at 0 dB") {
    ExperimentConfig cfg = tiny_config();
    cfg.corpus_size = 40;
    const auto res = run_experiment(cfg);
    double a = 0, b = 0, c = 0;
    for (const auto& s : res.report.summaries) {
        if (s.scheme == SchemeTag::A) a = s.downlink_bits.mean;
        if (s.scheme == SchemeTag::B) b = s.downlink_bits.mean;
        if (s.scheme == SchemeTag::C) c = s.downlink_bits.mean;
    }
    CHECK(c < b);
    CHECK(b < a);
    CHECK(c < a / 2);
}

TEST_CASE("config: JSON round-trip is a fixpoint and unknown keys fail") {
    ExperimentConfig cfg;
    cfg.corpus_size = 77;
    cfg.snr_db = {-2.5, 4.0};
    cfg.schemes = {SchemeTag::C, SchemeTag::A};
    cfg.protection.low = {9, 7, 5};
    cfg.bins = {{1, 3}, {4, 2147483647}};
    const std::string text = cfg.to_json_text();
    const ExperimentConfig back = ExperimentConfig::from_json_text(text);
    CHECK(back.to_json_text() == text);

    CHECK_THROWS_AS(ExperimentConfig::from_json_text("{\"corpus_sise\": 3}"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text("{bad json"), ConfigError);
}

TEST_CASE("config coverage: every documented tunable is reachable") {
    // one value per tunable named in the design notes, all non-default
    const std::string text = R"({
        "corpus_size": 21,
        "object_count_min": 2,
        "object_count_max": 5,
        "canvas_height": 32,
        "canvas_width": 32,
        "render_height": 128,
        "render_width": 128,
        "snr_db": [3.5],
        "master_seed": 99,
        "keyword_budget": 4,
        "schemes": ["B"],
        "sync_period": 5,
        "user_count": 2,
        "workers": 3,
        "history_capacity": 8,
        "ldpc": {"n": 48, "k": 24, "max_iterations": 25, "seed": 3},
        "psnr_cap_db": 90.0,
        "embedding": {"dim": 8, "seed": 11},
        "protection": {
            "low_below_db": 2.0,
            "high_at_db": 9.0,
            "low": {"header": 9, "class": 7, "attribute": 5},
            "mid": {"header": 7, "class": 5, "attribute": 3},
            "high": {"header": 5, "class": 3, "attribute": 1}
        },
        "classical": {"repeat_below_db": 2.0, "low_snr_repeat": 5},
        "bins": [[2, 3], [4, -1]],
        "output_dir": "elsewhere"
    })";
    const ExperimentConfig cfg = ExperimentConfig::from_json_text(text);
    CHECK(cfg.corpus_size == 21);
    CHECK(cfg.canvas_height == 32);
    CHECK(cfg.render_height == 128);
    CHECK(cfg.keyword_budget == 4);
    CHECK(cfg.ldpc_n == 48);
    CHECK(cfg.ldpc_max_iterations == 25);
    CHECK(cfg.psnr_cap_db == 90.0);
    CHECK(cfg.embedding_dim == 8);
    CHECK(cfg.protection.low.header_rep == 9);
    CHECK(cfg.protection.low_below_db == 2.0);
    CHECK(cfg.classical_low_snr_repeat == 5);
    CHECK(cfg.history_capacity == 8);
    CHECK(cfg.sync_period == 5);
    CHECK(cfg.bins.size() == 2);
    CHECK(cfg.bins[1].hi == 2147483647);
    CHECK(cfg.output_dir == "elsewhere");

    const SessionParams p = cfg.session_params();
    CHECK(p.keyword_budget == 4);
    CHECK(p.render_height == 128);
    CHECK(p.psnr_cap_db == 90.0);
    CHECK(p.sync_period == 5);
    CHECK(p.history_capacity == 8);
    CHECK(p.bands.low.header_rep == 9);
    CHECK(p.classical_low_snr_repeat == 5);
    CHECK(p.embedding_dim == 8);
    CHECK(p.embedding_seed == 11);
}

TEST_CASE("event log re-aggregation reproduces the report byte-for-byte") {
    const auto res = run_experiment(tiny_config());
    const auto rows = rows_from_event_log(res.event_log);
    REQUIRE(rows.size() == res.rows.size());
    const auto report = aggregate(rows, default_bins());
    CHECK(report_table(report) == res.table);
    CHECK(report_records(report) == res.records);
}

TEST_CASE("outputs land on disk and re-emission is idempotent") {
    const std::string dir = "/tmp/semcom_test_out";
    std::filesystem::remove_all(dir);
    ExperimentConfig cfg = tiny_config();
    cfg.output_dir = dir;
    const auto res = run_experiment(cfg);

    const auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        REQUIRE(in.good());
        return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    };
    CHECK(slurp(dir + "/events.jsonl") == res.event_log);
    CHECK(slurp(dir + "/report_table.txt") == res.table);
    CHECK(slurp(dir + "/report_records.jsonl") == res.records);
    CHECK(!slurp(dir + "/corpus.txt").empty());

    emit_report(res.report, dir);
    CHECK(slurp(dir + "/report_table.txt") == res.table);
    std::filesystem::remove_all(dir);
}

TEST_CASE("unwritable output path fails before simulation") {
    ExperimentConfig cfg = tiny_config();
    cfg.corpus_size = 100000;  // would take a long time if simulation started
    cfg.output_dir = "/proc/definitely/not/writable";
    CHECK_THROWS_AS(run_experiment(cfg), IoError);
}

TEST_CASE("validation rejects broken configs") {
    ExperimentConfig bad = tiny_config();
    bad.snr_db = {};
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = tiny_config();
    bad.schemes = {};
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = tiny_config();
    bad.classical_low_snr_repeat = 2;  // even repetition cannot vote
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = tiny_config();
    bad.corpus_size = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("corpus builder spreads object counts over the configured range") {
    ExperimentConfig cfg = tiny_config();
    cfg.corpus_size = 16;
    cfg.object_count_min = 1;
    cfg.object_count_max = 8;
    const auto corpus = build_corpus(cfg, default_vocabulary());
    REQUIRE(corpus.size() == 16);
    for (std::size_t i = 0; i < corpus.size(); ++i)
        CHECK(corpus[i].objects.size() == 1 + i % 8);
}

}  // TEST_SUITE
