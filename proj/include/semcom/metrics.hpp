#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "semcom/bits.hpp"
#include "semcom/scene.hpp"

namespace semcom {

/// Deterministic unit-vector table standing in for an external embedding
/// pipeline; one shared table per run keeps the score symmetric across
/// endpoints.
struct EmbeddingTable {
    int dim = 16;
    std::vector<std::vector<double>> vectors;  // one unit vector per token id

    static EmbeddingTable make(int token_count, int dim, std::uint64_t seed);
};

/// 10*log10(255^2 / MSE), capped at `cap_db` when the images are identical.
double psnr(const Image& a, const Image& b, double cap_db = 100.0);

/// Cosine between mean class-token vectors. Empty vs empty is 1, empty vs
/// non-empty is 0.
double semantic_similarity(const Scene& a, const Scene& b, const EmbeddingTable& table);

/// |multiset intersection of class multisets| / |original|; empty original
/// counts as fully recovered. Every object counts independently.
double recovery_ratio(const Scene& original, const Scene& recovered);

/// | |original.objects| - |recovered.objects| |
int quantity_discrepancy(const Scene& original, const Scene& recovered);

/// One aggregated line per session; the unit the report builder consumes.
struct SessionRow {
    SchemeTag scheme = SchemeTag::C;
    double snr_db = 0.0;
    int session_index = 0;
    int original_objects = 0;
    double psnr_db = 0.0;
    double similarity = 0.0;
    double recovery = 0.0;
    int discrepancy = 0;
    bool object_metrics = true;  // false for pixel-only schemes
    bool semantic_failure = false;
    long long uplink_bits = 0;
    long long downlink_bits = 0;
    long long control_bits = 0;
    double feedback = 0.0;
};

struct ObjectCountBin {
    int lo = 0;
    int hi = 0;  // inclusive; INT_MAX-like sentinel for the open top bin
};

std::vector<ObjectCountBin> default_bins();

struct Stat {
    int n = 0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct BinStat {
    ObjectCountBin bin;
    int n = 0;
    double mean_recovery = 0.0;
    double mean_discrepancy = 0.0;
    double mean_similarity = 0.0;
};

struct SchemeSummary {
    SchemeTag scheme = SchemeTag::C;
    double snr_db = 0.0;
    int sessions = 0;
    bool object_metrics = true;
    Stat psnr, similarity, recovery, discrepancy;
    Stat downlink_bits, uplink_bits;
    double semantic_failure_rate = 0.0;
    std::vector<BinStat> bins;
};

struct MetricsReport {
    std::vector<SchemeSummary> summaries;  // ordered by (snr, scheme)
};

/// Exact means over the rows, binned curves by original object count.
/// Throws ConfigError when rows are empty or a row falls outside the bins.
MetricsReport aggregate(std::span<const SessionRow> rows, const std::vector<ObjectCountBin>& bins);

/// Fixed-precision delimited table, one row per (scheme, snr).
std::string report_table(const MetricsReport& report);

/// Line-delimited records: one summary record per (scheme, snr) plus one
/// record per object-count bin.
std::string report_records(const MetricsReport& report);

}  // namespace semcom
