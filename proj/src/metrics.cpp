#include "semcom/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "semcom/errors.hpp"
#include "semcom/rng.hpp"

#include <nlohmann/json.hpp>

namespace semcom {

EmbeddingTable EmbeddingTable::make(int token_count, int dim, std::uint64_t seed) {
    if (token_count < 1 || dim < 1) throw ConfigError("embedding: need tokens and dim >= 1");
    EmbeddingTable table;
    table.dim = dim;
    table.vectors.reserve(static_cast<std::size_t>(token_count));
    for (int t = 0; t < token_count; ++t) {
        GaussianSource g(derive_seed(seed, 0xE3B0u, static_cast<std::uint64_t>(t)));
        std::vector<double> v(static_cast<std::size_t>(dim));
        double norm2 = 0.0;
        for (auto& x : v) {
            x = g.next();
            norm2 += x * x;
        }
        const double norm = std::sqrt(norm2);
        for (auto& x : v) x = norm > 0 ? x / norm : 0.0;
        table.vectors.push_back(std::move(v));
    }
    return table;
}

double psnr(const Image& a, const Image& b, double cap_db) {
    if (a.height != b.height || a.width != b.width)
        throw ConfigError("psnr: resolution mismatch");
    long double se = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]);
        se += d * d;
    }
    if (se == 0.0) return cap_db;
    const double mse = static_cast<double>(se / static_cast<long double>(a.pixels.size()));
    return std::min(cap_db, 10.0 * std::log10(255.0 * 255.0 / mse));
}

namespace {

std::vector<double> mean_vector(const Scene& s, const EmbeddingTable& table) {
    std::vector<double> m(static_cast<std::size_t>(table.dim), 0.0);
    if (s.objects.empty()) return m;
    for (const auto& o : s.objects) {
        const auto& v = table.vectors.at(static_cast<std::size_t>(o.class_id));
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += v[i];
    }
    for (auto& x : m) x /= static_cast<double>(s.objects.size());
    return m;
}

}  // namespace

double semantic_similarity(const Scene& a, const Scene& b, const EmbeddingTable& table) {
    if (a.objects.empty() && b.objects.empty()) return 1.0;
    if (a.objects.empty() || b.objects.empty()) return 0.0;
    const auto va = mean_vector(a, table);
    const auto vb = mean_vector(b, table);
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        dot += va[i] * vb[i];
        na += va[i] * va[i];
        nb += vb[i] * vb[i];
    }
    if (na == 0 || nb == 0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double recovery_ratio(const Scene& original, const Scene& recovered) {
    if (original.objects.empty()) return 1.0;
    const auto orig = scene_object_multiset(original);
    const auto recv = scene_object_multiset(recovered);
    long long hit = 0;
    for (const auto& [cls, count] : orig) {
        auto it = recv.find(cls);
        if (it != recv.end()) hit += std::min(count, it->second);
    }
    return static_cast<double>(hit) / static_cast<double>(original.objects.size());
}

int quantity_discrepancy(const Scene& original, const Scene& recovered) {
    return std::abs(static_cast<int>(original.objects.size()) -
                    static_cast<int>(recovered.objects.size()));
}

std::vector<ObjectCountBin> default_bins() {
    return {{1, 2}, {3, 4}, {5, 6}, {7, std::numeric_limits<int>::max()}};
}

namespace {

struct Accum {
    int n = 0;
    long double sum = 0;
    double mn = 0, mx = 0;

    void add(double x) {
        if (n == 0) {
            mn = mx = x;
        } else {
            mn = std::min(mn, x);
            mx = std::max(mx, x);
        }
        sum += x;
        ++n;
    }
    Stat stat() const { return {n, n ? static_cast<double>(sum / n) : 0.0, mn, mx}; }
};

std::string format_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

}  // namespace

MetricsReport aggregate(std::span<const SessionRow> rows, const std::vector<ObjectCountBin>& bins) {
    if (rows.empty()) throw ConfigError("aggregate: no session rows");
    if (bins.empty()) throw ConfigError("aggregate: no bins");

    std::map<std::pair<double, int>, std::vector<const SessionRow*>> groups;
    for (const auto& row : rows)
        groups[{row.snr_db, static_cast<int>(row.scheme)}].push_back(&row);

    MetricsReport report;
    for (const auto& [key, group] : groups) {
        SchemeSummary s;
        s.snr_db = key.first;
        s.scheme = static_cast<SchemeTag>(key.second);
        s.sessions = static_cast<int>(group.size());

        Accum psnr_a, sim_a, rec_a, disc_a, down_a, up_a;
        int failures = 0;
        bool any_object_metrics = false;
        std::vector<Accum> bin_rec(bins.size()), bin_disc(bins.size()), bin_sim(bins.size());

        for (const SessionRow* row : group) {
            psnr_a.add(row->psnr_db);
            down_a.add(static_cast<double>(row->downlink_bits));
            up_a.add(static_cast<double>(row->uplink_bits));
            failures += row->semantic_failure ? 1 : 0;
            if (!row->object_metrics) continue;
            any_object_metrics = true;
            sim_a.add(row->similarity);
            rec_a.add(row->recovery);
            disc_a.add(static_cast<double>(row->discrepancy));

            bool binned = false;
            for (std::size_t b = 0; b < bins.size(); ++b) {
                if (row->original_objects < bins[b].lo || row->original_objects > bins[b].hi) continue;
                bin_rec[b].add(row->recovery);
                bin_disc[b].add(static_cast<double>(row->discrepancy));
                bin_sim[b].add(row->similarity);
                binned = true;
                break;
            }
            if (!binned)
                throw ConfigError("aggregate: session object count not covered by bins");
        }

        s.object_metrics = any_object_metrics;
        s.psnr = psnr_a.stat();
        s.similarity = sim_a.stat();
        s.recovery = rec_a.stat();
        s.discrepancy = disc_a.stat();
        s.downlink_bits = down_a.stat();
        s.uplink_bits = up_a.stat();
        s.semantic_failure_rate = static_cast<double>(failures) / static_cast<double>(s.sessions);
        for (std::size_t b = 0; b < bins.size(); ++b) {
            BinStat bs;
            bs.bin = bins[b];
            bs.n = bin_rec[b].n;
            bs.mean_recovery = bin_rec[b].stat().mean;
            bs.mean_discrepancy = bin_disc[b].stat().mean;
            bs.mean_similarity = bin_sim[b].stat().mean;
            s.bins.push_back(bs);
        }
        report.summaries.push_back(std::move(s));
    }
    return report;
}

std::string report_table(const MetricsReport& report) {
    std::ostringstream out;
    out << "scheme\tsnr_db\tsessions\tdownlink_bits_mean\tuplink_bits_mean\tpsnr_db_mean\t"
           "similarity_mean\trecovery_mean\tquantity_discrepancy_mean\tsemantic_failure_rate\n";
    for (const auto& s : report.summaries) {
        out << to_string(s.scheme) << '\t' << format_double(s.snr_db, 1) << '\t' << s.sessions
            << '\t' << format_double(s.downlink_bits.mean, 1) << '\t'
            << format_double(s.uplink_bits.mean, 1) << '\t' << format_double(s.psnr.mean, 2)
            << '\t' << (s.object_metrics ? format_double(s.similarity.mean, 4) : std::string("-"))
            << '\t' << (s.object_metrics ? format_double(s.recovery.mean, 4) : std::string("-"))
            << '\t' << (s.object_metrics ? format_double(s.discrepancy.mean, 3) : std::string("-"))
            << '\t' << format_double(s.semantic_failure_rate, 4) << '\n';
    }
    return out.str();
}

std::string report_records(const MetricsReport& report) {
    std::string out;
    for (const auto& s : report.summaries) {
        nlohmann::json rec{
            {"record", "summary"},
            {"scheme", to_string(s.scheme)},
            {"snr_db", s.snr_db},
            {"sessions", s.sessions},
            {"object_metrics", s.object_metrics},
            {"psnr_db_mean", s.psnr.mean},
            {"psnr_db_min", s.psnr.min},
            {"psnr_db_max", s.psnr.max},
            {"similarity_mean", s.similarity.mean},
            {"recovery_mean", s.recovery.mean},
            {"quantity_discrepancy_mean", s.discrepancy.mean},
            {"downlink_bits_mean", s.downlink_bits.mean},
            {"uplink_bits_mean", s.uplink_bits.mean},
            {"semantic_failure_rate", s.semantic_failure_rate},
        };
        out += rec.dump();
        out += '\n';
        for (const auto& b : s.bins) {
            nlohmann::json bin_rec{
                {"record", "bin"},
                {"scheme", to_string(s.scheme)},
                {"snr_db", s.snr_db},
                {"objects_lo", b.bin.lo},
                {"objects_hi", b.bin.hi},
                {"sessions", b.n},
                {"recovery_mean", b.mean_recovery},
                {"quantity_discrepancy_mean", b.mean_discrepancy},
                {"similarity_mean", b.mean_similarity},
            };
            out += bin_rec.dump();
            out += '\n';
        }
    }
    return out;
}

}  // namespace semcom
