#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "semcom/errors.hpp"
#include "semcom/experiment.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw semcom::IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_run(const std::string& config_path, const std::string& output_dir,
            std::uint64_t seed_override, bool has_seed, const std::string& scheme_filter,
            int verbosity) {
    semcom::ExperimentConfig config = config_path.empty()
                                          ? semcom::ExperimentConfig{}
                                          : semcom::ExperimentConfig::load(config_path);
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (has_seed) config.master_seed = seed_override;
    if (!scheme_filter.empty()) {
        config.schemes.clear();
        for (char c : scheme_filter) {
            if (c == ',' || c == ' ') continue;
            switch (c) {
                case 'A': config.schemes.push_back(semcom::SchemeTag::A); break;
                case 'B': config.schemes.push_back(semcom::SchemeTag::B); break;
                case 'C': config.schemes.push_back(semcom::SchemeTag::C); break;
                default: throw semcom::ConfigError(std::string("unknown scheme '") + c + "'");
            }
        }
    }

    if (verbosity > 0)
        std::cerr << "running " << config.schemes.size() << " scheme(s) x " << config.snr_db.size()
                  << " SNR point(s) over " << config.corpus_size << " scenes\n";

    const auto result = semcom::run_experiment(config);
    std::cout << result.table;
    if (verbosity > 0 && !config.output_dir.empty())
        std::cerr << "outputs written to " << config.output_dir << "/\n";
    return 0;
}

int cmd_corpus_generate(const std::string& out_path, int count, std::uint64_t seed,
                        int min_objects, int max_objects) {
    semcom::ExperimentConfig config;
    config.corpus_size = count;
    config.master_seed = seed;
    config.object_count_min = min_objects;
    config.object_count_max = max_objects;
    config.validate();

    const auto vocab = semcom::default_vocabulary(config.canvas_height, config.canvas_width);
    const auto corpus = semcom::build_corpus(config, vocab);
    const std::string text = semcom::serialize_corpus(corpus, vocab);
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out) throw semcom::IoError("cannot open '" + out_path + "'");
        out << text;
    }
    return 0;
}

int cmd_corpus_inspect(const std::string& path) {
    const auto vocab = semcom::default_vocabulary();
    const auto scenes = semcom::parse_corpus(read_file(path), vocab);

    std::map<int, int> count_hist;
    std::map<int, int> class_hist;
    for (const auto& s : scenes) {
        ++count_hist[static_cast<int>(s.objects.size())];
        for (const auto& o : s.objects) ++class_hist[o.class_id];
    }
    std::cout << "scenes: " << scenes.size() << '\n';
    std::cout << "object-count histogram:\n";
    for (const auto& [n, c] : count_hist) std::cout << "  " << n << " objects: " << c << '\n';
    std::cout << "class histogram:\n";
    for (const auto& [cls, c] : class_hist)
        std::cout << "  " << vocab.class_labels[static_cast<std::size_t>(cls)] << ": " << c << '\n';
    return 0;
}

int cmd_report(const std::string& events_path, const std::string& output_dir) {
    const auto rows = semcom::rows_from_event_log(read_file(events_path));
    const auto report = semcom::aggregate(rows, semcom::default_bins());
    semcom::emit_report(report, output_dir);
    std::cout << semcom::report_table(report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semantic communication network benchmark"};
    app.require_subcommand(1);

    // run
    std::string config_path, output_dir, scheme_filter;
    std::uint64_t seed_override = 0;
    int verbosity = 0;
    auto* run = app.add_subcommand("run", "run the configured experiment");
    run->add_option("-c,--config", config_path, "experiment config (JSON)");
    run->add_option("-o,--output", output_dir, "output directory override");
    auto* seed_opt = run->add_option("-s,--seed", seed_override, "master seed override");
    run->add_option("--schemes", scheme_filter, "scheme filter, e.g. A,C");
    run->add_flag("-v,--verbose", verbosity, "progress on stderr");

    // corpus
    auto* corpus = app.add_subcommand("corpus", "generate or inspect a scene corpus");
    std::string corpus_out, corpus_in;
    int corpus_count = 300, min_objects = 1, max_objects = 8;
    std::uint64_t corpus_seed = 1;
    corpus->add_option("-o,--output", corpus_out, "write generated corpus here ('-' = stdout)");
    corpus->add_option("-n,--count", corpus_count, "number of scenes");
    corpus->add_option("-s,--seed", corpus_seed, "generator seed");
    corpus->add_option("--min-objects", min_objects, "minimum objects per scene");
    corpus->add_option("--max-objects", max_objects, "maximum objects per scene");
    corpus->add_option("-i,--inspect", corpus_in, "inspect an existing corpus file");

    // report
    auto* report = app.add_subcommand("report", "re-aggregate a saved event log");
    std::string events_path, report_out = "out";
    report->add_option("-e,--events", events_path, "events.jsonl from a previous run")->required();
    report->add_option("-o,--output", report_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, output_dir, seed_override, seed_opt->count() > 0,
                           scheme_filter, verbosity);
        if (corpus->parsed()) {
            if (!corpus_in.empty()) return cmd_corpus_inspect(corpus_in);
            return cmd_corpus_generate(corpus_out, corpus_count, corpus_seed, min_objects,
                                       max_objects);
        }
        if (report->parsed()) return cmd_report(events_path, report_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
