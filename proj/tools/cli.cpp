#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "twinscope/corpus_cache.hpp"
#include "twinscope/diagnostics.hpp"
#include "twinscope/error.hpp"
#include "twinscope/estimator.hpp"
#include "twinscope/format.hpp"
#include "twinscope/hash.hpp"
#include "twinscope/ingest.hpp"
#include "twinscope/outcomes.hpp"
#include "twinscope/parallel.hpp"
#include "twinscope/synthetic.hpp"
#include "twinscope/treatments.hpp"
#include "twinscope/twins.hpp"

#ifndef TWINSCOPE_VERSION
#define TWINSCOPE_VERSION "0.0.0"
#endif

namespace twinscope::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Options {
    unsigned threads = 0;

    std::string input, format = "json-lines", output;
    std::string corpus, twins;
    std::optional<int> max_year_gap;

    std::vector<std::string> treatments;
    double smoothing = 1.0;
    std::string source = "auto";
    bool naive = false;
    std::vector<std::string> naive_venues;
    bool venue_table = false;
    std::size_t min_pairs = 100;
    std::string additivity;

    std::string report;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n_random;

    std::string config, output_corpus, output_truth;
};

// Collects what a run read and wrote; one manifest is written next to each output.
class Manifest {
public:
    explicit Manifest(std::string subcommand)
        : subcommand_(std::move(subcommand)), start_(std::chrono::steady_clock::now()) {}

    Json& options() { return options_; }
    Json& extra() { return extra_; }
    void input(const std::string& path) { inputs_[path] = file_fingerprint(path); }
    void output(const std::string& path) { outputs_.push_back(path); }

    void write() const {
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        for (const auto& out : outputs_) {
            Json j;
            j["subcommand"] = subcommand_;
            j["version"] = TWINSCOPE_VERSION;
            j["options"] = options_;
            j["inputs"] = inputs_;
            Json outputs = Json::object();
            for (const auto& o : outputs_) outputs[o] = file_fingerprint(o);
            j["outputs"] = outputs;
            if (!extra_.is_null()) j["summary"] = extra_;
            j["duration_seconds"] = seconds;
            std::ofstream f(out + ".manifest.json", std::ios::binary | std::ios::trunc);
            if (!f) throw IoError("cannot write " + out + ".manifest.json");
            f << j.dump(2) << '\n';
        }
    }

private:
    std::string subcommand_;
    std::chrono::steady_clock::time_point start_;
    Json options_ = Json::object();
    Json inputs_ = Json::object();
    Json extra_;
    std::vector<std::string> outputs_;
};

void check_distinct(const std::string& output, const std::vector<std::string>& inputs) {
    std::error_code ec;
    for (const auto& in : inputs) {
        if (in.empty()) continue;
        if (output == in || fs::equivalent(output, in, ec))
            throw UsageError("output '" + output + "' would overwrite input '" + in + "'");
    }
}

// Writes through a temporary file so a failed run never leaves a truncated output.
template <class Fn>
void write_file(const std::string& path, Fn&& fn) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + path + " for writing");
        fn(out);
        out.flush();
        if (!out) throw IoError("write failed for " + path);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move output into place at " + path + ": " + ec.message());
}

TwinSet load_twins(const std::string& path, const Corpus& corpus) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    TwinListRead read = read_twin_list(in);
    if (read.malformed_lines) std::cerr << "warning: " << read.malformed_lines << " malformed twin-list lines skipped\n";
    if (read.duplicate_pairs) std::cerr << "warning: " << read.duplicate_pairs << " duplicate twin pairs skipped\n";
    RestrictedTwins r = restrict_to_corpus(read.twins, corpus);
    if (r.dropped_missing_paper)
        std::cerr << "warning: " << r.dropped_missing_paper << " twin pairs reference papers not in the corpus\n";
    return std::move(r.twins);
}

int cmd_ingest(const Options& o) {
    check_distinct(o.output, {o.input});
    Manifest m("ingest");
    m.options() = {{"input", o.input}, {"format", o.format}, {"output", o.output}, {"threads", o.threads}};
    InputFormat fmt = parse_input_format(o.format);
    m.input(o.input);
    IngestResult r = parse_corpus(o.input, fmt, o.threads);
    std::cerr << "ingest: " << r.stats.lines << " lines, " << r.stats.records << " records, " << r.stats.malformed
              << " malformed (" << r.stats.duplicates << " duplicate ids)\n";
    for (const auto& e : r.stats.sample_errors) std::cerr << "  " << e << '\n';
    write_file(o.output, [&](std::ostream& out) { save_corpus_cache(out, r.corpus); });
    m.output(o.output);
    m.extra() = {{"lines", r.stats.lines},
                 {"records", r.stats.records},
                 {"malformed", r.stats.malformed},
                 {"duplicates", r.stats.duplicates}};
    m.write();
    return 0;
}

int cmd_twins(const Options& o) {
    check_distinct(o.output, {o.corpus});
    if (o.max_year_gap && *o.max_year_gap < 0) throw UsageError("--max-year-gap must be >= 0");
    Manifest m("twins");
    m.options() = {{"corpus", o.corpus}, {"output", o.output}, {"threads", o.threads}};
    if (o.max_year_gap) m.options()["max_year_gap"] = *o.max_year_gap;
    m.input(o.corpus);
    Corpus corpus = load_corpus_cache(o.corpus);
    TwinSet twins = detect_twins(corpus, o.threads);
    std::size_t detected = twins.size();
    std::size_t dropped = 0;
    if (o.max_year_gap) {
        FilteredTwins f = filter_twins(twins, corpus, o.max_year_gap);
        dropped = f.dropped_missing_year;
        twins = std::move(f.twins);
    }
    std::cerr << "twins: " << detected << " mutual-citation pairs among " << corpus.size() << " papers";
    if (o.max_year_gap)
        std::cerr << ", " << twins.size() << " kept with year gap <= " << *o.max_year_gap << " (" << dropped
                  << " dropped for a missing year)";
    std::cerr << '\n';
    write_file(o.output, [&](std::ostream& out) { write_twin_list(out, twins); });
    m.output(o.output);
    m.extra() = {{"detected", detected}, {"written", twins.size()}, {"dropped_missing_year", dropped}};
    m.write();
    return 0;
}

void write_ate_row(std::ostream& out, const AteResult& r) {
    out << r.treatment << '\t' << r.n_pairs << '\t';
    if (r.ok())
        out << format_double(r.ate);
    else
        out << "EMPTY";
    out << '\t' << format_double(r.stddev) << '\t' << format_double(r.std_error) << '\n';
}

void write_naive_row(std::ostream& out, const NaiveResult& r) {
    out << "naive:" << r.treatment << '\t' << (r.n_treated + r.n_control) << '\t';
    if (r.ok())
        out << format_double(r.ate);
    else
        out << "EMPTY-GROUP";
    out << "\tNA\t" << format_double(r.std_error) << '\n';
}

int cmd_ate(const Options& o) {
    check_distinct(o.output, {o.corpus, o.twins});
    if (o.treatments.empty() && !o.venue_table && o.additivity.empty())
        throw UsageError("ate needs at least one of --treatment, --venue-table, --additivity");
    if (!o.naive_venues.empty() && !o.naive) throw UsageError("--naive-venue requires --naive");

    std::vector<TreatmentSpec> specs;
    for (const auto& t : o.treatments) specs.push_back(parse_treatment(t));
    std::optional<std::pair<TreatmentSpec, TreatmentSpec>> additive;
    if (!o.additivity.empty()) {
        TreatmentSpec combo = parse_treatment("combo=" + o.additivity);
        if (combo.members.size() != 2) throw UsageError("--additivity takes exactly two treatments: <k1>+<k2>");
        additive.emplace(combo.members[0], combo.members[1]);
    }
    CitationSource source = parse_citation_source(o.source);

    Manifest m("ate");
    m.options() = {{"corpus", o.corpus},         {"twins", o.twins},     {"treatments", o.treatments},
                   {"smoothing", o.smoothing},   {"source", o.source},   {"naive", o.naive},
                   {"naive_venues", o.naive_venues}, {"venue_table", o.venue_table},
                   {"min_pairs", o.min_pairs},   {"additivity", o.additivity}, {"output", o.output},
                   {"threads", o.threads}};
    m.input(o.corpus);
    m.input(o.twins);
    Corpus corpus = load_corpus_cache(o.corpus);
    TwinSet twins = load_twins(o.twins, corpus);
    OutcomeTable outcomes = compute_outcomes(corpus, o.smoothing, source);

    std::optional<std::set<std::string>> venues;
    if (!o.naive_venues.empty()) {
        venues.emplace();
        for (const auto& v : o.naive_venues) venues->insert(normalize_venue(v));
    }

    std::ostringstream out;
    out << "treatment\tn_pairs\tate\tstddev\tstderr\n";
    for (const auto& spec : specs) {
        AteResult r = estimate_ate(build_pair_dataset(twins, spec, corpus, o.threads), outcomes);
        write_ate_row(out, r);
        if (!r.ok()) std::cerr << "warning: no twin pairs assignable under '" << r.treatment << "'\n";
        if (!o.naive) continue;
        if (spec.is_comparative())
            std::cerr << "warning: no naive estimate for comparative treatment '" << spec.name() << "'\n";
        else
            write_naive_row(out, naive_observational_ate(corpus, spec, outcomes, venues));
    }
    if (additive) {
        AdditivityReport a = additivity_report(twins, corpus, outcomes, additive->first, additive->second);
        write_ate_row(out, a.a);
        write_ate_row(out, a.b);
        write_ate_row(out, a.both);
        if (a.subadditive)
            std::cerr << "additivity: combined effect is " << (*a.subadditive ? "sub-additive" : "not sub-additive")
                      << '\n';
        else
            std::cerr << "additivity: undetermined, at least one dataset is empty\n";
    }
    if (o.venue_table) {
        auto rows = venue_ate_table(twins, corpus, outcomes, o.min_pairs);
        if (rows.empty()) std::cerr << "venue table: no venue pair has >= " << o.min_pairs << " twin pairs\n";
        for (auto& row : rows) {
            row.result.treatment = "venue=" + row.treated_venue + "::" + row.control_venue;
            write_ate_row(out, row.result);
        }
    }
    write_file(o.output, [&](std::ostream& f) { f << out.str(); });
    m.output(o.output);
    m.extra() = {{"twin_pairs", twins.size()}};
    m.write();
    return 0;
}

void write_histogram(std::ostream& out, const Histogram& twins, const Histogram& random) {
    out << "bin_lo\tbin_hi\tcount_twins\tcount_random\n";
    const auto& e = twins.edges();
    for (std::size_t b = 0; b + 1 < e.size(); ++b) {
        out << format_double(e[b]) << '\t' << format_double(e[b + 1]) << '\t' << twins.counts()[b] << '\t'
            << (random.counts().empty() ? 0 : random.counts()[b]) << '\n';
    }
}

int cmd_diagnose(const Options& o) {
    check_distinct(o.output, {o.corpus, o.twins});
    if (!o.seed) throw UsageError("diagnose requires an explicit --seed");
    if (o.report != "year" && o.report != "abstract" && o.report != "collab")
        throw UsageError("--report must be one of year, abstract, collab");

    Manifest m("diagnose");
    m.options() = {{"corpus", o.corpus}, {"twins", o.twins}, {"report", o.report},
                   {"seed", *o.seed},    {"output", o.output}, {"threads", o.threads}};
    m.input(o.corpus);
    m.input(o.twins);
    Corpus corpus = load_corpus_cache(o.corpus);
    TwinSet twins = load_twins(o.twins, corpus);
    std::size_t n_random = o.n_random.value_or(twins.size());
    m.options()["n_random"] = n_random;

    std::ostringstream out;
    Json summary;
    if (o.report == "year") {
        YearGapReport r = year_gap_report(twins, corpus, n_random, *o.seed);
        write_histogram(out, r.twins, r.random);
        out << "inf\tinf\t" << r.twins.overflow() << '\t' << r.random.overflow() << '\n';
        std::cerr << "year gap: " << r.twin_pairs << " twin pairs with years, " << r.missing_year
                  << " missing a year; same-or-next-year fraction "
                  << format_double(r.same_or_next_year_fraction) << '\n';
        summary = {{"twin_pairs", r.twin_pairs},
                   {"missing_year", r.missing_year},
                   {"same_or_next_year_fraction", format_double(r.same_or_next_year_fraction)}};
    } else if (o.report == "abstract") {
        AbstractReport r = abstract_distance_report(twins, corpus, n_random, *o.seed, o.threads);
        write_histogram(out, r.twins, r.random);
        std::cerr << "abstract distance: " << r.twin_pairs << " twin pairs, " << r.random_pairs
                  << " random pairs; mean twin " << format_double(r.mean_twin) << ", mean random "
                  << format_double(r.mean_random) << '\n';
        summary = {{"twin_pairs", r.twin_pairs},
                   {"random_pairs", r.random_pairs},
                   {"mean_twin", format_double(r.mean_twin)},
                   {"mean_random", format_double(r.mean_random)},
                   {"mean_gap", format_double(r.mean_gap)}};
    } else {
        CollabReport r = collab_distance_report(twins, corpus, n_random, *o.seed, o.threads);
        write_histogram(out, r.twins, r.random);
        out << "inf\tinf\t" << r.twin_unreachable << '\t' << r.random_unreachable << '\n';
        std::cerr << "collab distance: " << r.twin_pairs << " twin pairs (" << r.twin_unreachable << " unreachable, "
                  << r.twin_no_authors << " without authors), " << r.random_pairs << " random pairs ("
                  << r.random_unreachable << " unreachable, " << r.random_no_authors
                  << " without authors); mean twin " << format_double(r.mean_twin) << ", mean random "
                  << format_double(r.mean_random) << '\n';
        summary = {{"twin_pairs", r.twin_pairs},
                   {"random_pairs", r.random_pairs},
                   {"twin_unreachable", r.twin_unreachable},
                   {"random_unreachable", r.random_unreachable},
                   {"twin_no_authors", r.twin_no_authors},
                   {"random_no_authors", r.random_no_authors}};
    }
    write_file(o.output, [&](std::ostream& f) { f << out.str(); });
    m.output(o.output);
    m.extra() = summary;
    m.write();
    return 0;
}

int cmd_simulate(const Options& o) {
    if (!o.seed) throw UsageError("simulate requires an explicit --seed");
    check_distinct(o.output_corpus, {o.config});
    check_distinct(o.output_truth, {o.config, o.output_corpus});
    Manifest m("simulate");
    m.options() = {{"config", o.config},
                   {"seed", *o.seed},
                   {"output_corpus", o.output_corpus},
                   {"output_truth", o.output_truth},
                   {"format", o.format}};
    m.input(o.config);
    SynthConfig cfg = load_synth_config(o.config);
    cfg.seed = *o.seed;
    InputFormat fmt = parse_input_format(o.format);
    SyntheticData data = generate(cfg);
    write_file(o.output_corpus, [&](std::ostream& out) { write_corpus(out, data.corpus, fmt); });
    write_file(o.output_truth, [&](std::ostream& out) { write_truth(out, data.truth); });
    m.output(o.output_corpus);
    m.output(o.output_truth);
    m.extra() = {{"papers", data.corpus.size()},
                 {"planted_twin_pairs", data.planted_twins.size()},
                 {"twin_population_ate", data.truth.twin_population_ate}};
    std::cerr << "simulate: " << data.corpus.size() << " papers, " << data.planted_twins.size()
              << " planted twin pairs, twin-population ATE " << format_double(data.truth.twin_population_ate)
              << '\n';
    m.write();
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    Options o;
    CLI::App app{"Twin-paper causal effect estimation on citation data", "twinscope"};
    app.set_version_flag("--version", TWINSCOPE_VERSION);
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--threads", o.threads, "Worker threads, 0 = all cores; results do not depend on it")
        ->capture_default_str();

    auto* ingest = app.add_subcommand("ingest", "Parse a record dump into a corpus cache");
    ingest->add_option("--input", o.input, "Input records")->required();
    ingest->add_option("--format", o.format, "json-lines or tsv")->capture_default_str();
    ingest->add_option("--output", o.output, "Corpus cache to write")->required();

    auto* twins = app.add_subcommand("twins", "Detect mutually citing paper pairs");
    twins->add_option("--corpus", o.corpus, "Corpus cache")->required();
    twins->add_option("--max-year-gap", o.max_year_gap, "Drop pairs further apart in years");
    twins->add_option("--output", o.output, "Twin list to write")->required();

    auto* ate = app.add_subcommand("ate", "Estimate treatment effects over twin pairs");
    ate->add_option("--corpus", o.corpus, "Corpus cache")->required();
    ate->add_option("--twins", o.twins, "Twin list")->required();
    ate->add_option("--treatment", o.treatments,
                    "colon | keyword=<w> | short-title | long-refs | long-abstract | long-paper | self-cite | "
                    "priority | venue=<a>::<b> | combo=<k1>+<k2>; repeatable");
    ate->add_option("--smoothing", o.smoothing, "Outcome is log2(citations + smoothing)")->capture_default_str();
    ate->add_option("--source", o.source, "Citation counts: auto, snapshot or internal")->capture_default_str();
    ate->add_flag("--naive", o.naive, "Also report the naive difference of group means");
    ate->add_option("--naive-venue", o.naive_venues, "Restrict the naive population to these venues");
    ate->add_flag("--venue-table", o.venue_table, "Report the venue-versus-venue table");
    ate->add_option("--min-pairs", o.min_pairs, "Minimum twin pairs per venue-table row")->capture_default_str();
    ate->add_option("--additivity", o.additivity, "Compare <k1>, <k2> and their combination");
    ate->add_option("--output", o.output, "Result TSV")->required();

    auto* diagnose = app.add_subcommand("diagnose", "Assumption diagnostics for a twin list");
    diagnose->add_option("--corpus", o.corpus, "Corpus cache")->required();
    diagnose->add_option("--twins", o.twins, "Twin list")->required();
    diagnose->add_option("--report", o.report, "year, abstract or collab")->required();
    diagnose->add_option("--seed", o.seed, "Seed for the random-pair baseline")->required();
    diagnose->add_option("--n-random", o.n_random, "Random baseline pairs (default: number of twins)");
    diagnose->add_option("--output", o.output, "Histogram TSV")->required();

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic corpus with known effects");
    simulate->add_option("--config", o.config, "Generator config (JSON)")->required();
    simulate->add_option("--seed", o.seed, "Generator seed")->required();
    simulate->add_option("--format", o.format, "Corpus format: json-lines or tsv")->capture_default_str();
    simulate->add_option("--output-corpus", o.output_corpus, "Corpus records to write")->required();
    simulate->add_option("--output-truth", o.output_truth, "Potential-outcome table to write")->required();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("twinscope");
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n\n";
        auto parsed = app.get_subcommands();
        std::cerr << (parsed.empty() ? app.help() : parsed.front()->help());
        return 1;
    }

    try {
        if (*ingest) return cmd_ingest(o);
        if (*twins) return cmd_twins(o);
        if (*ate) return cmd_ate(o);
        if (*diagnose) return cmd_diagnose(o);
        if (*simulate) return cmd_simulate(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace twinscope::cli
