#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "twinscope/corpus.hpp"
#include "twinscope/estimator.hpp"
#include "twinscope/treatments.hpp"
#include "twinscope/twins.hpp"

namespace twinscope {

struct VenueSpec {
    std::string name;
    double effect = 0.0;  // added to the log2 outcome of every paper in the venue
    double custom = 0.5;  // treatment probability when the venue fully decides
    double weight = 1.0;  // relative sampling weight
};

// A title-level treatment realized in the generated titles.
struct PlantedTreatment {
    TreatmentSpec spec = TreatmentSpec::colon();  // colon or keyword
    double effect = 0.0;                          // true ITE, log2 units
};

struct SynthConfig {
    std::size_t n_papers = 1000;
    double twin_fraction = 0.5;  // fraction of papers that belong to a twin pair

    std::vector<VenueSpec> venues{{"venue a", 0.0, 1.0, 1.0}, {"venue b", 0.0, 0.0, 1.0}};
    std::vector<PlantedTreatment> treatments{PlantedTreatment{}};

    // P(treated) = confounding * venue.custom + (1 - confounding) / 2.
    double confounding = 0.0;
    double noise_sd = 0.0;             // per-paper outcome noise
    double quality_sd = 1.0;           // latent quality, shared by twins
    double base_log_citations = 5.0;
    double cross_venue_twin_prob = 0.0;

    std::size_t n_communities = 20;
    std::size_t authors_per_community = 40;
    std::size_t min_authors = 1;
    std::size_t max_authors = 4;
    double cross_community_author_prob = 0.02;
    double twin_shared_author_prob = 0.1;

    std::size_t topic_vocabulary = 200;
    std::size_t background_vocabulary = 2000;
    double topic_word_prob = 0.6;
    std::size_t abstract_words = 50;  // 0 disables abstracts
    std::size_t min_title_words = 3;
    std::size_t max_title_words = 10;

    std::vector<double> year_gap_probs{0.5, 0.35, 0.1, 0.05};  // P(|dyear| = k) for twins
    int first_year = 1990;
    int last_year = 2020;

    std::size_t min_references = 0;  // one-way references to earlier papers
    std::size_t max_references = 10;
    double dangling_reference_prob = 0.0;
    double missing_pages_prob = 0.1;
    std::size_t min_pages = 4;
    std::size_t max_pages = 20;

    std::uint64_t seed = 0;

    // Throws ConfigError naming the first violated constraint.
    void validate() const;
    std::size_t twin_pair_count() const noexcept;
};

// Reads a JSON object with SynthConfig field names; absent keys keep defaults.
SynthConfig load_synth_config(const std::filesystem::path& path);
SynthConfig parse_synth_config(std::string_view json_text);

struct PaperTruth {
    std::string id;
    bool treated = false;  // primary (first) planted treatment
    double y1 = 0.0;       // quantized potential outcomes, log2(c + 1)
    double y0 = 0.0;
    std::int64_t citations = 0;
};

struct SyntheticTruth {
    std::vector<PaperTruth> papers;  // corpus order
    // indicators[k][i]: paper i received planted treatment k.
    std::vector<std::vector<std::uint8_t>> indicators;
    double twin_population_ate = 0.0;

    // Throws DataError naming the paper when absent.
    const PaperTruth& at(std::string_view id) const;

    void reindex();

private:
    std::unordered_map<std::string, std::size_t> index_;
};

struct SyntheticData {
    Corpus corpus;
    SyntheticTruth truth;
    TwinSet planted_twins;
};

// Seed-deterministic. Only planted twins cite each other both ways.
SyntheticData generate(const SynthConfig& config);

// Mean of y1 - y0 over every paper in the dataset's assignments.
double truth_ate(const SyntheticTruth& truth, const PairDataset& pairs);

// TSV with header "id\ttreated\ty1\ty0\tcitations".
void write_truth(std::ostream& out, const SyntheticTruth& truth);
SyntheticTruth read_truth(std::istream& in);

}  // namespace twinscope
