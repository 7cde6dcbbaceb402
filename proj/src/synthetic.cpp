#include "twinscope/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "twinscope/error.hpp"
#include "twinscope/format.hpp"
#include "twinscope/ingest.hpp"
#include "twinscope/outcomes.hpp"
#include "twinscope/random.hpp"

namespace twinscope {
namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid synthetic config: " + what);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

// Citation count whose smoothed log2 is closest to `y`: round(2^y) - 1, floored at 0.
std::int64_t quantize(double y) {
    double v = std::exp2(std::min(y, 60.0));
    return std::max<std::int64_t>(0, std::llround(v) - 1);
}

std::size_t weighted_pick(rng::Engine& g, const std::vector<double>& cumulative) {
    double u = rng::unit(g) * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

std::string pad_id(std::size_t i, std::size_t width) {
    std::string s = std::to_string(i);
    return "p" + std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

std::string word(rng::Engine& g, const SynthConfig& c, std::size_t topic) {
    if (rng::bernoulli(g, c.topic_word_prob))
        return "t" + std::to_string(topic) + "w" + std::to_string(rng::below(g, c.topic_vocabulary));
    return "g" + std::to_string(rng::below(g, c.background_vocabulary));
}

double number(const nlohmann::json& j, const char* key) {
    if (!j.is_number()) throw ConfigError(std::string("synthetic config key '") + key + "' must be a number");
    return j.get<double>();
}

std::size_t count(const nlohmann::json& j, const char* key) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        throw ConfigError(std::string("synthetic config key '") + key + "' must be a non-negative integer");
    return j.get<std::size_t>();
}

}  // namespace

std::size_t SynthConfig::twin_pair_count() const noexcept {
    return static_cast<std::size_t>(std::floor(twin_fraction * static_cast<double>(n_papers) / 2.0));
}

void SynthConfig::validate() const {
    require(n_papers >= 2, "n_papers must be >= 2");
    require(is_probability(twin_fraction), "twin_fraction must be in [0, 1]");
    require(2 * twin_pair_count() <= n_papers, "twin_fraction needs more twin pairs than papers allow");
    require(!venues.empty(), "at least one venue is required");
    std::set<std::string> names;
    for (const auto& v : venues) {
        std::string n = normalize_venue(v.name);
        require(!n.empty(), "venue names must be non-empty");
        require(names.insert(n).second, "venue names must be distinct after normalization");
        require(std::isfinite(v.effect), "venue effect must be finite");
        require(is_probability(v.custom), "venue custom must be in [0, 1]");
        require(std::isfinite(v.weight) && v.weight > 0.0, "venue weight must be > 0");
    }
    require(!treatments.empty(), "at least one planted treatment is required");
    std::set<std::string> planted;
    for (const auto& t : treatments) {
        require(t.spec.kind == TreatmentKind::colon_in_title || t.spec.kind == TreatmentKind::keyword_in_title,
                "planted treatments must be colon or keyword=<w>");
        require(planted.insert(t.spec.name()).second, "planted treatments must be distinct");
        require(std::isfinite(t.effect), "treatment effect must be finite");
        if (t.spec.kind == TreatmentKind::keyword_in_title) {
            const std::string& k = t.spec.keyword;
            bool generated_shape = k.size() > 1 && (k[0] == 't' || k[0] == 'g' || k[0] == 'm') &&
                                   std::isdigit(static_cast<unsigned char>(k[1]));
            require(!generated_shape, "keyword collides with generated vocabulary");
        }
    }
    require(is_probability(confounding), "confounding must be in [0, 1]");
    require(std::isfinite(noise_sd) && noise_sd >= 0.0, "noise_sd must be >= 0");
    require(std::isfinite(quality_sd) && quality_sd >= 0.0, "quality_sd must be >= 0");
    require(std::isfinite(base_log_citations), "base_log_citations must be finite");
    require(is_probability(cross_venue_twin_prob), "cross_venue_twin_prob must be in [0, 1]");
    require(n_communities >= 1, "n_communities must be >= 1");
    require(min_authors >= 1 && min_authors <= max_authors, "need 1 <= min_authors <= max_authors");
    require(max_authors <= authors_per_community, "max_authors must not exceed authors_per_community");
    require(is_probability(cross_community_author_prob), "cross_community_author_prob must be in [0, 1]");
    require(is_probability(twin_shared_author_prob), "twin_shared_author_prob must be in [0, 1]");
    require(topic_vocabulary >= 1 && background_vocabulary >= 1, "vocabularies must be non-empty");
    require(is_probability(topic_word_prob), "topic_word_prob must be in [0, 1]");
    require(min_title_words >= 1 && min_title_words <= max_title_words, "need 1 <= min_title_words <= max_title_words");
    require(!year_gap_probs.empty(), "year_gap_probs must be non-empty");
    double total = 0.0;
    for (double p : year_gap_probs) {
        require(std::isfinite(p) && p >= 0.0, "year_gap_probs must be >= 0");
        total += p;
    }
    require(total > 0.0, "year_gap_probs must not all be zero");
    require(first_year > 0 && last_year >= first_year, "need 0 < first_year <= last_year");
    require(static_cast<std::size_t>(last_year - first_year) + 1 >= year_gap_probs.size(),
            "year range too short for the largest twin year gap");
    require(min_references <= max_references, "need min_references <= max_references");
    require(is_probability(dangling_reference_prob), "dangling_reference_prob must be in [0, 1]");
    require(is_probability(missing_pages_prob), "missing_pages_prob must be in [0, 1]");
    require(min_pages >= 1 && min_pages <= max_pages, "need 1 <= min_pages <= max_pages");
}

SynthConfig parse_synth_config(std::string_view json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text.begin(), json_text.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError("synthetic config must be a JSON object");
    SynthConfig c;
    for (const auto& [key, v] : j.items()) {
        const char* k = key.c_str();
        if (key == "n_papers") c.n_papers = count(v, k);
        else if (key == "twin_fraction") c.twin_fraction = number(v, k);
        else if (key == "confounding") c.confounding = number(v, k);
        else if (key == "noise_sd") c.noise_sd = number(v, k);
        else if (key == "quality_sd") c.quality_sd = number(v, k);
        else if (key == "base_log_citations") c.base_log_citations = number(v, k);
        else if (key == "cross_venue_twin_prob") c.cross_venue_twin_prob = number(v, k);
        else if (key == "n_communities") c.n_communities = count(v, k);
        else if (key == "authors_per_community") c.authors_per_community = count(v, k);
        else if (key == "min_authors") c.min_authors = count(v, k);
        else if (key == "max_authors") c.max_authors = count(v, k);
        else if (key == "cross_community_author_prob") c.cross_community_author_prob = number(v, k);
        else if (key == "twin_shared_author_prob") c.twin_shared_author_prob = number(v, k);
        else if (key == "topic_vocabulary") c.topic_vocabulary = count(v, k);
        else if (key == "background_vocabulary") c.background_vocabulary = count(v, k);
        else if (key == "topic_word_prob") c.topic_word_prob = number(v, k);
        else if (key == "abstract_words") c.abstract_words = count(v, k);
        else if (key == "min_title_words") c.min_title_words = count(v, k);
        else if (key == "max_title_words") c.max_title_words = count(v, k);
        else if (key == "first_year") c.first_year = static_cast<int>(count(v, k));
        else if (key == "last_year") c.last_year = static_cast<int>(count(v, k));
        else if (key == "min_references") c.min_references = count(v, k);
        else if (key == "max_references") c.max_references = count(v, k);
        else if (key == "dangling_reference_prob") c.dangling_reference_prob = number(v, k);
        else if (key == "missing_pages_prob") c.missing_pages_prob = number(v, k);
        else if (key == "min_pages") c.min_pages = count(v, k);
        else if (key == "max_pages") c.max_pages = count(v, k);
        else if (key == "seed") c.seed = v.is_number_unsigned() ? v.get<std::uint64_t>() : count(v, k);
        else if (key == "year_gap_probs") {
            if (!v.is_array()) throw ConfigError("year_gap_probs must be a list of numbers");
            c.year_gap_probs.clear();
            for (const auto& p : v) c.year_gap_probs.push_back(number(p, k));
        } else if (key == "venues") {
            if (!v.is_array()) throw ConfigError("venues must be a list of objects");
            c.venues.clear();
            for (const auto& e : v) {
                if (!e.is_object() || !e.contains("name") || !e["name"].is_string())
                    throw ConfigError("each venue needs a string 'name'");
                VenueSpec vs;
                vs.name = e["name"].get<std::string>();
                if (e.contains("effect")) vs.effect = number(e["effect"], "venues.effect");
                if (e.contains("custom")) vs.custom = number(e["custom"], "venues.custom");
                if (e.contains("weight")) vs.weight = number(e["weight"], "venues.weight");
                c.venues.push_back(std::move(vs));
            }
        } else if (key == "treatments") {
            if (!v.is_array()) throw ConfigError("treatments must be a list of objects");
            c.treatments.clear();
            for (const auto& e : v) {
                if (!e.is_object() || !e.contains("treatment") || !e["treatment"].is_string())
                    throw ConfigError("each planted treatment needs a string 'treatment'");
                PlantedTreatment t;
                try {
                    t.spec = parse_treatment(e["treatment"].get<std::string>());
                } catch (const UsageError& err) {
                    throw ConfigError(err.what());
                }
                if (e.contains("effect")) t.effect = number(e["effect"], "treatments.effect");
                c.treatments.push_back(std::move(t));
            }
        } else {
            throw ConfigError("unknown synthetic config key '" + key + "'");
        }
    }
    return c;
}

SynthConfig load_synth_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_synth_config(ss.str());
}

const PaperTruth& SyntheticTruth::at(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw DataError("paper '" + std::string(id) + "' not in synthetic truth");
    return papers[it->second];
}

void SyntheticTruth::reindex() {
    index_.clear();
    index_.reserve(papers.size());
    for (std::size_t i = 0; i < papers.size(); ++i) index_.emplace(papers[i].id, i);
}

SyntheticData generate(const SynthConfig& c) {
    c.validate();
    rng::Engine g(c.seed);
    const std::size_t n = c.n_papers;
    const std::size_t n_pairs = c.twin_pair_count();
    const std::size_t width = std::max<std::size_t>(6, std::to_string(n - 1).size());

    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = pad_id(i, width);

    // Twin slots: a random matching over a shuffled prefix.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng::below(g, i + 1)]);
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> partner(n, kNone);
    for (std::size_t k = 0; k < n_pairs; ++k) {
        partner[perm[2 * k]] = perm[2 * k + 1];
        partner[perm[2 * k + 1]] = perm[2 * k];
    }

    std::vector<double> venue_cdf;
    for (const auto& v : c.venues) venue_cdf.push_back((venue_cdf.empty() ? 0.0 : venue_cdf.back()) + v.weight);
    std::vector<double> gap_cdf;
    for (double p : c.year_gap_probs) gap_cdf.push_back((gap_cdf.empty() ? 0.0 : gap_cdf.back()) + p);
    const int max_gap = static_cast<int>(c.year_gap_probs.size()) - 1;

    // Unit-level draws: twins share community, quality and (usually) venue.
    std::vector<std::size_t> community(n), venue(n);
    std::vector<double> quality(n);
    std::vector<int> year(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = partner[i];
        if (j != kNone && j < i) continue;
        community[i] = rng::below(g, c.n_communities);
        quality[i] = c.quality_sd * rng::normal(g);
        venue[i] = weighted_pick(g, venue_cdf);
        if (j == kNone) {
            year[i] = static_cast<int>(rng::between(g, c.first_year, c.last_year));
            continue;
        }
        community[j] = community[i];
        quality[j] = quality[i];
        venue[j] = rng::bernoulli(g, c.cross_venue_twin_prob) ? weighted_pick(g, venue_cdf) : venue[i];
        int base = static_cast<int>(rng::between(g, c.first_year, c.last_year - max_gap));
        int gap = static_cast<int>(weighted_pick(g, gap_cdf));
        bool i_first = rng::bernoulli(g, 0.5);
        year[i] = i_first ? base : base + gap;
        year[j] = i_first ? base + gap : base;
    }

    SyntheticData out;
    SyntheticTruth& truth = out.truth;
    truth.papers.resize(n);
    truth.indicators.assign(c.treatments.size(), std::vector<std::uint8_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        const VenueSpec& v = c.venues[venue[i]];
        const double p_treat = c.confounding * v.custom + (1.0 - c.confounding) * 0.5;
        for (std::size_t k = 0; k < c.treatments.size(); ++k) truth.indicators[k][i] = rng::bernoulli(g, p_treat);
        double latent = c.base_log_citations + quality[i] + v.effect + c.noise_sd * rng::normal(g);
        for (std::size_t k = 1; k < c.treatments.size(); ++k)
            if (truth.indicators[k][i]) latent += c.treatments[k].effect;
        std::int64_t c1 = quantize(latent + c.treatments[0].effect);
        std::int64_t c0 = quantize(latent);
        PaperTruth& t = truth.papers[i];
        t.id = ids[i];
        t.treated = truth.indicators[0][i] != 0;
        t.y1 = log2_outcome(c1, 1.0);
        t.y0 = log2_outcome(c0, 1.0);
        t.citations = t.treated ? c1 : c0;
    }

    std::vector<PaperRecord> papers(n);
    for (std::size_t i = 0; i < n; ++i) {
        PaperRecord& p = papers[i];
        p.id = ids[i];
        p.year = year[i];
        p.venue = normalize_venue(c.venues[venue[i]].name);
        p.citation_count = truth.papers[i].citations;

        std::size_t n_auth = static_cast<std::size_t>(rng::between(g, static_cast<std::int64_t>(c.min_authors),
                                                                    static_cast<std::int64_t>(c.max_authors)));
        std::set<std::pair<std::size_t, std::size_t>> chosen;
        std::size_t j = partner[i];
        if (j != kNone && j < i && rng::bernoulli(g, c.twin_shared_author_prob) && !papers[j].authors.empty()) {
            p.authors.push_back(papers[j].authors.front());
            const std::string& aid = p.authors.back().author_id;
            auto us = aid.find('_');
            chosen.emplace(std::stoul(aid.substr(1, us - 1)), std::stoul(aid.substr(us + 1)));
        }
        for (std::size_t tries = 0; p.authors.size() < n_auth && tries < 8 * n_auth; ++tries) {
            std::size_t comm = rng::bernoulli(g, c.cross_community_author_prob) ? rng::below(g, c.n_communities)
                                                                                : community[i];
            std::size_t member = rng::below(g, c.authors_per_community);
            if (!chosen.emplace(comm, member).second) continue;
            AuthorRef a;
            a.author_id = "a" + std::to_string(comm) + "_" + std::to_string(member);
            a.name = "author " + std::to_string(comm) + " " + std::to_string(member);
            p.authors.push_back(std::move(a));
        }

        std::size_t n_words = static_cast<std::size_t>(rng::between(
            g, static_cast<std::int64_t>(c.min_title_words), static_cast<std::int64_t>(c.max_title_words)));
        std::vector<std::string> words;
        for (std::size_t w = 0; w < n_words; ++w) words.push_back(word(g, c, community[i]));
        std::string prefix;
        for (std::size_t k = 0; k < c.treatments.size(); ++k) {
            if (!truth.indicators[k][i]) continue;
            const TreatmentSpec& spec = c.treatments[k].spec;
            if (spec.kind == TreatmentKind::colon_in_title) {
                prefix = "m" + std::to_string(i) + ": ";
            } else {
                auto pos = static_cast<std::ptrdiff_t>(rng::below(g, words.size() + 1));
                words.insert(words.begin() + pos, spec.keyword);
            }
        }
        p.title = prefix;
        for (std::size_t w = 0; w < words.size(); ++w) {
            if (w) p.title += ' ';
            p.title += words[w];
        }

        if (c.abstract_words > 0) {
            std::string abs;
            for (std::size_t w = 0; w < c.abstract_words; ++w) {
                if (w) abs += ' ';
                abs += word(g, c, community[i]);
            }
            p.abstract = std::move(abs);
        }

        // One-way references only point to earlier papers, so the planted
        // pairs are the only mutual citations.
        std::set<std::size_t> refs;
        if (j != kNone) p.references.push_back(ids[j]);
        std::size_t n_refs = static_cast<std::size_t>(rng::between(
            g, static_cast<std::int64_t>(c.min_references), static_cast<std::int64_t>(c.max_references)));
        for (std::size_t r = 0; r < n_refs && i > 0; ++r) {
            std::size_t target = rng::below(g, i);
            if (target == j || !refs.insert(target).second) continue;
            p.references.push_back(ids[target]);
        }
        if (rng::bernoulli(g, c.dangling_reference_prob)) p.references.push_back("ext" + std::to_string(rng::below(g, 1000000)));

        if (!rng::bernoulli(g, c.missing_pages_prob)) {
            std::int64_t start = rng::between(g, 1, 1000);
            std::int64_t len = rng::between(g, static_cast<std::int64_t>(c.min_pages), static_cast<std::int64_t>(c.max_pages));
            p.page_start = start;
            p.page_end = start + len - 1;
        }
    }

    double sum = 0.0;
    std::size_t members = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (partner[i] == kNone) continue;
        sum += truth.papers[i].y1 - truth.papers[i].y0;
        ++members;
    }
    truth.twin_population_ate = members ? sum / static_cast<double>(members) : 0.0;
    truth.reindex();

    for (std::size_t k = 0; k < n_pairs; ++k)
        out.planted_twins.pairs.push_back(canonical_pair(ids[perm[2 * k]], ids[perm[2 * k + 1]]));
    std::sort(out.planted_twins.pairs.begin(), out.planted_twins.pairs.end());
    out.corpus = Corpus(std::move(papers));
    out.planted_twins.source_fingerprint = out.corpus.fingerprint();
    return out;
}

double truth_ate(const SyntheticTruth& truth, const PairDataset& pairs) {
    if (pairs.empty()) throw DataError("truth_ate of an empty pair dataset");
    double sum = 0.0;
    for (const auto& a : pairs.assignments) {
        const auto& t = truth.at(a.treated);
        const auto& u = truth.at(a.control);
        sum += t.y1 - t.y0;
        sum += u.y1 - u.y0;
    }
    return sum / static_cast<double>(2 * pairs.size());
}

void write_truth(std::ostream& out, const SyntheticTruth& truth) {
    out << "id\ttreated\ty1\ty0\tcitations\n";
    for (const auto& t : truth.papers)
        out << t.id << '\t' << (t.treated ? 1 : 0) << '\t' << format_double(t.y1) << '\t' << format_double(t.y0)
            << '\t' << t.citations << '\n';
}

SyntheticTruth read_truth(std::istream& in) {
    SyntheticTruth truth;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line_no == 1 && line.starts_with("id\t"))) continue;
        std::istringstream fields(line);
        PaperTruth t;
        int treated = 0;
        if (!std::getline(fields, t.id, '\t') || !(fields >> treated >> t.y1 >> t.y0 >> t.citations))
            throw DataError("malformed truth line " + std::to_string(line_no));
        t.treated = treated != 0;
        truth.papers.push_back(std::move(t));
    }
    truth.reindex();
    return truth;
}

}  // namespace twinscope
