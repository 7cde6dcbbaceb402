#include "twinscope/twins.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <ostream>

#include "twinscope/error.hpp"
#include "twinscope/hash.hpp"
#include "twinscope/parallel.hpp"

namespace twinscope {

TwinPair canonical_pair(std::string a, std::string b) {
    if (a == b) throw DataError("a paper cannot be its own twin: '" + a + "'");
    if (b < a) std::swap(a, b);
    return TwinPair{std::move(a), std::move(b)};
}

TwinSet detect_twins(const Corpus& corpus, unsigned threads) {
    const std::size_t n = corpus.size();
    std::vector<std::vector<std::pair<Corpus::Index, Corpus::Index>>> found(chunk_count(n, threads));
    parallel_chunks(n, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto u = static_cast<Corpus::Index>(i);
            for (Corpus::Index v : corpus.references_of(u)) {
                if (v <= u) continue;
                auto back = corpus.references_of(v);
                if (std::binary_search(back.begin(), back.end(), u)) found[chunk].emplace_back(u, v);
            }
        }
    });

    TwinSet out;
    for (const auto& part : found)
        for (auto [u, v] : part) out.pairs.push_back(canonical_pair(corpus.paper(u).id, corpus.paper(v).id));
    std::sort(out.pairs.begin(), out.pairs.end());
    out.source_fingerprint = corpus.fingerprint();
    return out;
}

FilteredTwins filter_twins(const TwinSet& twins, const Corpus& corpus, std::optional<int> max_year_gap) {
    if (!max_year_gap) return FilteredTwins{twins, 0};
    if (*max_year_gap < 0) throw UsageError("max year gap must be >= 0");
    FilteredTwins out;
    out.twins.source_fingerprint = twins.source_fingerprint;
    for (const auto& pair : twins) {
        const auto& a = corpus.at(pair.first);
        const auto& b = corpus.at(pair.second);
        if (!a.year || !b.year) {
            ++out.dropped_missing_year;
            continue;
        }
        if (std::abs(*a.year - *b.year) <= *max_year_gap) out.twins.pairs.push_back(pair);
    }
    return out;
}

void write_twin_list(std::ostream& out, const TwinSet& twins) {
    for (const auto& p : twins) out << p.first << '\t' << p.second << '\n';
}

TwinListRead read_twin_list(std::istream& in) {
    TwinListRead out;
    Fnv1a64 h;
    std::string line;
    while (std::getline(in, line)) {
        h.update(line);
        h.update("\n");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
            line.find('\t', tab + 1) != std::string::npos) {
            ++out.malformed_lines;
            continue;
        }
        std::string a = line.substr(0, tab);
        std::string b = line.substr(tab + 1);
        if (a == b) {
            ++out.malformed_lines;
            continue;
        }
        out.twins.pairs.push_back(canonical_pair(std::move(a), std::move(b)));
    }
    if (in.bad()) throw IoError("read error in twin list");
    auto& pairs = out.twins.pairs;
    std::sort(pairs.begin(), pairs.end());
    auto last = std::unique(pairs.begin(), pairs.end());
    out.duplicate_pairs = static_cast<std::size_t>(pairs.end() - last);
    pairs.erase(last, pairs.end());
    out.twins.source_fingerprint = h.hex();
    return out;
}

RestrictedTwins restrict_to_corpus(const TwinSet& twins, const Corpus& corpus) {
    RestrictedTwins out;
    out.twins.source_fingerprint = twins.source_fingerprint;
    for (const auto& p : twins) {
        if (corpus.contains(p.first) && corpus.contains(p.second))
            out.twins.pairs.push_back(p);
        else
            ++out.dropped_missing_paper;
    }
    return out;
}

}  // namespace twinscope
