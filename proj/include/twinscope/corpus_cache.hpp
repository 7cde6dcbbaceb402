#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "twinscope/corpus.hpp"

namespace twinscope {

// Binary snapshot: magic, schema version, records, trailing checksum.
inline constexpr std::uint32_t kCorpusCacheVersion = 1;

void save_corpus_cache(std::ostream& out, const Corpus& corpus);
void save_corpus_cache(const std::filesystem::path& path, const Corpus& corpus);

// Throws FormatError on bad magic, version mismatch or checksum mismatch.
Corpus load_corpus_cache(std::istream& in);
Corpus load_corpus_cache(const std::filesystem::path& path);

}  // namespace twinscope
