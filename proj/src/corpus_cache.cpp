#include "twinscope/corpus_cache.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "record_codec.hpp"
#include "twinscope/error.hpp"

namespace twinscope {
namespace {

constexpr char kMagic[8] = {'T', 'W', 'S', 'C', 'O', 'R', 'P', '\0'};

struct StreamSink {
    std::ostream& out;
    void write(const char* data, std::size_t n) { out.write(data, static_cast<std::streamsize>(n)); }
};

struct StreamSource {
    std::istream& in;
    bool read(char* data, std::size_t n) {
        in.read(data, static_cast<std::streamsize>(n));
        return static_cast<std::size_t>(in.gcount()) == n;
    }
};

std::uint64_t parse_hex(const std::string& s) { return std::stoull(s, nullptr, 16); }

}  // namespace

void save_corpus_cache(std::ostream& out, const Corpus& corpus) {
    StreamSink sink{out};
    sink.write(kMagic, sizeof kMagic);
    detail::put_u32(sink, kCorpusCacheVersion);
    detail::put_u64(sink, corpus.size());
    for (const auto& p : corpus.papers()) detail::encode_record(sink, p);
    detail::put_u64(sink, parse_hex(corpus.fingerprint()));
    if (!out) throw IoError("write failed while saving corpus cache");
}

void save_corpus_cache(const std::filesystem::path& path, const Corpus& corpus) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    save_corpus_cache(out, corpus);
    out.close();
    if (!out) throw IoError("write failed: " + path.string());
}

Corpus load_corpus_cache(std::istream& in) {
    StreamSource src{in};
    char magic[sizeof kMagic];
    if (!src.read(magic, sizeof magic) || !std::equal(magic, magic + sizeof magic, kMagic))
        throw FormatError("not a twinscope corpus cache (bad magic); run `twinscope ingest` first");
    std::uint32_t version = detail::get_u32(src);
    if (version != kCorpusCacheVersion)
        throw FormatError("corpus cache schema version " + std::to_string(version) + " does not match expected " +
                          std::to_string(kCorpusCacheVersion) + "; re-run ingest");
    std::uint64_t count = detail::get_u64(src);
    std::vector<PaperRecord> papers;
    papers.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 24)));
    for (std::uint64_t i = 0; i < count; ++i) papers.push_back(detail::decode_record(src));
    std::uint64_t checksum = detail::get_u64(src);
    Corpus corpus;
    try {
        corpus = Corpus(std::move(papers));
    } catch (const FormatError&) {
        throw;
    } catch (const DataError& e) {
        throw FormatError(std::string("corrupt corpus cache: ") + e.what());
    }
    if (parse_hex(corpus.fingerprint()) != checksum) throw FormatError("corpus cache checksum mismatch");
    return corpus;
}

Corpus load_corpus_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return load_corpus_cache(in);
}

}  // namespace twinscope
