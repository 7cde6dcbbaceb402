#pragma once

// Little-endian binary encoding of PaperRecord shared by the corpus
// fingerprint and the cache file.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "twinscope/corpus.hpp"
#include "twinscope/error.hpp"

namespace twinscope::detail {

template <class Sink>
void put_u8(Sink& sink, std::uint8_t v) {
    sink.write(reinterpret_cast<const char*>(&v), 1);
}

template <class Sink>
void put_u32(Sink& sink, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    sink.write(b, 4);
}

template <class Sink>
void put_u64(Sink& sink, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    sink.write(b, 8);
}

template <class Sink>
void put_str(Sink& sink, std::string_view s) {
    put_u32(sink, static_cast<std::uint32_t>(s.size()));
    sink.write(s.data(), s.size());
}

template <class Sink>
void put_opt_i64(Sink& sink, const std::optional<std::int64_t>& v) {
    put_u8(sink, v ? 1 : 0);
    if (v) put_u64(sink, static_cast<std::uint64_t>(*v));
}

template <class Sink>
void encode_record(Sink& sink, const PaperRecord& p) {
    put_str(sink, p.id);
    put_str(sink, p.title);
    put_u8(sink, p.abstract ? 1 : 0);
    if (p.abstract) put_str(sink, *p.abstract);
    put_u8(sink, p.year ? 1 : 0);
    if (p.year) put_u32(sink, static_cast<std::uint32_t>(*p.year));
    put_u8(sink, p.venue ? 1 : 0);
    if (p.venue) put_str(sink, *p.venue);
    put_u32(sink, static_cast<std::uint32_t>(p.authors.size()));
    for (const auto& a : p.authors) {
        put_str(sink, a.author_id);
        put_str(sink, a.name);
    }
    put_u32(sink, static_cast<std::uint32_t>(p.references.size()));
    for (const auto& r : p.references) put_str(sink, r);
    put_opt_i64(sink, p.citation_count);
    put_opt_i64(sink, p.page_start);
    put_opt_i64(sink, p.page_end);
}

// Reads from a Source exposing read(char*, n) -> bool.
template <class Source>
std::uint8_t get_u8(Source& src) {
    char b;
    if (!src.read(&b, 1)) throw FormatError("truncated corpus cache");
    return static_cast<std::uint8_t>(b);
}

template <class Source>
std::uint32_t get_u32(Source& src) {
    unsigned char b[4];
    if (!src.read(reinterpret_cast<char*>(b), 4)) throw FormatError("truncated corpus cache");
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

template <class Source>
std::uint64_t get_u64(Source& src) {
    unsigned char b[8];
    if (!src.read(reinterpret_cast<char*>(b), 8)) throw FormatError("truncated corpus cache");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

template <class Source>
std::string get_str(Source& src) {
    std::uint32_t n = get_u32(src);
    // Grow in bounded steps so a corrupt length cannot force a huge allocation.
    std::string s;
    constexpr std::uint32_t kStep = 1u << 16;
    while (s.size() < n) {
        std::size_t old = s.size();
        std::size_t take = std::min<std::size_t>(kStep, n - old);
        s.resize(old + take);
        if (!src.read(s.data() + old, take)) throw FormatError("truncated corpus cache");
    }
    return s;
}

template <class Source>
std::optional<std::int64_t> get_opt_i64(Source& src) {
    if (get_u8(src) == 0) return std::nullopt;
    return static_cast<std::int64_t>(get_u64(src));
}

template <class Source>
PaperRecord decode_record(Source& src) {
    PaperRecord p;
    p.id = get_str(src);
    p.title = get_str(src);
    if (get_u8(src)) p.abstract = get_str(src);
    if (get_u8(src)) p.year = static_cast<int>(get_u32(src));
    if (get_u8(src)) p.venue = get_str(src);
    std::uint32_t n_authors = get_u32(src);
    p.authors.reserve(std::min<std::uint32_t>(n_authors, 64));
    for (std::uint32_t i = 0; i < n_authors; ++i) {
        AuthorRef a;
        a.author_id = get_str(src);
        a.name = get_str(src);
        p.authors.push_back(std::move(a));
    }
    std::uint32_t n_refs = get_u32(src);
    p.references.reserve(std::min<std::uint32_t>(n_refs, 1024));
    for (std::uint32_t i = 0; i < n_refs; ++i) p.references.push_back(get_str(src));
    p.citation_count = get_opt_i64(src);
    p.page_start = get_opt_i64(src);
    p.page_end = get_opt_i64(src);
    return p;
}

}  // namespace twinscope::detail
