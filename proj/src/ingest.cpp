#include "twinscope/ingest.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "twinscope/error.hpp"
#include "twinscope/parallel.hpp"
#include "twinscope/text.hpp"

namespace twinscope {

using nlohmann::json;

const std::string_view kTsvHeader =
    "id\ttitle\tabstract\tyear\tvenue\tauthors\treferences\tn_citation\tpage_start\tpage_end";

namespace {

constexpr std::size_t kBatchLines = 1 << 15;
constexpr std::size_t kMaxSampleErrors = 10;

std::optional<std::int64_t> parse_int(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// Integer-valued JSON number or numeric string.
std::optional<std::int64_t> json_int(const json& j) {
    if (j.is_number_unsigned()) return static_cast<std::int64_t>(j.get<std::uint64_t>());
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_float()) {
        double d = j.get<double>();
        if (d == static_cast<double>(static_cast<std::int64_t>(d))) return static_cast<std::int64_t>(d);
        return std::nullopt;
    }
    if (j.is_string()) return parse_int(j.get_ref<const std::string&>());
    return std::nullopt;
}

std::optional<std::string> json_id(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_unsigned()) return std::to_string(j.get<std::uint64_t>());
    if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
    return std::nullopt;
}

const json* member(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
}

// Dedup preserving first occurrence; drop self and empty ids.
void clean_references(PaperRecord& p) {
    // Views point into `kept`, which is reserved up front and never reallocates.
    std::unordered_set<std::string_view> seen;
    std::vector<std::string> kept;
    kept.reserve(p.references.size());
    for (auto& r : p.references) {
        if (r.empty() || r == p.id || seen.contains(r)) continue;
        kept.push_back(std::move(r));
        seen.insert(kept.back());
    }
    p.references = std::move(kept);
}

void clean_pages(PaperRecord& p) {
    if (p.page_start && p.page_end && *p.page_end < *p.page_start) {
        p.page_start.reset();
        p.page_end.reset();
    }
}

std::optional<PaperRecord> finish(PaperRecord p, std::string* error) {
    clean_references(p);
    clean_pages(p);
    if (auto why = validate_record(p)) {
        if (error) *error = *why;
        return std::nullopt;
    }
    return p;
}

// TSV escaping: backslash, tab, newline, carriage return, and the list
// separators ';' and '|'.
std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case ';': out += "\\;"; break;
            case '|': out += "\\|"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::optional<std::string> unescape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out.push_back(s[i]);
            continue;
        }
        if (++i == s.size()) return std::nullopt;
        switch (s[i]) {
            case '\\': out.push_back('\\'); break;
            case 't': out.push_back('\t'); break;
            case 'n': out.push_back('\n'); break;
            case 'r': out.push_back('\r'); break;
            case ';': out.push_back(';'); break;
            case '|': out.push_back('|'); break;
            default: return std::nullopt;
        }
    }
    return out;
}

// Splits on `sep` where it is not escaped. Components stay escaped.
std::vector<std::string_view> split_unescaped(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\') {
            ++i;
            continue;
        }
        if (s[i] == sep) {
            parts.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    parts.push_back(s.substr(start));
    return parts;
}

std::string opt_int_field(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string(); }

struct ParsedLine {
    std::optional<PaperRecord> record;
    std::string error;
};

std::optional<PaperRecord> parse_line(std::string_view line, InputFormat format, std::string* error) {
    return format == InputFormat::json_lines ? parse_json_record(line, error) : parse_tsv_record(line, error);
}

bool is_blank(std::string_view line) { return text::count_tokens(line) == 0; }

}  // namespace

InputFormat parse_input_format(std::string_view name) {
    if (name == "json-lines" || name == "jsonl") return InputFormat::json_lines;
    if (name == "tsv") return InputFormat::tsv;
    throw UsageError("unknown input format '" + std::string(name) + "' (expected json-lines or tsv)");
}

std::string normalize_venue(std::string_view raw) {
    std::string s = text::collapse_whitespace(raw);
    for (;;) {
        std::string stripped(text::strip_punct(s));
        std::string collapsed = text::collapse_whitespace(stripped);
        if (collapsed == s) break;
        s = std::move(collapsed);
    }
    return text::ascii_lower(s);
}

std::optional<AuthorRef> normalize_author(std::string_view author_id, std::string_view name) {
    AuthorRef a;
    a.author_id = std::string(author_id);
    a.name = text::ascii_lower(text::collapse_whitespace(name));
    if (a.author_id.empty() && a.name.empty()) return std::nullopt;
    return a;
}

std::optional<PaperRecord> parse_json_record(std::string_view line, std::string* error) {
    auto fail = [error](const char* why) -> std::optional<PaperRecord> {
        if (error) *error = why;
        return std::nullopt;
    };
    json j = json::parse(line.begin(), line.end(), nullptr, false);
    if (j.is_discarded()) return fail("invalid JSON");
    if (!j.is_object()) return fail("record is not a JSON object");

    PaperRecord p;
    const json* v = member(j, "id");
    if (!v) return fail("missing id");
    auto id = json_id(*v);
    if (!id || id->empty()) return fail("bad id");
    p.id = std::move(*id);

    if ((v = member(j, "title"))) {
        if (!v->is_string()) return fail("title is not a string");
        p.title = v->get<std::string>();
    }
    if ((v = member(j, "abstract"))) {
        if (!v->is_string()) return fail("abstract is not a string");
        if (!v->get_ref<const std::string&>().empty()) p.abstract = v->get<std::string>();
    }
    if ((v = member(j, "year"))) {
        auto y = json_int(*v);
        if (!y || *y <= 0 || *y > 100000) return fail("bad year");
        p.year = static_cast<int>(*y);
    }
    if ((v = member(j, "venue"))) {
        const json* raw = v;
        if (v->is_object()) raw = member(*v, "raw");
        if (raw) {
            if (!raw->is_string()) return fail("venue is not a string");
            std::string venue = normalize_venue(raw->get_ref<const std::string&>());
            if (!venue.empty()) p.venue = std::move(venue);
        }
    }
    if ((v = member(j, "authors"))) {
        if (!v->is_array()) return fail("authors is not a list");
        for (const json& a : *v) {
            std::string aid, name;
            if (a.is_string()) {
                name = a.get<std::string>();
            } else if (a.is_object()) {
                if (const json* x = member(a, "id")) {
                    auto s = json_id(*x);
                    if (!s) return fail("bad author id");
                    aid = std::move(*s);
                }
                if (const json* x = member(a, "name")) {
                    if (!x->is_string()) return fail("author name is not a string");
                    name = x->get<std::string>();
                }
            } else {
                return fail("bad author entry");
            }
            auto ref = normalize_author(aid, name);
            if (!ref) return fail("author with neither id nor name");
            p.authors.push_back(std::move(*ref));
        }
    }
    if ((v = member(j, "references"))) {
        if (!v->is_array()) return fail("references is not a list");
        p.references.reserve(v->size());
        for (const json& r : *v) {
            auto s = json_id(r);
            if (!s) return fail("bad reference id");
            p.references.push_back(std::move(*s));
        }
    }
    if ((v = member(j, "n_citation"))) {
        auto c = json_int(*v);
        if (!c || *c < 0) return fail("bad n_citation");
        p.citation_count = *c;
    }
    // Page fields are noisy in real dumps ("e123", ""): unparseable means absent.
    if ((v = member(j, "page_start"))) p.page_start = json_int(*v);
    if ((v = member(j, "page_end"))) p.page_end = json_int(*v);
    return finish(std::move(p), error);
}

std::optional<PaperRecord> parse_tsv_record(std::string_view line, std::string* error) {
    auto fail = [error](const char* why) -> std::optional<PaperRecord> {
        if (error) *error = why;
        return std::nullopt;
    };
    std::vector<std::string_view> f;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == '\t') {
            f.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    if (f.size() != 10) return fail("expected 10 tab-separated fields");

    PaperRecord p;
    auto id = unescape(f[0]);
    if (!id || id->empty()) return fail("bad id");
    p.id = std::move(*id);
    auto title = unescape(f[1]);
    if (!title) return fail("bad escape in title");
    p.title = std::move(*title);
    if (!f[2].empty()) {
        auto abs = unescape(f[2]);
        if (!abs) return fail("bad escape in abstract");
        p.abstract = std::move(*abs);
    }
    if (!f[3].empty()) {
        auto y = parse_int(f[3]);
        if (!y || *y <= 0 || *y > 100000) return fail("bad year");
        p.year = static_cast<int>(*y);
    }
    if (!f[4].empty()) {
        auto venue = unescape(f[4]);
        if (!venue) return fail("bad escape in venue");
        std::string norm = normalize_venue(*venue);
        if (!norm.empty()) p.venue = std::move(norm);
    }
    if (!f[5].empty()) {
        for (std::string_view entry : split_unescaped(f[5], ';')) {
            auto parts = split_unescaped(entry, '|');
            if (parts.size() > 2) return fail("bad author entry");
            auto aid = unescape(parts.size() == 2 ? parts[0] : std::string_view{});
            auto name = unescape(parts.size() == 2 ? parts[1] : parts[0]);
            if (!aid || !name) return fail("bad escape in authors");
            auto ref = normalize_author(*aid, *name);
            if (!ref) return fail("author with neither id nor name");
            p.authors.push_back(std::move(*ref));
        }
    }
    if (!f[6].empty()) {
        for (std::string_view r : split_unescaped(f[6], ';')) {
            auto s = unescape(r);
            if (!s) return fail("bad escape in references");
            p.references.push_back(std::move(*s));
        }
    }
    if (!f[7].empty()) {
        auto c = parse_int(f[7]);
        if (!c || *c < 0) return fail("bad n_citation");
        p.citation_count = *c;
    }
    if (!f[8].empty()) p.page_start = parse_int(f[8]);
    if (!f[9].empty()) p.page_end = parse_int(f[9]);
    return finish(std::move(p), error);
}

std::string to_json_line(const PaperRecord& p) {
    nlohmann::ordered_json j;
    j["id"] = p.id;
    j["title"] = p.title;
    if (p.abstract) j["abstract"] = *p.abstract;
    if (p.year) j["year"] = *p.year;
    if (p.venue) j["venue"] = *p.venue;
    j["authors"] = nlohmann::ordered_json::array();
    for (const auto& a : p.authors) {
        nlohmann::ordered_json aj;
        if (!a.author_id.empty()) aj["id"] = a.author_id;
        aj["name"] = a.name;
        j["authors"].push_back(std::move(aj));
    }
    j["references"] = p.references;
    if (p.citation_count) j["n_citation"] = *p.citation_count;
    if (p.page_start) j["page_start"] = *p.page_start;
    if (p.page_end) j["page_end"] = *p.page_end;
    return j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

std::string to_tsv_line(const PaperRecord& p) {
    std::string out;
    out += escape(p.id);
    out += '\t';
    out += escape(p.title);
    out += '\t';
    if (p.abstract) out += escape(*p.abstract);
    out += '\t';
    if (p.year) out += std::to_string(*p.year);
    out += '\t';
    if (p.venue) out += escape(*p.venue);
    out += '\t';
    for (std::size_t i = 0; i < p.authors.size(); ++i) {
        if (i) out += ';';
        out += escape(p.authors[i].author_id);
        out += '|';
        out += escape(p.authors[i].name);
    }
    out += '\t';
    for (std::size_t i = 0; i < p.references.size(); ++i) {
        if (i) out += ';';
        out += escape(p.references[i]);
    }
    out += '\t';
    out += opt_int_field(p.citation_count);
    out += '\t';
    out += opt_int_field(p.page_start);
    out += '\t';
    out += opt_int_field(p.page_end);
    return out;
}

void write_corpus(std::ostream& out, const Corpus& corpus, InputFormat format) {
    if (format == InputFormat::tsv) out << kTsvHeader << '\n';
    for (const auto& p : corpus.papers()) out << (format == InputFormat::tsv ? to_tsv_line(p) : to_json_line(p)) << '\n';
}

IngestResult parse_corpus(std::istream& in, InputFormat format, unsigned threads) {
    IngestStats stats;
    std::vector<PaperRecord> records;
    std::unordered_set<std::string> seen;
    std::vector<std::string> lines;
    std::vector<std::size_t> line_numbers;
    std::vector<ParsedLine> parsed;
    std::size_t line_no = 0;
    bool first_content_line = true;
    std::string line;

    for (;;) {
        lines.clear();
        line_numbers.clear();
        while (lines.size() < kBatchLines && std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (is_blank(line)) continue;
            if (first_content_line) {
                first_content_line = false;
                if (format == InputFormat::tsv && line == kTsvHeader) continue;
            }
            lines.push_back(std::move(line));
            line_numbers.push_back(line_no);
        }
        if (lines.empty()) break;

        parsed.assign(lines.size(), ParsedLine{});
        parallel_for(lines.size(), threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i)
                parsed[i].record = parse_line(lines[i], format, &parsed[i].error);
        });

        for (std::size_t i = 0; i < parsed.size(); ++i) {
            ++stats.lines;
            std::string why;
            if (!parsed[i].record) {
                why = parsed[i].error;
            } else if (!seen.insert(parsed[i].record->id).second) {
                ++stats.duplicates;
                why = "duplicate id '" + parsed[i].record->id + "'";
            } else {
                records.push_back(std::move(*parsed[i].record));
                continue;
            }
            ++stats.malformed;
            if (stats.sample_errors.size() < kMaxSampleErrors)
                stats.sample_errors.push_back("line " + std::to_string(line_numbers[i]) + ": " + why);
        }
    }
    if (in.bad()) throw IoError("read error while ingesting corpus");
    if (stats.malformed * 2 > stats.lines)
        throw FormatError(std::to_string(stats.malformed) + " of " + std::to_string(stats.lines) +
                          " lines are malformed; is the input format right?" +
                          (stats.sample_errors.empty() ? "" : " first: " + stats.sample_errors.front()));
    stats.records = records.size();
    seen = {};
    return IngestResult{Corpus(std::move(records)), std::move(stats)};
}

IngestResult parse_corpus(const std::filesystem::path& path, InputFormat format, unsigned threads) {
    std::error_code ec;
    if (std::filesystem::is_directory(path, ec)) throw IoError(path.string() + " is a directory");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_corpus(in, format, threads);
}

}  // namespace twinscope
