#include "twinscope/text.hpp"

namespace twinscope::text {
namespace {

struct Decoded {
    char32_t cp;
    std::size_t len;
};

bool is_cont(unsigned char c) noexcept { return (c & 0xC0) == 0x80; }

Decoded decode(std::string_view s, std::size_t i) noexcept {
    auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t n = s.size();
    if (b0 < 0x80) return {b0, 1};
    if ((b0 >> 5) == 0x6 && i + 1 < n && is_cont(s[i + 1]))
        return {static_cast<char32_t>(((b0 & 0x1F) << 6) | (s[i + 1] & 0x3F)), 2};
    if ((b0 >> 4) == 0xE && i + 2 < n && is_cont(s[i + 1]) && is_cont(s[i + 2]))
        return {static_cast<char32_t>(((b0 & 0x0F) << 12) | ((s[i + 1] & 0x3F) << 6) | (s[i + 2] & 0x3F)), 3};
    if ((b0 >> 3) == 0x1E && i + 3 < n && is_cont(s[i + 1]) && is_cont(s[i + 2]) && is_cont(s[i + 3]))
        return {static_cast<char32_t>(((b0 & 0x07) << 18) | ((s[i + 1] & 0x3F) << 12) | ((s[i + 2] & 0x3F) << 6) |
                                      (s[i + 3] & 0x3F)),
                4};
    return {0xFFFD, 1};
}

}  // namespace

bool is_unicode_space(char32_t cp) noexcept {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    std::size_t start = std::string_view::npos;
    while (i < s.size()) {
        Decoded d = decode(s, i);
        if (is_unicode_space(d.cp)) {
            if (start != std::string_view::npos) {
                out.push_back(s.substr(start, i - start));
                start = std::string_view::npos;
            }
        } else if (start == std::string_view::npos) {
            start = i;
        }
        i += d.len;
    }
    if (start != std::string_view::npos) out.push_back(s.substr(start));
    return out;
}

std::size_t count_tokens(std::string_view s) {
    std::size_t count = 0;
    bool in_token = false;
    for (std::size_t i = 0; i < s.size();) {
        Decoded d = decode(s, i);
        bool space = is_unicode_space(d.cp);
        if (!space && !in_token) ++count;
        in_token = !space;
        i += d.len;
    }
    return count;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

bool is_ascii_punct(char c) noexcept {
    return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
}

std::string_view strip_punct(std::string_view s) noexcept {
    while (!s.empty() && is_ascii_punct(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_ascii_punct(s.back())) s.remove_suffix(1);
    return s;
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::string_view tok : split_whitespace(s)) {
        if (!out.empty()) out.push_back(' ');
        out.append(tok);
    }
    return out;
}

std::vector<std::string> bag_tokens(std::string_view s) {
    std::vector<std::string> out;
    for (std::string_view tok : split_whitespace(s)) {
        std::string_view core = strip_punct(tok);
        if (!core.empty()) out.push_back(ascii_lower(core));
    }
    return out;
}

}  // namespace twinscope::text
