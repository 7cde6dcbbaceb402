#include "twinscope/hash.hpp"

#include <array>
#include <fstream>

#include "twinscope/error.hpp"

namespace twinscope {

void Fnv1a64::update(const void* data, std::size_t n) noexcept {
    auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = state_;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    state_ = h;
}

void Fnv1a64::update(std::string_view bytes) noexcept { update(bytes.data(), bytes.size()); }

std::string Fnv1a64::hex() const { return to_hex(state_); }

std::string to_hex(std::uint64_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

std::string file_fingerprint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    Fnv1a64 h;
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    if (in.bad()) throw IoError("read failed: " + path.string());
    return h.hex();
}

}  // namespace twinscope
