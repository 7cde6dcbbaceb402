#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace twinscope {

// 64-bit FNV-1a. Used for content fingerprints, not for security.
class Fnv1a64 {
public:
    void update(std::string_view bytes) noexcept;
    void update(const void* data, std::size_t n) noexcept;
    std::uint64_t value() const noexcept { return state_; }
    std::string hex() const;

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string to_hex(std::uint64_t v);

// Content hash of a file; throws IoError if unreadable.
std::string file_fingerprint(const std::filesystem::path& path);

}  // namespace twinscope
