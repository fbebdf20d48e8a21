#pragma once

#include <cstdint>
#include <string_view>

namespace arena {

// Streaming FNV-1a 64. Used for state hashes and replay checksums.
class Fnv64 {
  public:
    void update(std::string_view bytes) {
        for (unsigned char ch : bytes) {
            h_ ^= ch;
            h_ *= 0x100000001b3ULL;
        }
    }

    void update_u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h_ ^= static_cast<unsigned char>(v >> (8 * i));
            h_ *= 0x100000001b3ULL;
        }
    }

    std::uint64_t digest() const { return h_; }

  private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv64(std::string_view bytes) {
    Fnv64 h;
    h.update(bytes);
    return h.digest();
}

}  // namespace arena
