#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace snapcorpus {

/// Lowercase hex MD5 digest (32 chars).
std::string md5_hex(std::string_view data);

/// Lowercase hex CRC-32 (8 chars, zero padded).
std::string crc32_hex(std::string_view data);

/// Incremental MD5 for hashing several files or strings into one digest.
class Md5Builder {
  public:
    Md5Builder();
    ~Md5Builder();
    Md5Builder(const Md5Builder&) = delete;
    Md5Builder& operator=(const Md5Builder&) = delete;

    Md5Builder& update(std::string_view data);
    std::string hex();

  private:
    void* m_ctx;
};

}  // namespace snapcorpus
