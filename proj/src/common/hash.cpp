#include "snapcorpus/common/hash.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <array>
#include <cstdio>
#include <stdexcept>

namespace snapcorpus {

namespace {

std::string to_hex(const unsigned char* bytes, std::size_t n)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(n * 2, '0');
    for (std::size_t i = 0; i < n; ++i) {
        out[2 * i] = digits[bytes[i] >> 4];
        out[2 * i + 1] = digits[bytes[i] & 0xf];
    }
    return out;
}

}  // namespace

std::string md5_hex(std::string_view data)
{
    Md5Builder b;
    b.update(data);
    return b.hex();
}

std::string crc32_hex(std::string_view data)
{
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
    std::array<char, 9> buf{};
    std::snprintf(buf.data(), buf.size(), "%08lx", static_cast<unsigned long>(crc));
    return buf.data();
}

Md5Builder::Md5Builder() : m_ctx(EVP_MD_CTX_new())
{
    auto* ctx = static_cast<EVP_MD_CTX*>(m_ctx);
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_md5(), nullptr) != 1) {
        throw std::runtime_error("md5 init failed");
    }
}

Md5Builder::~Md5Builder() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(m_ctx)); }

Md5Builder& Md5Builder::update(std::string_view data)
{
    EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(m_ctx), data.data(), data.size());
    return *this;
}

std::string Md5Builder::hex()
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(m_ctx), digest.data(), &len);
    EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(m_ctx), EVP_md5(), nullptr);
    return to_hex(digest.data(), len);
}

}  // namespace snapcorpus
