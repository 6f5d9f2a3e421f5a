#include "snapcorpus/common/gzip.hpp"

#include <zlib.h>

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "snapcorpus/common/error.hpp"

namespace snapcorpus::gzip {

std::string compress(std::string_view data, int level)
{
    z_stream zs{};
    // 15 window bits + 16 selects the gzip wrapper with a zeroed header.
    if (deflateInit2(&zs, level, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
        throw std::runtime_error("deflateInit2 failed");
    }
    std::string out;
    out.resize(deflateBound(&zs, static_cast<uLong>(data.size())) + 32);
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = deflate(&zs, Z_FINISH);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) {
        throw std::runtime_error("deflate did not finish");
    }
    out.resize(zs.total_out);
    return out;
}

std::string decompress(std::string_view data)
{
    std::string out;
    std::array<char, 1 << 16> buf{};
    std::size_t pos = 0;
    while (pos < data.size()) {
        z_stream zs{};
        if (inflateInit2(&zs, 15 + 16) != Z_OK) {
            throw std::runtime_error("inflateInit2 failed");
        }
        zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data() + pos));
        zs.avail_in = static_cast<uInt>(data.size() - pos);
        int rc = Z_OK;
        while (rc != Z_STREAM_END) {
            zs.next_out = reinterpret_cast<Bytef*>(buf.data());
            zs.avail_out = static_cast<uInt>(buf.size());
            rc = inflate(&zs, Z_NO_FLUSH);
            if (rc != Z_OK && rc != Z_STREAM_END) {
                inflateEnd(&zs);
                throw DataError("corrupt gzip stream");
            }
            out.append(buf.data(), buf.size() - zs.avail_out);
            if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
                inflateEnd(&zs);
                throw DataError("truncated gzip stream");
            }
        }
        pos += zs.total_in;
        inflateEnd(&zs);
    }
    return out;
}

bool has_gzip_magic(std::string_view data)
{
    return data.size() >= 2 && static_cast<unsigned char>(data[0]) == 0x1f &&
           static_cast<unsigned char>(data[1]) == 0x8b;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string raw = std::move(ss).str();
    if (has_gzip_magic(raw)) {
        return decompress(raw);
    }
    return raw;
}

std::size_t for_each_line(const std::filesystem::path& path,
                          const std::function<void(std::string_view)>& fn)
{
    gzFile f = gzopen(path.c_str(), "rb");
    if (f == nullptr) {
        throw DataError("cannot open " + path.string());
    }
    gzbuffer(f, 1 << 17);
    std::size_t lines = 0;
    std::string line;
    std::array<char, 1 << 16> chunk{};
    bool pending = false;
    while (gzgets(f, chunk.data(), static_cast<int>(chunk.size())) != nullptr) {
        std::string_view piece(chunk.data());
        line.append(piece);
        pending = true;
        if (!line.empty() && line.back() == '\n') {
            line.pop_back();
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            fn(line);
            ++lines;
            line.clear();
            pending = false;
        }
    }
    int err = 0;
    gzerror(f, &err);
    gzclose(f);
    if (err != Z_OK && err != Z_STREAM_END) {
        throw DataError("read error in " + path.string());
    }
    if (pending) {
        fn(line);
        ++lines;
    }
    return lines;
}

}  // namespace snapcorpus::gzip
