#include "snapcorpus/archive/mapping.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/gzip.hpp"
#include "snapcorpus/common/text.hpp"
#include "snapcorpus/common/timestamp.hpp"

namespace snapcorpus::archive {

std::string encode_mapping(std::vector<ArchiveMapping> rows)
{
    std::sort(rows.begin(), rows.end());
    std::string dups;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].doc_id == rows[i - 1].doc_id) {
            dups += " " + rows[i].doc_id + ": " + rows[i - 1].original_url + " | " + rows[i].original_url;
        }
    }
    if (!dups.empty()) {
        throw DataError("duplicate doc_id in mapping:" + dups);
    }
    std::string text;
    for (const auto& r : rows) {
        for (const auto* field : {&r.doc_id, &r.original_url, &r.timestamp, &r.archive_url}) {
            if (field->find_first_of("\t\n") != std::string::npos) {
                throw DataError("mapping field contains tab or newline: " + *field);
            }
        }
        text += r.doc_id + '\t' + r.original_url + '\t' + r.timestamp + '\t' + r.archive_url + '\n';
    }
    return gzip::compress(text, 9);
}

std::vector<ArchiveMapping> decode_mapping(std::string_view bytes)
{
    std::string text = gzip::has_gzip_magic(bytes) ? gzip::decompress(bytes) : std::string(bytes);
    std::vector<ArchiveMapping> rows;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto f = split(line, '\t');
        if (f.size() != 4 || f[0].empty() || f[1].empty() || !parse_ts14(f[2])) {
            throw LineError(line_no, "malformed mapping row");
        }
        rows.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2]), std::string(f[3])});
    }
    return rows;
}

void write_mapping(const std::vector<ArchiveMapping>& rows, const std::filesystem::path& path)
{
    write_file_atomic(path.string(), encode_mapping(rows));
}

std::vector<ArchiveMapping> read_mapping(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open mapping " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return decode_mapping(ss.str());
}

}  // namespace snapcorpus::archive
