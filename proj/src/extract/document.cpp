#include "snapcorpus/extract/document.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/gzip.hpp"
#include "snapcorpus/common/text.hpp"

namespace snapcorpus::extract {

namespace {

std::string serialize(const DocumentRecord& d)
{
    return escape_tsv(d.doc_id) + '\t' + escape_tsv(d.url) + '\t' + escape_tsv(d.timestamp) + '\t' +
           escape_tsv(d.language) + '\t' + escape_tsv(d.title) + '\t' + escape_tsv(d.body) + '\n';
}

DocumentRecord deserialize(std::string_view line)
{
    auto f = split(line, '\t');
    if (f.size() != 6) {
        throw DataError("malformed document record");
    }
    return {unescape_tsv(f[0]), unescape_tsv(f[1]), unescape_tsv(f[4]),
            unescape_tsv(f[5]), unescape_tsv(f[2]), unescape_tsv(f[3])};
}

std::filesystem::path index_path(const std::filesystem::path& p)
{
    auto out = p;
    out += ".idx";
    return out;
}

std::filesystem::path tmp_path(const std::filesystem::path& p)
{
    auto out = p;
    out += ".tmp";
    return out;
}

}  // namespace

TokenSeq document_text(const DocumentRecord& d, bool include_url)
{
    auto tokens = tokenize(d.title);
    if (include_url) {
        auto u = tokenize_url(d.url);
        tokens.insert(tokens.end(), u.begin(), u.end());
    }
    return tokens;
}

DocStoreWriter::DocStoreWriter(std::filesystem::path path, std::size_t block_size)
    : m_path(std::move(path)), m_block_size(std::max<std::size_t>(1, block_size))
{
    if (m_path.has_parent_path()) {
        std::filesystem::create_directories(m_path.parent_path());
    }
    m_data.open(tmp_path(m_path), std::ios::binary | std::ios::trunc);
    m_index.open(tmp_path(index_path(m_path)), std::ios::binary | std::ios::trunc);
    if (!m_data || !m_index) {
        throw DataError("cannot create document store at " + m_path.string());
    }
}

DocStoreWriter::~DocStoreWriter()
{
    if (!m_finished) {
        m_data.close();
        m_index.close();
        std::error_code ec;
        std::filesystem::remove(tmp_path(m_path), ec);
        std::filesystem::remove(tmp_path(index_path(m_path)), ec);
    }
}

void DocStoreWriter::add(const DocumentRecord& d)
{
    if (!m_last_id.empty() && d.doc_id <= m_last_id) {
        throw DataError("document ids must be strictly ascending: '" + d.doc_id + "' after '" + m_last_id + "'");
    }
    if (d.doc_id.empty()) {
        throw DataError("empty document id");
    }
    m_last_id = d.doc_id;
    m_block.push_back(d);
    if (m_block.size() >= m_block_size) {
        flush_block();
    }
}

void DocStoreWriter::flush_block()
{
    if (m_block.empty()) {
        return;
    }
    std::string text;
    for (const auto& d : m_block) {
        text += serialize(d);
    }
    auto gz = gzip::compress(text);
    m_data.write(gz.data(), static_cast<std::streamsize>(gz.size()));
    for (const auto& d : m_block) {
        m_index << d.doc_id << '\t' << m_offset << '\t' << gz.size() << '\n';
    }
    m_offset += gz.size();
    m_block.clear();
}

void DocStoreWriter::finish()
{
    flush_block();
    m_data.close();
    m_index.close();
    if (!m_data || !m_index) {
        throw DataError("short write to document store " + m_path.string());
    }
    std::filesystem::rename(tmp_path(m_path), m_path);
    std::filesystem::rename(tmp_path(index_path(m_path)), index_path(m_path));
    m_finished = true;
}

DocStoreReader::DocStoreReader(std::filesystem::path path) : m_path(std::move(path))
{
    std::ifstream in(index_path(m_path));
    if (!in || !std::filesystem::exists(m_path)) {
        throw DataError("document store not found: " + m_path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto f = split(line, '\t');
        Entry e{};
        if (f.size() != 3 ||
            std::from_chars(f[1].data(), f[1].data() + f[1].size(), e.offset).ec != std::errc{} ||
            std::from_chars(f[2].data(), f[2].data() + f[2].size(), e.length).ec != std::errc{}) {
            throw LineError(line_no, "malformed document store index");
        }
        e.doc_id = std::string(f[0]);
        if (!m_index.empty() && e.doc_id <= m_index.back().doc_id) {
            throw LineError(line_no, "document store index out of order");
        }
        m_index.push_back(std::move(e));
    }
}

std::vector<DocumentRecord> DocStoreReader::read_block(std::uint64_t offset, std::uint64_t length) const
{
    std::ifstream in(m_path, std::ios::binary);
    in.seekg(static_cast<std::streamoff>(offset));
    std::string buf(length, '\0');
    in.read(buf.data(), static_cast<std::streamsize>(length));
    if (static_cast<std::uint64_t>(in.gcount()) != length) {
        throw DataError("document store truncated: " + m_path.string());
    }
    auto text = gzip::decompress(buf);
    std::vector<DocumentRecord> docs;
    for (auto line : split(text, '\n')) {
        if (!line.empty()) {
            docs.push_back(deserialize(line));
        }
    }
    return docs;
}

std::optional<DocumentRecord> DocStoreReader::lookup(const std::string& doc_id) const
{
    auto it = std::lower_bound(m_index.begin(), m_index.end(), doc_id,
                               [](const Entry& e, const std::string& id) { return e.doc_id < id; });
    if (it == m_index.end() || it->doc_id != doc_id) {
        return std::nullopt;
    }
    for (auto& d : read_block(it->offset, it->length)) {
        if (d.doc_id == doc_id) {
            return std::move(d);
        }
    }
    throw DataError("document store index points at a block without " + doc_id);
}

void DocStoreReader::scan(const std::function<void(const DocumentRecord&)>& fn) const
{
    std::size_t i = 0;
    while (i < m_index.size()) {
        auto offset = m_index[i].offset;
        auto block = read_block(offset, m_index[i].length);
        for (const auto& d : block) {
            fn(d);
        }
        while (i < m_index.size() && m_index[i].offset == offset) {
            ++i;
        }
    }
}

std::vector<std::string> DocStoreReader::ids() const
{
    std::vector<std::string> out;
    out.reserve(m_index.size());
    for (const auto& e : m_index) {
        out.push_back(e.doc_id);
    }
    return out;
}

void store_documents(std::vector<DocumentRecord> docs, const std::filesystem::path& path)
{
    std::sort(docs.begin(), docs.end(),
              [](const DocumentRecord& a, const DocumentRecord& b) { return a.doc_id < b.doc_id; });
    for (std::size_t i = 1; i < docs.size(); ++i) {
        if (docs[i].doc_id == docs[i - 1].doc_id) {
            throw DataError("duplicate document id " + docs[i].doc_id);
        }
    }
    DocStoreWriter w(path);
    for (const auto& d : docs) {
        w.add(d);
    }
    w.finish();
}

std::vector<DocumentRecord> load_documents(const std::filesystem::path& path)
{
    std::vector<DocumentRecord> out;
    DocStoreReader(path).scan([&](const DocumentRecord& d) { out.push_back(d); });
    return out;
}

void export_titles(const DocStoreReader& store, const std::filesystem::path& path)
{
    std::string text;
    store.scan([&](const DocumentRecord& d) {
        text += escape_tsv(d.doc_id) + '\t' + escape_tsv(d.title) + '\t' + escape_tsv(d.url) + '\n';
    });
    write_file_atomic(path.string(), text);
}

std::vector<TitleRow> read_title_export(const std::filesystem::path& path)
{
    std::vector<TitleRow> rows;
    auto text = gzip::read_file(path);
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto f = split(line, '\t');
        if (f.size() != 3) {
            throw LineError(line_no, "title export rows need doc_id, title and url");
        }
        rows.push_back({unescape_tsv(f[0]), unescape_tsv(f[1]), unescape_tsv(f[2])});
    }
    return rows;
}

}  // namespace snapcorpus::extract
