#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "snapcorpus/extract/tokenize.hpp"

namespace snapcorpus::extract {

struct DocumentRecord {
    std::string doc_id;
    std::string url;
    std::string title;
    std::string body;
    std::string timestamp;
    std::string language;  // empty when unclassified

    bool operator==(const DocumentRecord&) const = default;
};

/// Title tokens, optionally followed by the tokenized URL.
TokenSeq document_text(const DocumentRecord& d, bool include_url);

/// Block-compressed record store: <path> holds one gzip member per block of
/// records in doc_id order, <path>.idx maps doc_id -> (block offset, block
/// length). Ids must be added in strictly ascending order.
class DocStoreWriter {
  public:
    explicit DocStoreWriter(std::filesystem::path path, std::size_t block_size = 128);
    ~DocStoreWriter();
    DocStoreWriter(const DocStoreWriter&) = delete;
    DocStoreWriter& operator=(const DocStoreWriter&) = delete;

    void add(const DocumentRecord& d);
    /// Flushes the last block and renames the files into place.
    void finish();

  private:
    void flush_block();

    std::filesystem::path m_path;
    std::size_t m_block_size;
    std::ofstream m_data;
    std::ofstream m_index;
    std::vector<DocumentRecord> m_block;
    std::uint64_t m_offset = 0;
    std::string m_last_id;
    bool m_finished = false;
};

class DocStoreReader {
  public:
    explicit DocStoreReader(std::filesystem::path path);

    std::size_t size() const noexcept { return m_index.size(); }

    /// nullopt when the id is absent; I/O and format problems throw DataError.
    std::optional<DocumentRecord> lookup(const std::string& doc_id) const;

    /// Visits every record in doc_id order.
    void scan(const std::function<void(const DocumentRecord&)>& fn) const;

    std::vector<std::string> ids() const;

  private:
    struct Entry {
        std::string doc_id;
        std::uint64_t offset;
        std::uint64_t length;
    };
    std::vector<DocumentRecord> read_block(std::uint64_t offset, std::uint64_t length) const;

    std::filesystem::path m_path;
    std::vector<Entry> m_index;
};

/// Sorts by doc_id and writes a store. Throws DataError on duplicate ids.
void store_documents(std::vector<DocumentRecord> docs, const std::filesystem::path& path);
std::vector<DocumentRecord> load_documents(const std::filesystem::path& path);

/// doc_id \t title \t url rows in doc_id order (tabs/newlines escaped).
void export_titles(const DocStoreReader& store, const std::filesystem::path& path);

struct TitleRow {
    std::string doc_id;
    std::string title;
    std::string url;
};
std::vector<TitleRow> read_title_export(const std::filesystem::path& path);

}  // namespace snapcorpus::extract
