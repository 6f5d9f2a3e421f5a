#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace snapcorpus::rank {

struct RunEntry {
    std::string query_id;
    std::string doc_id;
    int rank = 0;
    double score = 0.0;
    std::string tag;

    bool operator==(const RunEntry&) const = default;
};

struct QrelEntry {
    std::string query_id;
    std::string doc_id;
    int relevance = 0;

    bool operator==(const QrelEntry&) const = default;
};

/// "qid Q0 docid rank score tag" with the score at 6 significant digits.
std::string format_run_line(const RunEntry& e);
/// "qid 0 docid rel".
std::string format_qrel_line(const QrelEntry& e);

/// Parsers throw LineError for malformed rows and duplicate (qid, docid) pairs.
std::vector<RunEntry> parse_run(std::string_view text);
std::vector<QrelEntry> parse_qrels(std::string_view text);

void write_run(const std::vector<RunEntry>& run, const std::filesystem::path& path);
std::vector<RunEntry> read_run(const std::filesystem::path& path);
void write_qrels(const std::vector<QrelEntry>& qrels, const std::filesystem::path& path);
std::vector<QrelEntry> read_qrels(const std::filesystem::path& path);

}  // namespace snapcorpus::rank
