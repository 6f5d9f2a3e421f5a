#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "snapcorpus/extract/tokenize.hpp"

namespace snapcorpus::rank {

using extract::TokenSeq;

struct Posting {
    std::uint32_t doc;  // position in doc_ids()
    std::uint32_t tf;

    bool operator==(const Posting& o) const { return doc == o.doc && tf == o.tf; }
};

/// Immutable term -> postings index. Documents are numbered in doc_id order so
/// postings lists are sorted by doc_id.
class InvertedIndex {
  public:
    InvertedIndex() = default;

    std::size_t doc_count() const { return doc_ids_.size(); }
    double avg_doc_length() const;
    std::uint64_t total_tokens() const { return total_tokens_; }

    const std::vector<std::string>& doc_ids() const { return doc_ids_; }
    const std::vector<std::uint64_t>& doc_lengths() const { return lengths_; }
    const std::map<std::string, std::vector<Posting>>& postings() const { return postings_; }

    /// Position of doc_id, or -1 when absent.
    long find_doc(const std::string& doc_id) const;
    std::uint64_t doc_length(const std::string& doc_id) const;
    std::size_t df(const std::string& term) const;
    std::uint32_t tf(const std::string& term, std::uint32_t doc) const;
    const std::vector<Posting>* postings_for(const std::string& term) const;

    void save(const std::filesystem::path& path) const;
    static InvertedIndex load(const std::filesystem::path& path);

    bool operator==(const InvertedIndex& o) const;

  private:
    friend InvertedIndex build_index(std::vector<std::pair<std::string, TokenSeq>> docs);
    friend InvertedIndex merge_indexes(const InvertedIndex& a, const InvertedIndex& b);

    std::vector<std::string> doc_ids_;
    std::vector<std::uint64_t> lengths_;
    std::map<std::string, std::vector<Posting>> postings_;
    std::uint64_t total_tokens_ = 0;
};

/// Throws DataError on a duplicate doc_id.
InvertedIndex build_index(std::vector<std::pair<std::string, TokenSeq>> docs);

/// Union of two indexes over disjoint document sets. Equal to a single build
/// over the combined documents.
InvertedIndex merge_indexes(const InvertedIndex& a, const InvertedIndex& b);

}  // namespace snapcorpus::rank
