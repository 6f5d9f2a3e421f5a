#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "../support/oracles.hpp"
#include "snapcorpus/common/error.hpp"
#include "snapcorpus/rank/bm25.hpp"

using namespace snapcorpus;
using namespace snapcorpus::rank;
namespace fs = std::filesystem;

namespace {

std::vector<std::pair<std::string, TokenSeq>> random_docs(std::mt19937& rng, std::size_t n, const std::string& prefix)
{
    std::vector<std::pair<std::string, TokenSeq>> docs;
    for (std::size_t i = 0; i < n; ++i) {
        TokenSeq t;
        for (auto k = rng() % 12; k > 0; --k) {
            t.push_back("t" + std::to_string(rng() % 40));
        }
        docs.emplace_back(prefix + std::to_string(i), t);
    }
    return docs;
}

std::map<std::string, std::vector<std::string>> as_map(const std::vector<std::pair<std::string, TokenSeq>>& docs)
{
    return {docs.begin(), docs.end()};
}

}  // namespace

TEST(BuildIndex, Counting)
{
    auto idx = build_index({{"d2", {"b", "b"}}, {"d1", {"a", "b"}}});
    EXPECT_EQ(idx.doc_count(), 2u);
    EXPECT_EQ(idx.df("a"), 1u);
    EXPECT_EQ(idx.df("b"), 2u);
    EXPECT_EQ(idx.tf("b", static_cast<std::uint32_t>(idx.find_doc("d2"))), 2u);
    EXPECT_DOUBLE_EQ(idx.avg_doc_length(), 2.0);
    EXPECT_EQ(idx.doc_ids(), (std::vector<std::string>{"d1", "d2"}));

    auto empty = build_index({});
    EXPECT_EQ(empty.doc_count(), 0u);
    EXPECT_DOUBLE_EQ(empty.avg_doc_length(), 0.0);
    EXPECT_THROW(build_index({{"x", {}}, {"x", {"a"}}}), DataError);
}

TEST(BuildIndex, InvariantsAndShardedBuild)
{
    std::mt19937 rng(17);
    auto docs = random_docs(rng, 1000, "doc");
    auto whole = build_index(docs);
    std::uint64_t tf_sum = 0;
    for (const auto& [term, list] : whole.postings()) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            tf_sum += list[i].tf;
            if (i > 0) {
                ASSERT_LT(list[i - 1].doc, list[i].doc);
            }
        }
    }
    std::uint64_t len_sum = 0;
    for (auto l : whole.doc_lengths()) {
        len_sum += l;
    }
    EXPECT_EQ(tf_sum, len_sum);
    EXPECT_EQ(whole.doc_count(), whole.doc_lengths().size());

    std::shuffle(docs.begin(), docs.end(), rng);
    InvertedIndex merged;
    for (std::size_t s = 0; s < 4; ++s) {
        std::vector<std::pair<std::string, TokenSeq>> shard(docs.begin() + s * 250, docs.begin() + (s + 1) * 250);
        merged = merge_indexes(merged, build_index(shard));
    }
    EXPECT_TRUE(merged == whole);
    EXPECT_THROW(merge_indexes(whole, build_index({{"doc1", {}}})), DataError);
}

TEST(IndexFile, RoundTripAndValidation)
{
    std::mt19937 rng(2);
    auto idx = build_index(random_docs(rng, 50, "d"));
    auto path = fs::temp_directory_path() / "snapcorpus_test.idx";
    idx.save(path);
    EXPECT_TRUE(InvertedIndex::load(path) == idx);

    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    // Explicit little-endian version field right after the 8-byte magic.
    EXPECT_EQ(bytes.substr(8, 8), std::string("\x01\0\0\0\0\0\0\0", 8));

    std::ofstream(path, std::ios::binary) << bytes.substr(0, bytes.size() - 3);
    EXPECT_THROW(InvertedIndex::load(path), DataError);
    std::ofstream(path, std::ios::binary) << "not an index at all";
    EXPECT_THROW(InvertedIndex::load(path), DataError);
    fs::remove(path);
}

TEST(Bm25, IdfFloorAndMissingTerms)
{
    EXPECT_DOUBLE_EQ(bm25_idf(3, 2), 0.0);  // ln(1.5 / 2.5) < 0
    EXPECT_NEAR(bm25_idf(3, 1), std::log(2.5 / 1.5), 1e-15);
    auto idx = build_index({{"d1", {"jaguar", "car"}}, {"d2", {"jaguar", "jaguar", "speed"}}, {"d3", {"lion"}}});
    EXPECT_DOUBLE_EQ(bm25_score({"zebra"}, "d1", idx), 0.0);
    EXPECT_DOUBLE_EQ(bm25_score({}, "d1", idx), 0.0);
    EXPECT_THROW(bm25_score({"jaguar"}, "d9", idx), DataError);
    // jaguar occurs in 2 of 3 documents, so its idf is floored to 0 and the
    // three documents tie; the tie rule orders them by doc id descending.
    for (const auto* d : {"d1", "d2", "d3"}) {
        EXPECT_DOUBLE_EQ(bm25_score({"jaguar"}, d, idx), 0.0);
    }
    auto run = rerank("q", {"jaguar"}, {"d1", "d2", "d3"}, idx);
    EXPECT_EQ(run[0].doc_id, "d3");
    EXPECT_EQ(run[2].doc_id, "d1");
}

TEST(Bm25, HandDerivedScores)
{
    // N = 5, jaguar in d1 and d2 only: idf = ln(3.5 / 2.5).
    std::vector<std::pair<std::string, TokenSeq>> docs = {
        {"d1", {"jaguar", "car"}},
        {"d2", {"jaguar", "jaguar", "speed"}},
        {"d3", {"lion"}},
        {"d4", {"car", "dealer"}},
        {"d5", {"zoo", "cat", "lion"}},
    };
    auto idx = build_index(docs);
    const double idf = std::log(3.5 / 2.5);
    const double avg = 11.0 / 5.0;
    const double s1 = idf * 1 * 2.2 / (1 + 1.2 * (0.25 + 0.75 * 2 / avg));
    const double s2 = idf * 2 * 2.2 / (2 + 1.2 * (0.25 + 0.75 * 3 / avg));
    EXPECT_NEAR(bm25_score({"jaguar"}, "d1", idx), s1, 1e-12);
    EXPECT_NEAR(bm25_score({"jaguar"}, "d2", idx), s2, 1e-12);
    EXPECT_DOUBLE_EQ(bm25_score({"jaguar"}, "d3", idx), 0.0);
    // Repeated query terms count once.
    EXPECT_DOUBLE_EQ(bm25_score({"jaguar", "jaguar"}, "d2", idx), bm25_score({"jaguar"}, "d2", idx));

    auto run = rerank("q", {"jaguar"}, {"d1", "d2", "d3"}, idx);
    ASSERT_EQ(run.size(), 3u);
    EXPECT_EQ(run[0].doc_id, "d2");
    EXPECT_EQ(run[1].doc_id, "d1");
    EXPECT_EQ(run[2].doc_id, "d3");
    EXPECT_EQ(run[2].rank, 3);
}

TEST(Bm25, MatchesBruteForceFormula)
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        auto docs = random_docs(rng, 2 + rng() % 30, "d");
        auto idx = build_index(docs);
        auto m = as_map(docs);
        TokenSeq q;
        for (auto k = 1 + rng() % 4; k > 0; --k) {
            q.push_back("t" + std::to_string(rng() % 40));
        }
        for (const auto& [id, toks] : docs) {
            EXPECT_NEAR(bm25_score(q, id, idx), oracle::bm25(q, m, id), 1e-9);
        }
        auto top = retrieve(q, idx, 5);
        for (const auto& [id, s] : top) {
            EXPECT_DOUBLE_EQ(s, bm25_score(q, id, idx));
        }
    }
}

TEST(Bm25, SingleTermMonotonicity)
{
    std::mt19937 rng(6);
    for (int trial = 0; trial < 500; ++trial) {
        auto docs = random_docs(rng, 2 + rng() % 10, "d");
        std::string term = "t" + std::to_string(rng() % 40);
        auto target = rng() % docs.size();
        auto before = bm25_score({term}, docs[target].first, build_index(docs));
        docs[target].second.push_back(term);
        auto after = bm25_score({term}, docs[target].first, build_index(docs));
        EXPECT_GE(after, before - 1e-12);
    }
}

// Holds for single-term queries: the order depends only on tf / length,
// which doubling every document leaves unchanged.
TEST(Bm25, UniformLengthScalingKeepsRanking)
{
    std::mt19937 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        auto docs = random_docs(rng, 3 + rng() % 10, "d");
        TokenSeq q = {"t" + std::to_string(rng() % 40)};
        std::vector<std::string> ids;
        for (const auto& d : docs) {
            ids.push_back(d.first);
        }
        auto before = rerank("q", q, ids, build_index(docs));
        for (auto& d : docs) {
            auto copy = d.second;
            d.second.insert(d.second.end(), copy.begin(), copy.end());
        }
        auto after = rerank("q", q, ids, build_index(docs));
        for (std::size_t i = 0; i < before.size(); ++i) {
            EXPECT_EQ(before[i].doc_id, after[i].doc_id);
        }
    }
}

TEST(Rerank, TieRuleAndEdgeCases)
{
    auto idx = build_index({{"d1", {"x"}}, {"d2", {"x"}}, {"d3", {"y"}}});
    auto run = rerank("q", {"z"}, {"d1", "d2"}, idx);
    EXPECT_EQ(run[0].doc_id, "d2");
    EXPECT_TRUE(rerank("q", {"x"}, {}, idx).empty());
    auto single = rerank("q", {"x"}, {"d3"}, idx);
    ASSERT_EQ(single.size(), 1u);
    EXPECT_EQ(single[0].rank, 1);
    EXPECT_THROW(rerank("q", {"x"}, {"d9"}, idx), DataError);
}

TEST(Bm25Params, Validation)
{
    EXPECT_NO_THROW(Bm25Params{}.validate());
    EXPECT_THROW((Bm25Params{-1.0, 0.5}.validate()), DataError);
    EXPECT_THROW((Bm25Params{1.2, 1.5}.validate()), DataError);
    EXPECT_EQ(Bm25Params{}.tag(), "bm25-robertson-k1=1.2-b=0.75");
}
