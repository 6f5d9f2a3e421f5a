#include "snapcorpus/rank/index.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/text.hpp"

namespace snapcorpus::rank {

namespace {

constexpr char k_magic[8] = {'S', 'C', 'I', 'D', 'X', '\r', '\n', '\x1a'};
constexpr std::uint64_t k_version = 1;

void put_u64(std::string& out, std::uint64_t v)
{
    for (int i = 0; i < 8; ++i) {
        out += static_cast<char>((v >> (8 * i)) & 0xFF);
    }
}

void put_str(std::string& out, const std::string& s)
{
    put_u64(out, s.size());
    out += s;
}

class Reader {
  public:
    Reader(const std::string& data, const std::string& name) : data_(data), name_(name) {}

    std::uint64_t u64()
    {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        }
        pos_ += 8;
        return v;
    }

    std::string str()
    {
        auto n = u64();
        need(n);
        std::string s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    void expect(const char* bytes, std::size_t n)
    {
        need(n);
        if (std::memcmp(data_.data() + pos_, bytes, n) != 0) {
            throw DataError(name_ + " is not an index file (bad magic)");
        }
        pos_ += n;
    }

    bool done() const { return pos_ == data_.size(); }

  private:
    void need(std::uint64_t n) const
    {
        if (n > data_.size() - pos_) {
            throw DataError(name_ + " is truncated");
        }
    }

    const std::string& data_;
    std::string name_;
    std::size_t pos_ = 0;
};

std::uint32_t to_u32(std::uint64_t v, const char* what)
{
    if (v > std::numeric_limits<std::uint32_t>::max()) {
        throw DataError(std::string("index ") + what + " out of range");
    }
    return static_cast<std::uint32_t>(v);
}

}  // namespace

double InvertedIndex::avg_doc_length() const
{
    return doc_ids_.empty() ? 0.0 : static_cast<double>(total_tokens_) / static_cast<double>(doc_ids_.size());
}

long InvertedIndex::find_doc(const std::string& doc_id) const
{
    auto it = std::lower_bound(doc_ids_.begin(), doc_ids_.end(), doc_id);
    if (it == doc_ids_.end() || *it != doc_id) {
        return -1;
    }
    return it - doc_ids_.begin();
}

std::uint64_t InvertedIndex::doc_length(const std::string& doc_id) const
{
    auto i = find_doc(doc_id);
    if (i < 0) {
        throw DataError("document not in index: " + doc_id);
    }
    return lengths_[static_cast<std::size_t>(i)];
}

const std::vector<Posting>* InvertedIndex::postings_for(const std::string& term) const
{
    auto it = postings_.find(term);
    return it == postings_.end() ? nullptr : &it->second;
}

std::size_t InvertedIndex::df(const std::string& term) const
{
    const auto* p = postings_for(term);
    return p ? p->size() : 0;
}

std::uint32_t InvertedIndex::tf(const std::string& term, std::uint32_t doc) const
{
    const auto* p = postings_for(term);
    if (!p) {
        return 0;
    }
    auto it = std::lower_bound(p->begin(), p->end(), doc, [](const Posting& x, std::uint32_t d) { return x.doc < d; });
    return it != p->end() && it->doc == doc ? it->tf : 0;
}

bool InvertedIndex::operator==(const InvertedIndex& o) const
{
    return doc_ids_ == o.doc_ids_ && lengths_ == o.lengths_ && postings_ == o.postings_ &&
           total_tokens_ == o.total_tokens_;
}

InvertedIndex build_index(std::vector<std::pair<std::string, TokenSeq>> docs)
{
    std::sort(docs.begin(), docs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    InvertedIndex idx;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (i > 0 && docs[i].first == docs[i - 1].first) {
            throw DataError("duplicate doc_id in index input: " + docs[i].first);
        }
        auto doc = to_u32(i, "document count");
        idx.doc_ids_.push_back(docs[i].first);
        idx.lengths_.push_back(docs[i].second.size());
        idx.total_tokens_ += docs[i].second.size();
        std::map<std::string, std::uint32_t> tfs;
        for (const auto& t : docs[i].second) {
            ++tfs[t];
        }
        for (const auto& [term, tf] : tfs) {
            idx.postings_[term].push_back({doc, tf});
        }
    }
    return idx;
}

InvertedIndex merge_indexes(const InvertedIndex& a, const InvertedIndex& b)
{
    InvertedIndex out;
    std::vector<std::uint32_t> map_a(a.doc_ids_.size());
    std::vector<std::uint32_t> map_b(b.doc_ids_.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.doc_ids_.size() || j < b.doc_ids_.size()) {
        auto pos = to_u32(out.doc_ids_.size(), "document count");
        bool take_a = j == b.doc_ids_.size() || (i < a.doc_ids_.size() && a.doc_ids_[i] < b.doc_ids_[j]);
        if (!take_a && i < a.doc_ids_.size() && a.doc_ids_[i] == b.doc_ids_[j]) {
            throw DataError("duplicate doc_id across merged indexes: " + a.doc_ids_[i]);
        }
        if (take_a) {
            map_a[i] = pos;
            out.doc_ids_.push_back(a.doc_ids_[i]);
            out.lengths_.push_back(a.lengths_[i++]);
        } else {
            map_b[j] = pos;
            out.doc_ids_.push_back(b.doc_ids_[j]);
            out.lengths_.push_back(b.lengths_[j++]);
        }
    }
    out.total_tokens_ = a.total_tokens_ + b.total_tokens_;
    auto add = [&out](const InvertedIndex& src, const std::vector<std::uint32_t>& remap) {
        for (const auto& [term, list] : src.postings_) {
            auto& dst = out.postings_[term];
            for (const auto& p : list) {
                dst.push_back({remap[p.doc], p.tf});
            }
        }
    };
    add(a, map_a);
    add(b, map_b);
    for (auto& [term, list] : out.postings_) {
        std::sort(list.begin(), list.end(), [](const Posting& x, const Posting& y) { return x.doc < y.doc; });
    }
    return out;
}

void InvertedIndex::save(const std::filesystem::path& path) const
{
    std::string out(k_magic, sizeof k_magic);
    put_u64(out, k_version);
    put_u64(out, doc_ids_.size());
    for (std::size_t i = 0; i < doc_ids_.size(); ++i) {
        put_str(out, doc_ids_[i]);
        put_u64(out, lengths_[i]);
    }
    put_u64(out, postings_.size());
    for (const auto& [term, list] : postings_) {
        put_str(out, term);
        put_u64(out, list.size());
        for (const auto& p : list) {
            put_u64(out, p.doc);
            put_u64(out, p.tf);
        }
    }
    write_file_atomic(path, out);
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open index " + path.string());
    }
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Reader r(data, path.string());
    r.expect(k_magic, sizeof k_magic);
    auto version = r.u64();
    if (version != k_version) {
        throw DataError(path.string() + ": unsupported index version " + std::to_string(version));
    }
    InvertedIndex idx;
    auto n = r.u64();
    for (std::uint64_t i = 0; i < n; ++i) {
        idx.doc_ids_.push_back(r.str());
        idx.lengths_.push_back(r.u64());
        idx.total_tokens_ += idx.lengths_.back();
        if (i > 0 && !(idx.doc_ids_[i - 1] < idx.doc_ids_[i])) {
            throw DataError(path.string() + ": document ids out of order");
        }
    }
    auto terms = r.u64();
    for (std::uint64_t t = 0; t < terms; ++t) {
        auto term = r.str();
        auto count = r.u64();
        auto& list = idx.postings_[term];
        for (std::uint64_t k = 0; k < count; ++k) {
            auto doc = r.u64();
            auto tf = r.u64();
            if (doc >= n) {
                throw DataError(path.string() + ": posting references unknown document");
            }
            list.push_back({static_cast<std::uint32_t>(doc), to_u32(tf, "term frequency")});
        }
    }
    if (!r.done()) {
        throw DataError(path.string() + ": trailing bytes after index");
    }
    return idx;
}

}  // namespace snapcorpus::rank
