#include "snapcorpus/rank/measures.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <unordered_map>

#include "snapcorpus/common/error.hpp"

namespace snapcorpus::rank {

double pairwise_sum(const double* v, std::size_t n)
{
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += v[i];
        }
        return s;
    }
    return pairwise_sum(v, n / 2) + pairwise_sum(v + n / 2, n - n / 2);
}

MeasureResult evaluate(const std::vector<RunEntry>& run, const std::vector<QrelEntry>& qrels)
{
    std::map<std::string, std::unordered_map<std::string, int>> judged;
    for (const auto& q : qrels) {
        judged[q.query_id][q.doc_id] = q.relevance;
    }
    std::map<std::string, std::vector<const RunEntry*>> by_query;
    std::set<std::string> missing;
    for (const auto& e : run) {
        if (!judged.count(e.query_id)) {
            missing.insert(e.query_id);
        }
        by_query[e.query_id].push_back(&e);
    }
    if (!missing.empty()) {
        std::string ids;
        for (const auto& m : missing) {
            ids += (ids.empty() ? "" : ", ") + m;
        }
        throw DataError("run has queries without qrels: " + ids);
    }

    MeasureResult out;
    for (const auto& [qid, docs] : judged) {
        std::size_t relevant = 0;
        for (const auto& [doc, rel] : docs) {
            relevant += rel >= 1;
        }
        if (relevant == 0) {
            ++out.excluded_no_relevant;
            continue;
        }
        QueryMeasures m;
        auto it = by_query.find(qid);
        if (it != by_query.end()) {
            auto rows = it->second;
            std::sort(rows.begin(), rows.end(), [](const RunEntry* a, const RunEntry* b) {
                return a->score != b->score ? a->score > b->score : a->doc_id > b->doc_id;
            });
            std::size_t hits = 0;
            double precision_sum = 0.0;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                auto j = docs.find(rows[i]->doc_id);
                if (j == docs.end() || j->second < 1) {
                    continue;
                }
                ++hits;
                precision_sum += static_cast<double>(hits) / static_cast<double>(i + 1);
                if (hits == 1) {
                    m.rr = 1.0 / static_cast<double>(i + 1);
                    m.p1 = i == 0 ? 1.0 : 0.0;
                }
            }
            m.ap = precision_sum / static_cast<double>(relevant);
        }
        out.per_query[qid] = m;
    }
    std::vector<double> ap;
    std::vector<double> rr;
    std::vector<double> p1;
    for (const auto& [qid, m] : out.per_query) {
        ap.push_back(m.ap);
        rr.push_back(m.rr);
        p1.push_back(m.p1);
    }
    if (!ap.empty()) {
        auto n = static_cast<double>(ap.size());
        out.map = pairwise_sum(ap.data(), ap.size()) / n;
        out.mrr = pairwise_sum(rr.data(), rr.size()) / n;
        out.p1 = pairwise_sum(p1.data(), p1.size()) / n;
    }
    return out;
}

Measure parse_measure(const std::string& name)
{
    if (name == "map" || name == "ap") {
        return Measure::ap;
    }
    if (name == "mrr" || name == "rr") {
        return Measure::rr;
    }
    if (name == "p1" || name == "P@1" || name == "p@1") {
        return Measure::p1;
    }
    throw DataError("unknown measure '" + name + "' (expected map, mrr or p1)");
}

std::string to_string(Measure m)
{
    switch (m) {
    case Measure::ap:
        return "map";
    case Measure::rr:
        return "mrr";
    case Measure::p1:
        return "p1";
    }
    return "?";
}

std::map<std::string, double> per_query_values(const MeasureResult& r, Measure m)
{
    std::map<std::string, double> out;
    for (const auto& [qid, q] : r.per_query) {
        out[qid] = m == Measure::ap ? q.ap : m == Measure::rr ? q.rr : q.p1;
    }
    return out;
}

std::string format_measures(const MeasureResult& r)
{
    std::string out;
    char buf[64];
    for (const auto& [qid, m] : r.per_query) {
        for (auto [name, v] : {std::pair{"map", m.ap}, std::pair{"mrr", m.rr}, std::pair{"p1", m.p1}}) {
            std::snprintf(buf, sizeof buf, "\t%.4f\n", v);
            out += std::string(name) + "\t" + qid + buf;
        }
    }
    for (auto [name, v] : {std::pair{"map", r.map}, std::pair{"mrr", r.mrr}, std::pair{"p1", r.p1}}) {
        std::snprintf(buf, sizeof buf, "\tall\t%.4f\n", v);
        out += std::string(name) + buf;
    }
    out += "num_q\tall\t" + std::to_string(r.per_query.size()) + "\n";
    out += "num_q_no_relevant\tall\t" + std::to_string(r.excluded_no_relevant) + "\n";
    return out;
}

}  // namespace snapcorpus::rank
