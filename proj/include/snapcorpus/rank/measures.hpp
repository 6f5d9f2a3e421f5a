#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "snapcorpus/rank/run.hpp"

namespace snapcorpus::rank {

struct QueryMeasures {
    double ap = 0.0;
    double rr = 0.0;
    double p1 = 0.0;
};

struct MeasureResult {
    std::map<std::string, QueryMeasures> per_query;
    double map = 0.0;
    double mrr = 0.0;
    double p1 = 0.0;
    std::size_t excluded_no_relevant = 0;  // qrels queries without a relevant document
};

/// Measures over every qrels query with at least one relevant document. Run
/// rows are re-sorted by (score desc, doc_id desc); input ranks are ignored.
/// Queries absent from the run score 0. Throws DataError listing run queries
/// that have no qrels.
MeasureResult evaluate(const std::vector<RunEntry>& run, const std::vector<QrelEntry>& qrels);

enum class Measure { ap, rr, p1 };

Measure parse_measure(const std::string& name);
std::string to_string(Measure m);

/// One measure's per-query values.
std::map<std::string, double> per_query_values(const MeasureResult& r, Measure m);

/// Sum by recursive halving, which bounds rounding error growth.
double pairwise_sum(const double* v, std::size_t n);

/// "measure \t query \t value" rows plus "all" aggregates, 4 decimals.
std::string format_measures(const MeasureResult& r);

}  // namespace snapcorpus::rank
