#include "snapcorpus/session/split.hpp"

#include <cstdio>

#include "snapcorpus/common/error.hpp"

namespace snapcorpus::session {

DateRange parse_date_range(std::string_view s)
{
    auto slash = s.find('/');
    if (slash == std::string_view::npos) {
        throw DataError("date range must look like YYYY-MM-DD/YYYY-MM-DD: " + std::string(s));
    }
    auto b = parse_date(s.substr(0, slash));
    auto e = parse_date(s.substr(slash + 1));
    if (!b || !e) {
        throw DataError("bad date in range: " + std::string(s));
    }
    if (*e <= *b) {
        throw DataError("empty date range: " + std::string(s));
    }
    return {*b, *e};
}

std::string format_date_range(const DateRange& r)
{
    return format_log_time(r.begin).substr(0, 10) + "/" + format_log_time(r.end).substr(0, 10);
}

void SplitSpec::validate() const
{
    const std::pair<const char*, const DateRange*> named[] = {{"train", &train}, {"dev", &dev}, {"test", &test}};
    for (const auto& [name, r] : named) {
        if (r->end <= r->begin) {
            throw DataError(std::string(name) + " date range is empty");
        }
    }
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            if (named[i].second->overlaps(*named[j].second)) {
                throw DataError(std::string(named[i].first) + " and " + named[j].first + " date ranges overlap");
            }
        }
    }
}

SplitResult split_by_date(std::vector<Session> sessions, const SplitSpec& spec)
{
    spec.validate();
    SplitResult out;
    for (auto& s : sessions) {
        if (s.queries.empty()) {
            ++out.discarded;
            continue;
        }
        auto t = s.queries.front().query_time;
        s.split = spec.train.contains(t) ? Split::train
                  : spec.dev.contains(t) ? Split::dev
                  : spec.test.contains(t) ? Split::test
                                          : Split::none;
        if (s.split == Split::none) {
            ++out.discarded;
        } else {
            out.sessions.push_back(std::move(s));
        }
    }
    return out;
}

const SplitStats& DatasetStats::get(Split s) const
{
    switch (s) {
    case Split::train:
        return train;
    case Split::dev:
        return dev;
    case Split::test:
        return test;
    case Split::none:
        break;
    }
    throw DataError("no statistics for unassigned sessions");
}

DatasetStats dataset_stats(const std::vector<Session>& sessions)
{
    DatasetStats d;
    for (const auto& s : sessions) {
        if (s.split == Split::none) {
            continue;
        }
        auto& st = s.split == Split::train ? d.train : s.split == Split::dev ? d.dev : d.test;
        ++st.sessions;
        st.queries += s.queries.size();
    }
    return d;
}

std::string percent_delta(double value, double baseline)
{
    if (baseline == 0.0) {
        return "n/a";
    }
    char buf[32];
    double pct = 100.0 * (value - baseline) / baseline;
    std::snprintf(buf, sizeof buf, "%+.0f %%", pct);
    return buf;
}

std::string format_dataset_stats(const DatasetStats& s, const std::optional<DatasetStats>& baseline)
{
    std::string out = "statistic";
    for (const char* split : {"train", "dev", "test"}) {
        out += baseline ? std::string("\t") + split + "_baseline\t" + split + "\t" + split + "_change"
                        : std::string("\t") + split;
    }
    out += "\n";
    char buf[64];
    auto row = [&](const char* name, auto value, auto fmt) {
        out += name;
        for (Split sp : {Split::train, Split::dev, Split::test}) {
            double cur = value(s.get(sp));
            if (baseline) {
                double base = value(baseline->get(sp));
                std::snprintf(buf, sizeof buf, fmt, base);
                out += std::string("\t") + buf;
                std::snprintf(buf, sizeof buf, fmt, cur);
                out += std::string("\t") + buf + "\t" + percent_delta(cur, base);
            } else {
                std::snprintf(buf, sizeof buf, fmt, cur);
                out += std::string("\t") + buf;
            }
        }
        out += "\n";
    };
    row("sessions", [](const SplitStats& x) { return static_cast<double>(x.sessions); }, "%.0f");
    row("queries", [](const SplitStats& x) { return static_cast<double>(x.queries); }, "%.0f");
    row("avg_queries_per_session", [](const SplitStats& x) { return x.avg_queries(); }, "%.2f");
    return out;
}

}  // namespace snapcorpus::session
