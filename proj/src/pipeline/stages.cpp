#include "snapcorpus/pipeline/stages.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "snapcorpus/archive/client.hpp"
#include "snapcorpus/archive/mapping.hpp"
#include "snapcorpus/archive/snapshot_dates.hpp"
#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/gzip.hpp"
#include "snapcorpus/common/text.hpp"
#include "snapcorpus/diff/divergent.hpp"
#include "snapcorpus/diff/jaccard.hpp"
#include "snapcorpus/diff/set_report.hpp"
#include "snapcorpus/extract/charset.hpp"
#include "snapcorpus/extract/corpus_stats.hpp"
#include "snapcorpus/extract/document.hpp"
#include "snapcorpus/extract/html_text.hpp"
#include "snapcorpus/langid/classify.hpp"
#include "snapcorpus/log/log_record.hpp"
#include "snapcorpus/log/universe.hpp"
#include "snapcorpus/log/url.hpp"
#include "snapcorpus/pipeline/stamp.hpp"
#include "snapcorpus/rank/measures.hpp"
#include "snapcorpus/rank/significance.hpp"
#include "snapcorpus/session/candidates.hpp"
#include "snapcorpus/session/session_file.hpp"

namespace snapcorpus::pipeline {

namespace fs = std::filesystem;

namespace {

struct Paths {
    fs::path universe, ingest_report, lookup_journal, located, fetch_journal, raw, snapshot_dates, titles,
        corpus_stats, languages, language_report, diff_dir, sessions, session_stats, title_index, url_index,
        candidates, qrels, eval_dir, eval_report, significance_dir, stamps;

    explicit Paths(const PipelineConfig& c)
    {
        const auto& w = c.work_dir;
        universe = w / "universe.tsv";
        ingest_report = w / "ingest_report.txt";
        lookup_journal = w / "lookup.journal";
        located = w / "located.tsv.gz";
        fetch_journal = w / "fetch.journal";
        raw = w / "raw";
        snapshot_dates = w / "snapshot_dates.tsv";
        titles = w / "titles.tsv";
        corpus_stats = w / "corpus_stats.txt";
        languages = w / "languages.tsv";
        language_report = w / "language_report.tsv";
        diff_dir = w / "diff";
        sessions = c.session_dir / "sessions.tsv";
        session_stats = c.session_dir / "stats.txt";
        title_index = w / "index" / "title.idx";
        url_index = w / "index" / "title_url.idx";
        candidates = c.run_dir / "candidates.run";
        qrels = c.run_dir / "qrels.txt";
        eval_dir = w / "eval";
        eval_report = eval_dir / "report.tsv";
        significance_dir = w / "significance";
        stamps = w / "stamps";
    }
};

fs::path store_index(const fs::path& store) { return fs::path(store.string() + ".idx"); }

/// Run files in run_dir other than the candidate pool, sorted by name.
std::vector<fs::path> system_runs(const PipelineConfig& cfg)
{
    std::vector<fs::path> out;
    if (!fs::is_directory(cfg.run_dir)) {
        return out;
    }
    for (const auto& e : fs::directory_iterator(cfg.run_dir)) {
        if (e.is_regular_file() && e.path().extension() == ".run" && e.path().stem() != "candidates") {
            out.push_back(e.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void ensure_parent(const fs::path& p)
{
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path());
    }
}

void write_text(const fs::path& p, std::string_view text)
{
    ensure_parent(p);
    write_file_atomic(p.string(), text);
}

archive::ArchiveClient make_client(const PipelineConfig& cfg)
{
    auto policy = cfg.fetch;
    policy.max_concurrency = std::max(1u, std::min(policy.max_concurrency, cfg.jobs));
    policy.seed = cfg.seed;
    return archive::ArchiveClient(cfg.archive_endpoint, policy);
}

/// Latest entries restricted to `urls`; URLs still unsettled are counted.
archive::Journal settled_subset(const archive::Journal& j, const std::vector<std::string>& urls,
                                std::size_t& unsettled)
{
    archive::Journal out;
    unsettled = 0;
    for (const auto& u : urls) {
        auto it = j.latest.find(u);
        if (it == j.latest.end() || !archive::is_terminal(it->second.disposition)) {
            ++unsettled;
        } else {
            out.latest.emplace(u, it->second);
        }
    }
    return out;
}

std::string disposition_summary(const archive::Journal& j)
{
    std::map<std::string, std::size_t> n;
    for (const auto& [url, e] : j.latest) {
        ++n[std::string(archive::to_string(e.disposition))];
    }
    std::string out;
    for (const auto& [k, v] : n) {
        out += "  " + k + "\t" + std::to_string(v) + "\n";
    }
    return out;
}

std::string percent(std::size_t n, std::size_t d)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f %%", d == 0 ? 0.0 : 100.0 * static_cast<double>(n) / d);
    return buf;
}

void stage_ingest(const PipelineConfig& cfg, const Paths& p, std::ostream& log)
{
    log::ReadStats read;
    log::UniverseBuilder builder;
    for (const auto& f : log::list_log_files(cfg.log_dir)) {
        read.merge(log::read_log_file(f, [&](log::LogRecord&& r) { builder.add(r); }));
    }
    if (read.records == 0) {
        throw DataError("no log records found in " + cfg.log_dir.string());
    }
    auto stats = log::universe_stats(builder.universe());
    log::write_universe(builder.universe(), p.universe);
    write_text(p.ingest_report, log::format_universe_stats(stats, read) + "unparseable_click_urls\t" +
                                    std::to_string(builder.bad_urls()) + "\n");
    log << "ingest: " << read.records << " records, " << read.malformed << " malformed lines, "
        << stats.unique_count << " unique clicked URLs\n";
}

void stage_map(const PipelineConfig& cfg, const Paths& p, std::ostream& log)
{
    auto urls = log::read_universe(p.universe).urls();
    auto client = make_client(cfg);
    ensure_parent(p.lookup_journal);
    archive::run_lookups(client, urls, p.lookup_journal);
    std::size_t unsettled = 0;
    auto journal = settled_subset(archive::read_journal(p.lookup_journal), urls, unsettled);
    if (unsettled > 0) {
        throw NetworkError(std::to_string(unsettled) + " of " + std::to_string(urls.size()) +
                           " lookups deferred after retries; run `map` again to resume");
    }
    auto rows = archive::mapping_from_lookups(journal);
    archive::write_mapping(rows, p.located);
    log << "map: " << rows.size() << " of " << urls.size() << " URLs located (" << percent(rows.size(), urls.size())
        << ")\n"
        << disposition_summary(journal);
}

void stage_fetch(const PipelineConfig& cfg, const Paths& p, std::ostream& log)
{
    auto located = archive::read_mapping(p.located);
    auto client = make_client(cfg);
    archive::RawStore store(p.raw);
    std::vector<std::string> urls;
    for (const auto& r : located) {
        urls.push_back(r.original_url);
    }
    archive::run_fetches(client, located, p.fetch_journal, store);
    std::size_t unsettled = 0;
    auto journal = settled_subset(archive::read_journal(p.fetch_journal), urls, unsettled);
    if (unsettled > 0) {
        throw NetworkError(std::to_string(unsettled) + " of " + std::to_string(urls.size()) +
                           " fetches deferred after retries; run `fetch` again to resume");
    }
    auto rows = archive::mapping_from_fetches(journal, located);
    ensure_parent(cfg.mapping_file);
    archive::write_mapping(rows, cfg.mapping_file);
    write_text(p.snapshot_dates, archive::format_snapshot_dates(archive::snapshot_dates(rows)));
    log << "fetch: " << rows.size() << " of " << located.size() << " captures stored\n" << disposition_summary(journal);
}

void stage_extract(const PipelineConfig& cfg, const Paths& p, std::ostream& log)
{
    auto rows = archive::read_mapping(cfg.mapping_file);
    archive::RawStore raw(p.raw);
    std::size_t excluded = 0;
    std::size_t truncated = 0;
    ensure_parent(cfg.doc_store);
    {
        extract::DocStoreWriter writer(cfg.doc_store);
        for (const auto& r : rows) {
            if (!raw.contains(r.doc_id)) {
                throw DataError("raw payload for " + r.doc_id + " missing under " + p.raw.string() +
                                "; run `fetch` first");
            }
            try {
                auto hint = extract::charset_from_content_type(raw.content_type(r.doc_id));
                auto text = extract::extract_text(raw.body(r.doc_id), hint, cfg.max_body_tokens);
                truncated += text.truncated;
                writer.add({r.doc_id, r.original_url, text.title, text.body, r.timestamp, ""});
            } catch (const extract::ExtractError&) {
                ++excluded;
            }
        }
        writer.finish();
    }
    extract::DocStoreReader reader(cfg.doc_store);
    extract::export_titles(reader, p.titles);
    auto stats = extract::corpus_stats(reader);
    stats.excluded = excluded;
    stats.truncated = truncated;
    write_text(p.corpus_stats, extract::format_corpus_stats(stats));
    log << "extract: " << reader.size() << " documents, " << excluded << " excluded as non-text\n";
}

void stage_langid(const PipelineConfig& cfg, const Paths& p, std::ostream& log)
{
    auto profiles = langid::load_profiles(cfg.langid_profiles);
    std::vector<std::string> named;
    for (const auto& pr : profiles) {
        named.push_back(pr.lang());
    }
    extract::DocStoreReader reader(cfg.doc_store);
    std::vector<std::string> labels;
    std::string table;
    reader.scan([&](const extract::DocumentRecord& d) {
        auto c = langid::classify(d.title + "\n" + d.body, profiles);
        labels.push_back(c.lang);
        table += d.doc_id + "\t" + c.lang + "\n";
    });
    write_text(p.languages, table);
    auto report = langid::language_report(labels, named);
    write_text(p.language_report, langid::format_language_report(report));
    log << "langid: " << labels.size() << " documents classified\n" << langid::format_language_report(report);
}

std::string canonical_or_raw(const std::string& url)
{
    try {
        return log::canonicalize_url(url);
    } catch (const DataError&) {
        return url;
    }
}

void stage_diff(const PipelineConfig& cfg, const Paths& p, std::ostream& log)
{
    auto current = extract::read_title_export(p.titles);
    auto old = extract::read_title_export(cfg.old_titles);
    auto universe = log::read_universe(p.universe);
    std::vector<std::string> a, b;
    for (const auto& r : current) {
        a.push_back(canonical_or_raw(r.url));
    }
    for (const auto& r : old) {
        b.push_back(canonical_or_raw(r.url));
    }
    auto report = diff::set_report({"current", a}, {"old", b}, universe.size());
    write_text(p.diff_dir / "set_report.tsv", diff::format_set_report_tsv(report));
    write_text(p.diff_dir / "set_report.txt", diff::format_set_report_table(report));

    auto pairs = diff::join_titles(current, old);
    diff::JaccardHistogram hist;
    for (const auto& pr : pairs) {
        hist.add(extract::tokenize(pr.title_a), extract::tokenize(pr.title_b));
    }
    write_text(p.diff_dir / "jaccard_histogram.tsv", diff::format_histogram_tsv(hist));
    write_text(p.diff_dir / "jaccard_summary.txt", diff::format_histogram_summary(hist));

    auto population = diff::sample_divergent(pairs, 0, cfg.seed, cfg.divergent_threshold).population;
    auto sample = diff::sample_divergent(pairs, std::min(cfg.divergent_sample, population), cfg.seed,
                                         cfg.divergent_threshold);
    write_text(p.diff_dir / "divergent_sample.tsv", diff::format_review_sheet(sample));
    log << "diff: |A|=" << report.a << " |B|=" << report.b << " |A∩B|=" << report.intersection << ", "
        << hist.pairs << " title pairs, " << sample.rows.size() << " of " << population
        << " low-overlap pairs sampled\n";
}

/// canonical URL -> doc_id from a mapping file.
std::unordered_map<std::string, std::string> url_index(const fs::path& mapping)
{
    std::unordered_map<std::string, std::string> out;
    for (const auto& r : archive::read_mapping(mapping)) {
        out.emplace(r.original_url, r.doc_id);
    }
    return out;
}

void stage_sessions(const PipelineConfig& cfg, const Paths& p, std::ostream& log)
{
    auto ids = url_index(cfg.mapping_file);
    session::ClickResolver resolve = [&](const std::string& url) -> std::optional<std::string> {
        try {
            auto it = ids.find(log::canonicalize_url(url));
            if (it != ids.end()) {
                return it->second;
            }
        } catch (const DataError&) {
        }
        return std::nullopt;
    };
    // Each log file is segmented on its own; a user spanning files is an error.
    std::vector<session::Session> all;
    std::unordered_set<std::string> users;
    session::SegmentStats total;
    log::ReadStats read;
    for (const auto& f : log::list_log_files(cfg.log_dir)) {
        std::vector<log::LogRecord> records;
        read.merge(log::read_log_file(f, [&](log::LogRecord&& r) { records.push_back(std::move(r)); }));
        session::SegmentStats st;
        auto sessions = session::segment(records, cfg.gap_threshold, resolve, &st);
        std::unordered_set<std::string> here;
        for (const auto& s : sessions) {
            if (users.count(s.user_id)) {
                throw DataError("user " + s.user_id + " appears in more than one log file (" + f.string() + ")");
            }
            here.insert(s.user_id);
        }
        users.insert(here.begin(), here.end());
        total.records += st.records;
        total.sessions += st.sessions;
        total.merged_duplicates += st.merged_duplicates;
        total.unresolved_clicks += st.unresolved_clicks;
        all.insert(all.end(), std::make_move_iterator(sessions.begin()), std::make_move_iterator(sessions.end()));
    }
    std::size_t dropped = 0;
    auto kept = session::filter_sessions(std::move(all), cfg.min_queries, &dropped);
    auto split = session::split_by_date(std::move(kept), cfg.splits);
    ensure_parent(p.sessions);
    session::write_sessions(split.sessions, p.sessions);

    std::optional<session::DatasetStats> baseline;
    if (!cfg.session_baseline.empty()) {
        baseline = session::dataset_stats(session::read_sessions(cfg.session_baseline));
    }
    auto stats = session::dataset_stats(split.sessions);
    std::string text = session::format_dataset_stats(stats, baseline);
    text += "# records\t" + std::to_string(total.records) + "\n";
    text += "# sessions_segmented\t" + std::to_string(total.sessions) + "\n";
    text += "# merged_duplicate_queries\t" + std::to_string(total.merged_duplicates) + "\n";
    text += "# unresolved_clicks\t" + std::to_string(total.unresolved_clicks) + "\n";
    text += "# dropped_below_min_queries\t" + std::to_string(dropped) + "\n";
    text += "# discarded_outside_ranges\t" + std::to_string(split.discarded) + "\n";
    write_text(p.session_stats, text);
    log << "sessions: " << split.sessions.size() << " kept of " << total.sessions << " segmented (train "
        << stats.train.sessions << ", dev " << stats.dev.sessions << ", test " << stats.test.sessions << ")\n";
}

void stage_index(const PipelineConfig& cfg, const Paths& p, std::ostream& log)
{
    extract::DocStoreReader reader(cfg.doc_store);
    std::vector<std::pair<std::string, rank::TokenSeq>> titles, with_url;
    reader.scan([&](const extract::DocumentRecord& d) {
        titles.emplace_back(d.doc_id, extract::document_text(d, false));
        with_url.emplace_back(d.doc_id, extract::document_text(d, true));
    });
    fs::create_directories(p.title_index.parent_path());
    auto a = rank::build_index(std::move(titles));
    a.save(p.title_index);
    auto b = rank::build_index(std::move(with_url));
    b.save(p.url_index);
    log << "index: " << a.doc_count() << " documents, " << a.postings().size() << " title terms, "
        << b.postings().size() << " title+url terms\n";
}

void stage_rerank(const PipelineConfig& cfg, const Paths& p, std::ostream& log)
{
    auto sessions = session::read_sessions(p.sessions);
    auto pool_index = rank::InvertedIndex::load(p.title_index);
    session::CandidateStats st;
    auto pool = session::build_split_candidates(sessions, cfg.eval_split, pool_index, cfg.candidate_depth, cfg.bm25,
                                                &st);
    fs::create_directories(cfg.run_dir);
    rank::write_run(pool.candidates, p.candidates);
    rank::write_qrels(pool.qrels, p.qrels);

    std::map<std::string, std::string> text;
    for (const auto& s : sessions) {
        for (std::size_t i = 0; i < s.queries.size(); ++i) {
            text.emplace(s.query_id(i), s.queries[i].query_text);
        }
    }
    const auto scorer = cfg.include_url ? rank::InvertedIndex::load(p.url_index) : std::move(pool_index);
    auto tag = cfg.bm25.tag() + (cfg.include_url ? "+url" : "");
    std::vector<rank::RunEntry> run;
    for (std::size_t i = 0; i < pool.candidates.size();) {
        const auto& qid = pool.candidates[i].query_id;
        std::vector<std::string> docs;
        for (; i < pool.candidates.size() && pool.candidates[i].query_id == qid; ++i) {
            docs.push_back(pool.candidates[i].doc_id);
        }
        auto ranked = rank::rerank(qid, extract::tokenize(text.at(qid)), docs, scorer, cfg.bm25, tag);
        run.insert(run.end(), ranked.begin(), ranked.end());
    }
    auto out = cfg.run_dir / (bm25_run_name(cfg) + ".run");
    rank::write_run(run, out);
    log << "rerank: " << st.queries << " " << session::to_string(cfg.eval_split) << " queries, " << st.skipped
        << " skipped, " << st.without_clicks << " without indexed clicks, " << st.forced
        << " clicked documents added beyond depth " << cfg.candidate_depth << "; wrote " << out.string() << "\n";
}

struct Evaluated {
    std::string name;
    rank::MeasureResult result;
};

std::vector<Evaluated> evaluate_runs(const PipelineConfig& cfg, const Paths& p)
{
    auto qrels = rank::read_qrels(p.qrels);
    std::vector<Evaluated> out;
    for (const auto& f : system_runs(cfg)) {
        out.push_back({f.stem().string(), rank::evaluate(rank::read_run(f), qrels)});
    }
    return out;
}

void stage_eval(const PipelineConfig& cfg, const Paths& p, std::ostream& log)
{
    auto systems = evaluate_runs(cfg, p);
    if (systems.empty()) {
        throw DataError("no run files in " + cfg.run_dir.string() + "; run `rerank` first");
    }
    std::string report = "system\tMAP\tMRR\tP@1\tqueries\texcluded\n";
    char buf[256];
    for (const auto& s : systems) {
        write_text(p.eval_dir / (s.name + ".measures.tsv"), rank::format_measures(s.result));
        std::snprintf(buf, sizeof buf, "%s\t%.4f\t%.4f\t%.4f\t%zu\t%zu\n", s.name.c_str(), s.result.map,
                      s.result.mrr, s.result.p1, s.result.per_query.size(), s.result.excluded_no_relevant);
        report += buf;
    }
    write_text(p.eval_report, report);
    log << report;
}

std::string strip_trailing_spaces(const std::string& text)
{
    std::string out;
    for (auto line : split(text, '\n')) {
        auto end = line.find_last_not_of(' ');
        out += std::string(line.substr(0, end == std::string_view::npos ? 0 : end + 1)) + "\n";
    }
    out.pop_back();
    return out;
}

void stage_significance(const PipelineConfig& cfg, const Paths& p, std::ostream& log)
{
    auto systems = evaluate_runs(cfg, p);
    if (systems.size() < 2) {
        throw DataError("significance needs at least two evaluated runs, found " + std::to_string(systems.size()) +
                        "; run `rerank` with and without --include-url, then `eval`");
    }
    std::vector<rank::SignificanceMatrix> matrices;
    const std::vector<rank::Measure> measures = {rank::Measure::ap, rank::Measure::rr, rank::Measure::p1};
    for (auto m : measures) {
        std::vector<rank::NamedScores> scores;
        for (const auto& s : systems) {
            scores.push_back({s.name, rank::per_query_values(s.result, m)});
        }
        matrices.push_back(rank::significance_matrix(scores, cfg.alpha));
        write_text(p.significance_dir / (rank::to_string(m) + ".tsv"),
                   rank::format_significance_tsv(matrices.back()));
    }

    // One row per system, each measure annotated with the letters of the
    // systems it is not significantly different from.
    std::size_t width = 6;
    for (const auto& s : systems) {
        width = std::max(width, s.name.size());
    }
    char buf[512];
    std::snprintf(buf, sizeof buf, "    %-*s  %-14s%-14s%-14s\n", static_cast<int>(width), "system", "MAP", "MRR",
                  "P@1");
    std::string table = buf;
    for (std::size_t i = 0; i < systems.size(); ++i) {
        std::snprintf(buf, sizeof buf, "(%s) %-*s", rank::system_letter(i).c_str(), static_cast<int>(width),
                      systems[i].name.c_str());
        table += buf;
        for (const auto& m : matrices) {
            auto letters = m.nonsignificant_letters(i);
            char cell[128];
            std::snprintf(cell, sizeof cell, "%.4f%s%s", m.means[i], letters.empty() ? "" : "^", letters.c_str());
            std::snprintf(buf, sizeof buf, "  %-12s", cell);
            table += buf;
        }
        table += "\n";
    }
    std::snprintf(buf, sizeof buf,
                  "# ^x: not significantly different from system x (paired t-test, p<%g, Bonferroni over %zu "
                  "pairs per measure)\n# queries: %zu\n",
                  cfg.alpha, matrices.front().pairs.size(), systems.front().result.per_query.size());
    table += buf;
    table = strip_trailing_spaces(table);
    write_text(p.significance_dir / "report.txt", table);
    log << table;
}

using StageFn = void (*)(const PipelineConfig&, const Paths&, std::ostream&);

StageFn stage_fn(const std::string& stage)
{
    static const std::map<std::string, StageFn> fns = {
        {"ingest", stage_ingest},   {"map", stage_map},           {"fetch", stage_fetch},
        {"extract", stage_extract}, {"langid", stage_langid},     {"diff", stage_diff},
        {"sessions", stage_sessions}, {"index", stage_index},     {"rerank", stage_rerank},
        {"eval", stage_eval},       {"significance", stage_significance},
    };
    auto it = fns.find(stage);
    if (it == fns.end()) {
        throw ConfigError("unknown stage: " + stage);
    }
    return it->second;
}

}  // namespace

const std::vector<std::string>& stage_names()
{
    static const std::vector<std::string> names = {"ingest",   "map",   "fetch",  "extract", "langid",      "diff",
                                                   "sessions", "index", "rerank", "eval",    "significance"};
    return names;
}

std::string bm25_run_name(const PipelineConfig& cfg) { return cfg.include_url ? "bm25_url" : "bm25"; }

StagePlan plan_stage(const std::string& stage, const PipelineConfig& cfg)
{
    Paths p(cfg);
    StagePlan plan{stage, stage, {}, {}, {}};
    if (stage == "ingest") {
        plan.inputs = {{cfg.log_dir, ""}};
        plan.outputs = {p.universe, p.ingest_report};
    } else if (stage == "map") {
        plan.inputs = {{p.universe, "ingest"}};
        plan.outputs = {p.located};
    } else if (stage == "fetch") {
        plan.inputs = {{p.located, "map"}};
        plan.outputs = {cfg.mapping_file, p.snapshot_dates};
    } else if (stage == "extract") {
        plan.inputs = {{cfg.mapping_file, "fetch"}, {p.raw, "fetch"}};
        plan.outputs = {cfg.doc_store, store_index(cfg.doc_store), p.titles, p.corpus_stats};
    } else if (stage == "langid") {
        plan.inputs = {{cfg.doc_store, "extract"}, {store_index(cfg.doc_store), "extract"}, {cfg.langid_profiles, ""}};
        plan.outputs = {p.languages, p.language_report};
    } else if (stage == "diff") {
        plan.inputs = {{p.titles, "extract"}, {p.universe, "ingest"}, {cfg.old_titles, ""}};
        plan.outputs = {p.diff_dir / "set_report.tsv", p.diff_dir / "set_report.txt",
                        p.diff_dir / "jaccard_histogram.tsv", p.diff_dir / "jaccard_summary.txt",
                        p.diff_dir / "divergent_sample.tsv"};
    } else if (stage == "sessions") {
        plan.inputs = {{cfg.log_dir, ""}, {cfg.mapping_file, "fetch"}};
        if (!cfg.session_baseline.empty()) {
            plan.inputs.push_back({cfg.session_baseline, ""});
        }
        plan.outputs = {p.sessions, p.session_stats};
    } else if (stage == "index") {
        plan.inputs = {{cfg.doc_store, "extract"}, {store_index(cfg.doc_store), "extract"}};
        plan.outputs = {p.title_index, p.url_index};
    } else if (stage == "rerank") {
        plan.stamp_name = "rerank-" + bm25_run_name(cfg);
        plan.inputs = {{p.sessions, "sessions"}, {p.title_index, "index"}};
        if (cfg.include_url) {
            plan.inputs.push_back({p.url_index, "index"});
        }
        plan.outputs = {cfg.run_dir / (bm25_run_name(cfg) + ".run"), p.candidates, p.qrels};
    } else if (stage == "eval" || stage == "significance") {
        plan.inputs = {{p.qrels, "rerank"}};
        auto runs = system_runs(cfg);
        if (runs.empty()) {
            plan.inputs.push_back({cfg.run_dir / (bm25_run_name(cfg) + ".run"), "rerank"});
        }
        for (const auto& r : runs) {
            plan.inputs.push_back({r, "rerank"});
        }
        if (stage == "eval") {
            plan.outputs = {p.eval_report};
            for (const auto& r : runs) {
                plan.outputs.push_back(p.eval_dir / (r.stem().string() + ".measures.tsv"));
            }
        } else {
            plan.inputs.insert(plan.inputs.begin(), {p.eval_report, "eval"});
            plan.outputs = {p.significance_dir / "report.txt", p.significance_dir / "map.tsv",
                            p.significance_dir / "mrr.tsv", p.significance_dir / "p1.tsv"};
        }
    } else {
        throw ConfigError("unknown stage: " + stage);
    }
    plan.stamp_path = p.stamps / (plan.stamp_name + ".stamp");
    return plan;
}

namespace {

std::vector<fs::path> input_paths(const StagePlan& plan)
{
    std::vector<fs::path> out;
    for (const auto& in : plan.inputs) {
        out.push_back(in.path);
    }
    return out;
}

void check_inputs(const StagePlan& plan)
{
    for (const auto& in : plan.inputs) {
        if (in.path.empty()) {
            throw DataError(plan.stage + " needs an input that is not configured (see `snapcorpus --help`)");
        }
        if (!fs::exists(in.path)) {
            if (in.producer.empty()) {
                throw DataError("missing input " + in.path.string());
            }
            throw DataError("missing " + in.path.string() + "; run `" + in.producer + "` first");
        }
    }
}

}  // namespace

std::string describe_plan(const StagePlan& plan, const PipelineConfig& cfg, const std::string& version)
{
    std::string out = "stage " + plan.stage + "\n";
    bool ready = true;
    for (const auto& in : plan.inputs) {
        bool present = !in.path.empty() && fs::exists(in.path);
        ready = ready && present;
        out += "  input  " + (in.path.empty() ? std::string("(not configured)") : in.path.string());
        if (!present) {
            out += in.producer.empty() ? "  [missing]" : "  [missing: made by `" + in.producer + "`]";
        }
        out += "\n";
    }
    for (const auto& o : plan.outputs) {
        out += "  output " + o.string() + "\n";
    }
    out += "  stamp  " + plan.stamp_path.string() + "\n";
    if (!ready) {
        out += "  status: waiting for inputs\n";
    } else if (stamp_current(plan.stamp_path, version, cfg.hash(), hash_inputs(input_paths(plan)), plan.outputs)) {
        out += "  status: up to date\n";
    } else {
        out += "  status: would run\n";
    }
    return out;
}

StageStatus run_stage(const std::string& stage, const PipelineConfig& cfg, const std::string& version,
                      std::ostream& log)
{
    auto fn = stage_fn(stage);
    auto plan = plan_stage(stage, cfg);
    check_inputs(plan);
    auto inputs = hash_inputs(input_paths(plan));
    auto config = cfg.hash();
    if (stamp_current(plan.stamp_path, version, config, inputs, plan.outputs)) {
        log << stage << ": up to date (stamp " << plan.stamp_path.string() << ")\n";
        return StageStatus::up_to_date;
    }
    fs::create_directories(cfg.work_dir);
    fn(cfg, Paths(cfg), log);
    // Eval outputs depend on which run files exist, so re-plan after running.
    plan = plan_stage(stage, cfg);
    write_text(plan.stamp_path, format_stamp(make_stamp(version, config, inputs, plan.outputs)));
    return StageStatus::ran;
}

}  // namespace snapcorpus::pipeline
