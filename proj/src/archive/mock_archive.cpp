#include "snapcorpus/archive/mock_archive.hpp"

#include <httplib.h>

#include <cstdlib>
#include <json.hpp>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/gzip.hpp"
#include "snapcorpus/common/text.hpp"
#include "snapcorpus/common/timestamp.hpp"

namespace snapcorpus::archive {

MockArchive::MockArchive() = default;

MockArchive::~MockArchive() { stop(); }

void MockArchive::add_capture(const std::string& url, Capture c)
{
    std::lock_guard lock(m_mutex);
    m_captures[url].push_back(std::move(c));
}

void MockArchive::set_closest(const std::string& url, const std::string& timestamp)
{
    std::lock_guard lock(m_mutex);
    m_forced_closest[url] = timestamp;
}

void MockArchive::fail_next(const std::string& path_prefix, unsigned n, int status)
{
    std::lock_guard lock(m_mutex);
    m_failures.push_back({path_prefix, n, status});
}

void MockArchive::take_down(const std::string& url)
{
    std::lock_guard lock(m_mutex);
    m_taken_down[url] = true;
}

void MockArchive::load_directory(const std::filesystem::path& dir)
{
    auto text = gzip::read_file(dir / "archive.tsv");
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto f = split(line, '\t');
        if (f.size() != 5) {
            throw LineError(line_no, "archive.tsv needs 5 columns");
        }
        Capture c;
        c.timestamp = std::string(f[1]);
        c.status = std::atoi(std::string(f[2]).c_str());
        c.body = gzip::read_file(dir / std::string(f[3]));
        c.content_type = std::string(f[4]);
        add_capture(std::string(f[0]), std::move(c));
    }
}

std::optional<MockArchive::Capture> MockArchive::closest(const std::string& url,
                                                         const std::string& target) const
{
    auto it = m_captures.find(url);
    if (it == m_captures.end() || it->second.empty()) {
        return std::nullopt;
    }
    if (auto f = m_forced_closest.find(url); f != m_forced_closest.end()) {
        for (const auto& c : it->second) {
            if (c.timestamp == f->second) {
                return c;
            }
        }
    }
    auto t = parse_ts14(target).value_or(0);
    const Capture* best = nullptr;
    std::int64_t best_gap = 0;
    for (const auto& c : it->second) {
        auto gap = std::llabs(parse_ts14(c.timestamp).value_or(0) - t);
        if (best == nullptr || gap < best_gap) {
            best = &c;
            best_gap = gap;
        }
    }
    return *best;
}

std::optional<int> MockArchive::take_failure(const std::string& path)
{
    for (auto& f : m_failures) {
        if (f.remaining > 0 && path.rfind(f.prefix, 0) == 0) {
            --f.remaining;
            return f.status;
        }
    }
    return std::nullopt;
}

void MockArchive::start(int port)
{
    m_server = std::make_unique<httplib::Server>();
    auto& srv = *m_server;

    srv.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(m_mutex);
        m_log.push_back({req.path, req.get_header_value("Host"), std::chrono::steady_clock::now()});
        if (auto st = take_failure(req.path)) {
            res.status = *st;
            res.set_content("injected failure", "text/plain");
            return httplib::Server::HandlerResponse::Handled;
        }
        return httplib::Server::HandlerResponse::Unhandled;
    });

    srv.Get("/wayback/available", [this](const httplib::Request& req, httplib::Response& res) {
        auto url = req.get_param_value("url");
        auto target = req.get_param_value("timestamp");
        nlohmann::json doc;
        doc["url"] = url;
        doc["archived_snapshots"] = nlohmann::json::object();
        std::lock_guard lock(m_mutex);
        if (auto c = closest(url, target.empty() ? "20060301000000" : target)) {
            doc["archived_snapshots"]["closest"] = {
                {"available", c->available},
                {"url", base_url() + "/web/" + c->timestamp + "/" + url},
                {"timestamp", c->timestamp},
                {"status", std::to_string(c->status)},
            };
        }
        res.set_content(doc.dump(), "application/json");
    });

    srv.Get(R"(/web/(\d+)(id_)?/(.*))", [this](const httplib::Request& req, httplib::Response& res) {
        std::string ts = req.matches[1];
        bool raw = req.matches[2].matched;
        // The undecoded request target keeps the embedded URL's query string.
        std::string_view target = req.target;
        auto prefix = "/web/" + ts + (raw ? "id_/" : "/");
        std::string url(target.substr(std::min(prefix.size(), target.size())));
        std::lock_guard lock(m_mutex);
        auto it = m_captures.find(url);
        if (it == m_captures.end() || m_taken_down[url]) {
            res.status = 404;
            return;
        }
        for (const auto& c : it->second) {
            if (c.timestamp == ts) {
                if (raw) {
                    res.set_content(c.body, c.content_type);
                } else {
                    res.set_content("<!-- BEGIN WAYBACK TOOLBAR INSERT --><div id=\"wm-ipp\">banner</div>"
                                    "<!-- END WAYBACK TOOLBAR INSERT -->" + c.body,
                                    c.content_type);
                }
                return;
            }
        }
        res.status = 404;
    });

    if (port == 0) {
        m_port = srv.bind_to_any_port("127.0.0.1");
    } else {
        m_port = srv.bind_to_port("127.0.0.1", port) ? port : -1;
    }
    if (m_port <= 0) {
        throw std::runtime_error("mock archive could not bind");
    }
    m_thread = std::thread([this] { m_server->listen_after_bind(); });
    m_server->wait_until_ready();
}

void MockArchive::stop()
{
    if (m_server) {
        m_server->stop();
    }
    if (m_thread.joinable()) {
        m_thread.join();
    }
    m_server.reset();
}

std::string MockArchive::base_url() const { return "http://127.0.0.1:" + std::to_string(m_port); }

std::vector<MockArchive::Request> MockArchive::requests() const
{
    std::lock_guard lock(m_mutex);
    return m_log;
}

void MockArchive::clear_requests()
{
    std::lock_guard lock(m_mutex);
    m_log.clear();
}

}  // namespace snapcorpus::archive
