#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace snapcorpus::archive {

/// An in-process stand-in for the availability API and raw capture serving,
/// with failure injection and a request log for auditing client behaviour.
///
///   GET /wayback/available?url=U&timestamp=T
///   GET /web/<ts>id_/<url>   raw payload
///   GET /web/<ts>/<url>      payload wrapped in banner markup
class MockArchive {
  public:
    struct Capture {
        std::string timestamp;
        int status = 200;
        bool available = true;
        std::string body;
        std::string content_type = "text/html";
    };

    struct Request {
        std::string path;
        std::string host;
        std::chrono::steady_clock::time_point at;
    };

    MockArchive();
    ~MockArchive();
    MockArchive(const MockArchive&) = delete;
    MockArchive& operator=(const MockArchive&) = delete;

    void add_capture(const std::string& url, Capture c);

    /// Forces the capture reported as closest for `url`, whatever the target.
    void set_closest(const std::string& url, const std::string& timestamp);

    /// The next `n` requests whose path starts with `path_prefix` get `status`.
    void fail_next(const std::string& path_prefix, unsigned n, int status = 503);

    /// Captures stop being served (availability still reports them).
    void take_down(const std::string& url);

    /// Loads captures from <dir>/archive.tsv with rows
    /// url \t timestamp \t status \t relative_file \t content_type.
    void load_directory(const std::filesystem::path& dir);

    /// Binds to 127.0.0.1 (port 0 = any free port) and serves on a thread.
    void start(int port = 0);
    void stop();

    int port() const noexcept { return m_port; }
    std::string base_url() const;
    std::string availability_endpoint() const { return base_url() + "/wayback/available"; }

    std::vector<Request> requests() const;
    void clear_requests();

  private:
    struct Failure {
        std::string prefix;
        unsigned remaining;
        int status;
    };

    std::optional<Capture> closest(const std::string& url, const std::string& target) const;
    std::optional<int> take_failure(const std::string& path);

    mutable std::mutex m_mutex;
    std::map<std::string, std::vector<Capture>> m_captures;
    std::map<std::string, std::string> m_forced_closest;
    std::map<std::string, bool> m_taken_down;
    std::vector<Failure> m_failures;
    std::vector<Request> m_log;
    std::unique_ptr<httplib::Server> m_server;
    std::thread m_thread;
    int m_port = 0;
};

}  // namespace snapcorpus::archive
