// Serves a fixture directory as a local archive for manual pipeline runs.

#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "snapcorpus/archive/mock_archive.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Local stand-in for the archive availability API and capture serving."};
    std::string dir;
    int port = 8089;
    app.add_option("--dir", dir, "directory holding archive.tsv and the capture files")->required();
    app.add_option("--port", port, "port on 127.0.0.1 (0 picks a free one)");
    CLI11_PARSE(app, argc, argv);

    snapcorpus::archive::MockArchive mock;
    try {
        mock.load_directory(dir);
        mock.start(port);
    } catch (const std::exception& e) {
        std::cerr << "mock_archive_server: " << e.what() << "\n";
        return 2;
    }
    std::cout << "serving " << dir << " at " << mock.base_url() << " (use --mock-endpoint " << mock.base_url()
              << ")" << std::endl;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop) {
        std::this_thread::sleep_for(std::chrono::milliseconds(200));
    }
    mock.stop();
    return 0;
}
