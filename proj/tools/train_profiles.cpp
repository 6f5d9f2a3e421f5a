// Regenerates bundled language profiles from the seed texts.
#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/gzip.hpp"
#include "snapcorpus/langid/profile.hpp"

namespace fs = std::filesystem;
using namespace snapcorpus;

int main(int argc, char** argv)
{
    CLI::App app{"Train character n-gram language profiles"};
    std::string seeds = std::string(SNAPCORPUS_DATA_DIR) + "/langid/seeds";
    std::string out = std::string(SNAPCORPUS_DATA_DIR) + "/langid/profiles";
    std::size_t k = langid::k_profile_size;
    app.add_option("--seeds", seeds, "directory of <lang>.txt samples");
    app.add_option("--out", out, "profile output directory");
    app.add_option("-k", k, "n-grams kept per profile");
    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(seeds)) {
            if (e.path().extension() == ".txt") {
                files.push_back(e.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            auto lang = f.stem().string();
            auto p = langid::train_profile(gzip::read_file(f), lang, k);
            langid::write_profile(p, fs::path(out) / (lang + ".tsv"));
            std::cout << lang << "\t" << p.size() << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "train_profiles: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
