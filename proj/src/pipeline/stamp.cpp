#include "snapcorpus/pipeline/stamp.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "snapcorpus/common/hash.hpp"
#include "snapcorpus/common/text.hpp"

namespace snapcorpus::pipeline {

namespace fs = std::filesystem;

namespace {

std::string file_bytes(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void hash_file(Md5Builder& md5, const std::string& name, const fs::path& p)
{
    auto bytes = file_bytes(p);
    md5.update(name).update(std::string(1, '\0')).update(std::to_string(bytes.size())).update(std::string(1, '\0'));
    md5.update(bytes);
}

}  // namespace

std::string hash_inputs(const std::vector<fs::path>& roots)
{
    Md5Builder md5;
    for (const auto& root : roots) {
        if (fs::is_directory(root)) {
            std::vector<fs::path> files;
            for (const auto& e : fs::recursive_directory_iterator(root)) {
                if (e.is_regular_file()) {
                    files.push_back(e.path());
                }
            }
            std::sort(files.begin(), files.end());
            for (const auto& f : files) {
                hash_file(md5, fs::relative(f, root).generic_string(), f);
            }
        } else if (fs::exists(root)) {
            hash_file(md5, root.filename().string(), root);
        } else {
            md5.update(root.filename().string()).update("\nabsent\n");
        }
    }
    return md5.hex();
}

std::string format_stamp(const Stamp& s)
{
    std::string out = "version " + s.version + "\nconfig " + s.config_hash + "\ninputs " + s.input_hash + "\n";
    for (const auto& [name, hash] : s.outputs) {
        out += "output " + name + " " + hash + "\n";
    }
    return out;
}

Stamp read_stamp(const fs::path& path)
{
    Stamp s;
    if (!fs::exists(path)) {
        return s;
    }
    auto text = file_bytes(path);
    for (auto line : split(text, '\n')) {
        auto f = split(line, ' ');
        if (f.size() == 2 && f[0] == "version") {
            s.version = std::string(f[1]);
        } else if (f.size() == 2 && f[0] == "config") {
            s.config_hash = std::string(f[1]);
        } else if (f.size() == 2 && f[0] == "inputs") {
            s.input_hash = std::string(f[1]);
        } else if (f.size() == 3 && f[0] == "output") {
            s.outputs.emplace_back(std::string(f[1]), std::string(f[2]));
        }
    }
    return s;
}

Stamp make_stamp(const std::string& version, const std::string& config_hash, const std::string& input_hash,
                 const std::vector<fs::path>& outputs)
{
    Stamp s{version, config_hash, input_hash, {}};
    for (const auto& o : outputs) {
        s.outputs.emplace_back(o.filename().string(), hash_inputs({o}));
    }
    return s;
}

bool stamp_current(const fs::path& stamp_path, const std::string& version, const std::string& config_hash,
                   const std::string& input_hash, const std::vector<fs::path>& outputs)
{
    auto old = read_stamp(stamp_path);
    if (old.version.empty()) {
        return false;
    }
    for (const auto& o : outputs) {
        if (!fs::exists(o)) {
            return false;
        }
    }
    return old == make_stamp(version, config_hash, input_hash, outputs);
}

}  // namespace snapcorpus::pipeline
