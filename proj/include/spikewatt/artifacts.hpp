#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "spikewatt/error.hpp"

namespace spikewatt {

/// Files staged in memory and published together.
///
/// commit() writes each file to a temporary name in the target directory,
/// then renames them into place. If any step fails, every temporary and
/// every already-renamed file is removed, so a failed command leaves no
/// partial artifacts behind.
class ArtifactSet {
public:
    explicit ArtifactSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void add(std::string name, std::string content) { staged_.emplace_back(std::move(name), std::move(content)); }

    std::vector<std::filesystem::path> commit() {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory '" + dir_.string() + "'");

        std::vector<fs::path> temps;
        std::vector<fs::path> published;
        auto rollback = [&] {
            std::error_code ignored;
            for (const auto& p : temps) fs::remove(p, ignored);
            for (const auto& p : published) fs::remove(p, ignored);
        };

        for (const auto& [name, content] : staged_) {
            const auto tmp = dir_ / ("." + name + ".partial");
            temps.push_back(tmp);
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out.write(content.data(), static_cast<std::streamsize>(content.size()));
            out.close();
            if (!out) {
                rollback();
                throw IoError("cannot write '" + (dir_ / name).string() + "'");
            }
        }
        for (std::size_t i = 0; i < staged_.size(); ++i) {
            const auto target = dir_ / staged_[i].first;
            fs::rename(temps[i], target, ec);
            if (ec) {
                rollback();
                throw IoError("cannot publish '" + target.string() + "': " + ec.message());
            }
            published.push_back(target);
        }
        staged_.clear();
        return published;
    }

private:
    std::filesystem::path dir_;
    std::vector<std::pair<std::string, std::string>> staged_;
};

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
    return content;
}

} // namespace spikewatt
