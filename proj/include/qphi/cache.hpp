#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qphi/series_io.hpp"
#include "qphi/version.hpp"

namespace qphi {

/// Advisory on-disk cache for expensive series. A cached file is used only
/// when its engine version, id, ring and order all match; anything
/// unreadable is ignored and the series recomputed, so results never
/// depend on cache state.
class SeriesCache {
public:
    explicit SeriesCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    template <typename R>
    std::optional<Series<R>> load(const std::string& id, const R& ring, std::int64_t order) const {
        std::error_code ec;
        const auto path = file_path(id, ring, order);
        if (!std::filesystem::exists(path, ec) || ec) return std::nullopt;
        try {
            std::ifstream in(path);
            nlohmann::json j = nlohmann::json::parse(in);
            if (j.at("engine_version").get<std::string>() != kEngineVersion) return std::nullopt;
            if (j.at("id").get<std::string>() != id) return std::nullopt;
            Series<R> s = load_series(j.at("series"), ring);
            if (s.order() != order || !s.ring().same(ring)) return std::nullopt;
            return s;
        } catch (...) {
            return std::nullopt;  // advisory: corrupt or foreign files are skipped
        }
    }

    template <typename R>
    void store(const std::string& id, const Series<R>& s) const {
        try {
            std::error_code ec;
            std::filesystem::create_directories(dir_, ec);
            if (ec) return;
            nlohmann::ordered_json j;
            j["engine_version"] = std::string(kEngineVersion);
            j["id"] = id;
            j["series"] = series_to_json(s);
            const auto path = file_path(id, s.ring(), s.order());
            const auto tmp = path.string() + ".tmp";
            {
                std::ofstream out(tmp);
                out << j.dump(2) << '\n';
                if (!out) {
                    std::remove(tmp.c_str());
                    return;
                }
            }
            std::filesystem::rename(tmp, path, ec);
            if (ec) std::remove(tmp.c_str());
        } catch (...) {
            // best effort only
        }
    }

    const std::filesystem::path& directory() const { return dir_; }

private:
    template <typename R>
    std::filesystem::path file_path(const std::string& id, const R& ring,
                                    std::int64_t order) const {
        std::string version(kEngineVersion);
        for (char& c : version)
            if (c == '/') c = '-';
        std::ostringstream name;
        name << version << '_' << id << '_' << ring.name() << "_N" << order << ".json";
        return dir_ / name.str();
    }

    static Series<ZRing> load_series(const nlohmann::json& j, const ZRing&) {
        return series_from_json_exact(j);
    }
    static Series<ModRing> load_series(const nlohmann::json& j, const ModRing&) {
        return series_from_json_mod(j);
    }

    std::filesystem::path dir_;
};

}  // namespace qphi
