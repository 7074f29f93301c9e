#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qphi/series.hpp"

namespace qphi {

// Series interchange format:
//   {"ring": "Z" | {"mod": M}, "order": N, "coeffs": ["1", "36", ...]}
// Coefficients are decimal strings so values beyond 64 bits survive.

inline nlohmann::ordered_json ring_to_json(const ZRing&) { return "Z"; }
inline nlohmann::ordered_json ring_to_json(const ModRing& r) {
    return nlohmann::ordered_json{{"mod", r.modulus()}};
}

template <typename R>
nlohmann::ordered_json series_to_json(const Series<R>& s) {
    nlohmann::ordered_json j;
    j["ring"] = ring_to_json(s.ring());
    j["order"] = s.order();
    auto coeffs = nlohmann::ordered_json::array();
    for (const auto& c : s.coefficients()) coeffs.push_back(s.ring().to_decimal(c));
    j["coeffs"] = std::move(coeffs);
    return j;
}

namespace detail {
template <typename R>
Series<R> series_from_json_with_ring(const nlohmann::json& j, const R& ring) {
    const std::int64_t order = j.at("order").get<std::int64_t>();
    const auto& coeffs = j.at("coeffs");
    if (!coeffs.is_array() || static_cast<std::int64_t>(coeffs.size()) != order + 1)
        throw contract_error("series JSON: coeffs must hold order+1 entries");
    std::vector<typename R::elem> c;
    c.reserve(coeffs.size());
    for (const auto& v : coeffs) c.push_back(ring.from_decimal(v.template get<std::string>()));
    return Series<R>(ring, std::move(c));
}
}  // namespace detail

inline bool json_ring_is_exact(const nlohmann::json& j) {
    return j.at("ring").is_string() && j.at("ring").get<std::string>() == "Z";
}

inline Series<ZRing> series_from_json_exact(const nlohmann::json& j) {
    if (!json_ring_is_exact(j)) throw contract_error("series JSON: expected ring \"Z\"");
    return detail::series_from_json_with_ring(j, ZRing{});
}

inline Series<ModRing> series_from_json_mod(const nlohmann::json& j) {
    if (json_ring_is_exact(j)) throw contract_error("series JSON: expected a modular ring");
    return detail::series_from_json_with_ring(
        j, ModRing(j.at("ring").at("mod").get<std::uint64_t>()));
}

}  // namespace qphi
