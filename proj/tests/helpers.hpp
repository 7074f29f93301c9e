#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qphi/series.hpp"

namespace qphi_test {

inline qphi::SeriesZ random_series(std::mt19937_64& rng, std::int64_t order,
                                   long long lo = -1000, long long hi = 1000,
                                   bool unit_head = false) {
    qphi::ZRing ring;
    std::uniform_int_distribution<long long> dist(lo, hi);
    std::vector<mpz_class> c(static_cast<std::size_t>(order) + 1);
    for (auto& v : c) v = ring.from_int(dist(rng));
    if (unit_head) c[0] = (rng() & 1) ? 1 : -1;
    return qphi::SeriesZ(ring, std::move(c));
}

inline qphi::SeriesMod random_mod_series(std::mt19937_64& rng, std::uint64_t modulus,
                                         std::int64_t order, bool unit_head = false) {
    qphi::ModRing ring(modulus);
    std::vector<std::uint64_t> c(static_cast<std::size_t>(order) + 1);
    for (auto& v : c) v = rng() % modulus;
    if (unit_head) {
        std::uint64_t inv;
        do {
            c[0] = rng() % modulus;
        } while (!ring.try_invert(c[0], inv));
    }
    return qphi::SeriesMod(ring, std::move(c));
}

}  // namespace qphi_test
