#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "qphi/cache.hpp"
#include "qphi/frobenius.hpp"

using namespace qphi;

namespace {

const ZRing Z;

// Plain nested enumeration over Z^{k-1}, the independent check on the DP.
std::vector<std::uint64_t> naive_quadform(int colors, std::int64_t order) {
    std::vector<std::uint64_t> out(static_cast<std::size_t>(order) + 1, 0);
    const int vars = colors - 1;
    if (vars == 0) {
        out[0] = 1;
        return out;
    }
    std::int64_t bound = 0;
    while (bound * bound <= 2 * order) ++bound;  // |m_i| <= sqrt(2*order)
    std::vector<std::int64_t> m(vars, -bound);
    while (true) {
        std::int64_t sq = 0, cross = 0;
        for (int i = 0; i < vars; ++i) sq += m[i] * m[i];
        for (int i = 0; i < vars; ++i)
            for (int j = i + 1; j < vars; ++j) cross += m[i] * m[j];
        const std::int64_t q = sq + cross;
        if (q >= 0 && q <= order) ++out[static_cast<std::size_t>(q)];
        int pos = 0;
        while (pos < vars && m[pos] == bound) m[pos++] = -bound;
        if (pos == vars) break;
        ++m[pos];
    }
    return out;
}

}  // namespace

TEST_CASE("quadform counts at small order") {
    auto counts = quadform_counts(6, 2);
    CHECK(counts[0] == 1);
    CHECK(counts[1] == 30);
    CHECK(counts[2] == 90);

    // k=2 is plain squares with two signs
    auto k2 = quadform_counts(2, 9);
    CHECK(k2[0] == 1);
    CHECK(k2[1] == 2);
    CHECK(k2[2] == 0);
    CHECK(k2[4] == 2);
    CHECK(k2[9] == 2);

    // k=1 is the empty form
    auto k1 = quadform_counts(1, 5);
    CHECK(k1 == std::vector<std::uint64_t>{1, 0, 0, 0, 0, 0});
}

TEST_CASE("quadform DP equals naive enumeration") {
    for (int k = 1; k <= 6; ++k) {
        CHECK(quadform_counts(k, 30) == naive_quadform(k, 30));
    }
    // the state (2,2,2,-2,-2) with Q=12 exercises partial sums beyond
    // sqrt(2N); the DP prune must keep it
    CHECK(quadform_counts(6, 12) == naive_quadform(6, 12));
}

TEST_CASE("quadform contracts") {
    CHECK_THROWS_AS(quadform_counts(0, 5), contract_error);
    CHECK_THROWS_AS(quadform_counts(9, 5), contract_error);
    CHECK_THROWS_AS(quadform_counts(6, -1), contract_error);
}

TEST_CASE("cphi oracle values") {
    auto c6 = cphi_oracle(6, 16);
    CHECK(c6[0] == 1);
    CHECK(c6[1] == 36);
    CHECK(c6[2] == 297);
    CHECK(c6[16] == 593915814);  // = 2 * 3^5 * 1222049

    auto c1 = cphi_oracle(1, 6);
    CHECK(c1 == SeriesZ::of(Z, 6, {1, 1, 2, 3, 5, 7, 11}));
}

TEST_CASE("cphi oracle coefficients stay positive") {
    for (int k = 1; k <= 6; ++k) {
        auto c = cphi_oracle(k, 40);
        for (std::int64_t n = 0; n <= 40; ++n) CHECK(c[n] > 0);
    }
}

TEST_CASE("closed form equals the oracle") {
    const std::int64_t n = 120;
    CHECK(cphi6_gen(Z, n) == cphi_oracle(Z, 6, n));
    // the DP at a larger order, where pruning actually bites
    const ModRing m(2187);
    CHECK(cphi6_gen(m, 600) == cphi_oracle(m, 6, 600));
}

TEST_CASE("known congruence spot checks") {
    auto c = cphi_oracle(6, 61);
    CHECK(c[2] % 27 == 0);
    CHECK(c[61] % 81 == 0);
    CHECK(c[61] % 243 != 0);
    CHECK(c[61] == mpz_class("701612098458871") * 19 * 81 * 4);
}

TEST_CASE("3n+1 closed form") {
    auto g = cphi6_3n1(Z, 5);
    CHECK(g[0] == 36);
    CHECK(g[5] == 593915814);  // cphi6(16) through the 3n+1 subsequence
}

TEST_CASE("3n+1 closed form equals the dissected generating function") {
    const std::int64_t n = 150;
    auto lhs = cphi6_3n1(Z, n);
    auto rhs = extract_progression(cphi6_gen(Z, 3 * n + 1), 3, 1);
    CHECK(lhs == rhs);

    const ModRing m(2187);
    CHECK(cphi6_3n1(m, 300) == extract_progression(cphi6_gen(m, 901), 3, 1));
}

TEST_CASE("flipping any closed-form constant changes the series") {
    const std::int64_t n = 24;
    const auto reference = cphi6_3n1(Z, n);
    int checked = 0;
    for (long long Cphi63n1Constants::*field :
         {&Cphi63n1Constants::outer, &Cphi63n1Constants::group1_a, &Cphi63n1Constants::group1_b,
          &Cphi63n1Constants::group2_a, &Cphi63n1Constants::group2_b,
          &Cphi63n1Constants::group2_c, &Cphi63n1Constants::group3_a,
          &Cphi63n1Constants::group3_b}) {
        Cphi63n1Constants mutated;
        mutated.*field -= 1;
        CHECK(cphi6_3n1(Z, n, mutated) != reference);
        ++checked;
    }
    CHECK(checked == 8);
}

TEST_CASE("modular expansion equals exact expansion reduced") {
    const std::int64_t n = 300;
    auto exact = cphi_oracle(Z, 6, n);
    auto exact_gen = cphi6_gen(Z, n);
    for (std::uint64_t m : {4ull, 2187ull}) {
        CHECK(cphi_oracle(ModRing(m), 6, n) == reduce_mod(exact, m));
        CHECK(cphi6_gen(ModRing(m), n) == reduce_mod(exact_gen, m));
    }
}

TEST_CASE("series cache round-trips and shrugs off corruption") {
    const auto dir = std::filesystem::temp_directory_path() / "qphi-cache-test";
    std::filesystem::remove_all(dir);
    SeriesCache cache(dir);

    auto s = cphi_oracle(Z, 6, 30);
    CHECK_FALSE(cache.load("cphi6_oracle", Z, 30).has_value());
    cache.store("cphi6_oracle", s);
    auto loaded = cache.load("cphi6_oracle", Z, 30);
    REQUIRE(loaded.has_value());
    CHECK(*loaded == s);

    // same id, different order or ring: miss
    CHECK_FALSE(cache.load("cphi6_oracle", Z, 29).has_value());
    CHECK_FALSE(cache.load("cphi6_oracle", ModRing(27), 30).has_value());

    // corrupt every cached file; loads must fail cleanly, results unchanged
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::ofstream out(entry.path());
        out << "{definitely not json";
    }
    CHECK_FALSE(cache.load("cphi6_oracle", Z, 30).has_value());
    std::filesystem::remove_all(dir);
}
