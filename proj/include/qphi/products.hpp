#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qphi/series.hpp"

namespace qphi {

/// One factor (q^a; q^b)_inf^e of an eta quotient, canonical form 1 <= a <= b.
struct ProductFactor {
    std::int64_t offset;    // a
    std::int64_t step;      // b
    long long exponent;     // e, nonzero after canonicalization
    friend bool operator==(const ProductFactor&, const ProductFactor&) = default;
};

/// A formal eta quotient: finite list of Pochhammer factors with integer
/// exponents. Canonicalized eagerly (sorted by (step, offset), identical
/// (a, b) merged, zero exponents dropped) so equality is structural.
class ProductSpec {
public:
    ProductSpec() = default;

    ProductSpec(std::initializer_list<std::array<long long, 3>> factors) {
        std::vector<ProductFactor> fs;
        for (const auto& f : factors)
            fs.push_back(ProductFactor{f[0], f[1], f[2]});
        assign(std::move(fs));
    }

    explicit ProductSpec(std::vector<ProductFactor> factors) { assign(std::move(factors)); }

    const std::vector<ProductFactor>& factors() const { return factors_; }
    bool empty() const { return factors_.empty(); }

    ProductSpec inverted() const {
        std::vector<ProductFactor> fs = factors_;
        for (auto& f : fs) f.exponent = -f.exponent;
        return ProductSpec(std::move(fs));
    }

    /// Pointwise product of two quotients (factor lists concatenated, then merged).
    friend ProductSpec operator*(const ProductSpec& a, const ProductSpec& b) {
        std::vector<ProductFactor> fs = a.factors_;
        fs.insert(fs.end(), b.factors_.begin(), b.factors_.end());
        return ProductSpec(std::move(fs));
    }

    friend bool operator==(const ProductSpec&, const ProductSpec&) = default;

    nlohmann::ordered_json to_json() const {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& f : factors_)
            arr.push_back(nlohmann::ordered_json::array({f.offset, f.step, f.exponent}));
        return arr;
    }

    static ProductSpec from_json(const nlohmann::json& j) {
        require(j.is_array(), "ProductSpec JSON must be an array of [a,b,e] triples");
        std::vector<ProductFactor> fs;
        for (const auto& t : j) {
            require(t.is_array() && t.size() == 3, "ProductSpec factor must be [a,b,e]");
            fs.push_back(ProductFactor{t[0].get<std::int64_t>(), t[1].get<std::int64_t>(),
                                       t[2].get<long long>()});
        }
        return ProductSpec(std::move(fs));
    }

private:
    void assign(std::vector<ProductFactor> fs) {
        std::map<std::pair<std::int64_t, std::int64_t>, long long> merged;
        for (const auto& f : fs) {
            require(f.offset >= 1 && f.offset <= f.step,
                    "ProductSpec factor needs 1 <= a <= b");
            merged[{f.step, f.offset}] += f.exponent;
        }
        factors_.clear();
        for (const auto& [key, e] : merged)
            if (e != 0) factors_.push_back(ProductFactor{key.second, key.first, e});
    }

    std::vector<ProductFactor> factors_;
};

namespace detail {

// Multiply in place by (1 - q^d); one O(N) backward pass.
template <typename R>
void apply_factor(std::vector<typename R::elem>& c, const R& ring, std::int64_t d) {
    for (std::int64_t i = static_cast<std::int64_t>(c.size()) - 1; i >= d; --i)
        c[static_cast<std::size_t>(i)] = ring.sub(c[static_cast<std::size_t>(i)],
                                                  c[static_cast<std::size_t>(i - d)]);
}

}  // namespace detail

/// (q^a; q^b)_inf by direct factor multiplication: factors with a+kb > N
/// are invisible at order N and skipped.
template <typename R>
Series<R> pochhammer_factored(const R& ring, std::int64_t a, std::int64_t b, std::int64_t order) {
    require(a >= 1 && a <= b, "pochhammer needs 1 <= a <= b");
    require(order >= 0, "pochhammer: order must be >= 0");
    std::vector<typename R::elem> c(static_cast<std::size_t>(order) + 1, ring.zero());
    c[0] = ring.one();
    for (std::int64_t d = a; d <= order; d += b) detail::apply_factor(c, ring, d);
    return Series<R>(ring, std::move(c));
}

/// (q; q)_inf via the pentagonal number expansion
/// sum_{j in Z} (-1)^j q^{j(3j-1)/2}.
template <typename R>
Series<R> pochhammer_pentagonal(const R& ring, std::int64_t order) {
    require(order >= 0, "pochhammer: order must be >= 0");
    std::vector<typename R::elem> c(static_cast<std::size_t>(order) + 1, ring.zero());
    const auto set_term = [&](std::int64_t e, bool negative) {
        if (e <= order)
            c[static_cast<std::size_t>(e)] = negative ? ring.from_int(-1) : ring.one();
    };
    set_term(0, false);
    for (std::int64_t j = 1;; ++j) {
        const std::int64_t lo = j * (3 * j - 1) / 2;   // exponent for +j
        const std::int64_t hi = j * (3 * j + 1) / 2;   // exponent for -j
        if (lo > order) break;
        set_term(lo, j % 2 == 1);
        set_term(hi, j % 2 == 1);
    }
    return Series<R>(ring, std::move(c));
}

/// (q^a; q^b)_inf. Only (q; q)_inf takes the pentagonal fast path; both
/// routes are required to agree and the test suite checks that they do.
template <typename R>
Series<R> pochhammer(const R& ring, std::int64_t a, std::int64_t b, std::int64_t order) {
    if (a == 1 && b == 1) return pochhammer_pentagonal(ring, order);
    return pochhammer_factored(ring, a, b, order);
}

inline Series<ZRing> pochhammer(std::int64_t a, std::int64_t b, std::int64_t order) {
    return pochhammer(ZRing{}, a, b, order);
}

/// Finite product of Pochhammer powers. Negative exponents go through a
/// single inverse of the base, then repeated squaring.
template <typename R>
Series<R> eta_quotient(const R& ring, const ProductSpec& spec, std::int64_t order) {
    Series<R> result = Series<R>::one(ring, order);
    for (const auto& f : spec.factors()) {
        Series<R> base = pochhammer(ring, f.offset, f.step, order);
        if (f.exponent < 0) base = inverse(base);
        const unsigned long long e =
            f.exponent < 0 ? static_cast<unsigned long long>(-f.exponent)
                           : static_cast<unsigned long long>(f.exponent);
        result = mul(result, pow(base, e));
    }
    return result;
}

inline Series<ZRing> eta_quotient(const ProductSpec& spec, std::int64_t order) {
    return eta_quotient(ZRing{}, spec, order);
}

/// (q; q)_inf^3 as the closed sum  sum_{n>=0} (-1)^n (2n+1) q^{n(n+1)/2}.
template <typename R>
Series<R> jacobi_cube(const R& ring, std::int64_t order) {
    require(order >= 0, "jacobi_cube: order must be >= 0");
    std::vector<typename R::elem> c(static_cast<std::size_t>(order) + 1, ring.zero());
    for (std::int64_t n = 0;; ++n) {
        const std::int64_t e = n * (n + 1) / 2;
        if (e > order) break;
        c[static_cast<std::size_t>(e)] = ring.from_int(n % 2 == 0 ? (2 * n + 1) : -(2 * n + 1));
    }
    return Series<R>(ring, std::move(c));
}

inline Series<ZRing> jacobi_cube(std::int64_t order) { return jacobi_cube(ZRing{}, order); }

}  // namespace qphi
