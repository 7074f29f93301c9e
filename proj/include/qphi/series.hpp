#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "qphi/errors.hpp"
#include "qphi/rings.hpp"

namespace qphi {

/// Truncated formal power series over a coefficient ring R.
///
/// A Series of order N stores exactly the N+1 coefficients of q^0 .. q^N;
/// every operation discards anything beyond the smallest order involved,
/// so all stored coefficients are exact in the ring. Series are immutable
/// once constructed and safe to share across threads.
template <typename R>
class Series {
public:
    using ring_type = R;
    using elem = typename R::elem;

    Series(R ring, std::int64_t order)
        : ring_(std::move(ring)), coeffs_(checked_size(order), ring_.zero()) {}

    Series(R ring, std::vector<elem> coeffs) : ring_(std::move(ring)), coeffs_(std::move(coeffs)) {
        require(!coeffs_.empty(), "Series needs at least the q^0 coefficient");
    }

    static Series constant(R ring, std::int64_t order, elem value) {
        Series s(ring, order);
        s.coeffs_[0] = std::move(value);
        return s;
    }

    static Series one(R ring, std::int64_t order) {
        return constant(ring, order, ring.one());
    }

    /// c * q^power; a power beyond the order simply truncates to zero.
    static Series monomial(R ring, std::int64_t order, elem c, std::int64_t power) {
        require(power >= 0, "monomial power must be nonnegative");
        Series s(ring, order);
        if (power <= order) s.coeffs_[static_cast<std::size_t>(power)] = std::move(c);
        return s;
    }

    /// Convenience for tests: listed coefficients from q^0 up, zero-padded.
    static Series of(R ring, std::int64_t order, std::initializer_list<long long> values) {
        require(static_cast<std::int64_t>(values.size()) <= order + 1,
                "more coefficients than order+1");
        Series s(ring, order);
        std::size_t i = 0;
        for (long long v : values) s.coeffs_[i++] = s.ring_.from_int(v);
        return s;
    }

    std::int64_t order() const { return static_cast<std::int64_t>(coeffs_.size()) - 1; }
    const R& ring() const { return ring_; }

    const elem& operator[](std::int64_t n) const {
        require(n >= 0 && n <= order(), "coefficient index out of range");
        return coeffs_[static_cast<std::size_t>(n)];
    }

    const std::vector<elem>& coefficients() const { return coeffs_; }

    bool is_zero() const {
        for (const elem& c : coeffs_)
            if (!ring_.is_zero(c)) return false;
        return true;
    }

    friend bool operator==(const Series& a, const Series& b) {
        if (!a.ring_.same(b.ring_) || a.coeffs_.size() != b.coeffs_.size()) return false;
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            if (!a.ring_.equal(a.coeffs_[i], b.coeffs_[i])) return false;
        return true;
    }
    friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

private:
    static std::size_t checked_size(std::int64_t order) {
        require(order >= 0, "Series order must be nonnegative");
        return static_cast<std::size_t>(order) + 1;
    }

    R ring_;
    std::vector<elem> coeffs_;
};

namespace detail {
template <typename R>
void require_same_ring(const Series<R>& a, const Series<R>& b) {
    if (!a.ring().same(b.ring()))
        throw contract_error("series operate in different coefficient rings");
}
}  // namespace detail

template <typename R>
Series<R> truncate(const Series<R>& a, std::int64_t new_order) {
    require(new_order >= 0 && new_order <= a.order(), "truncate: bad order");
    std::vector<typename R::elem> c(a.coefficients().begin(),
                                    a.coefficients().begin() + new_order + 1);
    return Series<R>(a.ring(), std::move(c));
}

template <typename R>
Series<R> add(const Series<R>& a, const Series<R>& b) {
    detail::require_same_ring(a, b);
    const std::int64_t n = std::min(a.order(), b.order());
    std::vector<typename R::elem> c(static_cast<std::size_t>(n) + 1);
    for (std::int64_t i = 0; i <= n; ++i)
        c[static_cast<std::size_t>(i)] = a.ring().add(a[i], b[i]);
    return Series<R>(a.ring(), std::move(c));
}

template <typename R>
Series<R> sub(const Series<R>& a, const Series<R>& b) {
    detail::require_same_ring(a, b);
    const std::int64_t n = std::min(a.order(), b.order());
    std::vector<typename R::elem> c(static_cast<std::size_t>(n) + 1);
    for (std::int64_t i = 0; i <= n; ++i)
        c[static_cast<std::size_t>(i)] = a.ring().sub(a[i], b[i]);
    return Series<R>(a.ring(), std::move(c));
}

template <typename R>
Series<R> negate(const Series<R>& a) {
    std::vector<typename R::elem> c(a.coefficients().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.ring().neg(a.coefficients()[i]);
    return Series<R>(a.ring(), std::move(c));
}

namespace detail {

template <typename R>
std::int64_t count_nonzero(const Series<R>& a, std::int64_t upto, std::int64_t stop_after) {
    std::int64_t n = 0;
    for (std::int64_t i = 0; i <= upto && n <= stop_after; ++i)
        if (!a.ring().is_zero(a[i])) ++n;
    return n;
}

// result[j + t] += v * other[t] for one sparse coefficient (j, v).
template <typename R>
void add_shifted(std::vector<typename R::elem>& out, const R& ring, std::int64_t j,
                 const typename R::elem& v, const Series<R>& other, std::int64_t n) {
    for (std::int64_t t = 0; j + t <= n; ++t) {
        auto& slot = out[static_cast<std::size_t>(j + t)];
        slot = ring.add(slot, ring.mul(v, other[t]));
    }
}

}  // namespace detail

/// Cauchy product truncated to min(order(a), order(b)). Plain O(N^2)
/// convolution; series with at most a few nonzero terms get a cheap
/// shifted-add path instead.
template <typename R>
Series<R> mul(const Series<R>& a, const Series<R>& b) {
    detail::require_same_ring(a, b);
    const R& ring = a.ring();
    const std::int64_t n = std::min(a.order(), b.order());

    constexpr std::int64_t kSparseCutoff = 4;
    const std::int64_t nza = detail::count_nonzero(a, n, kSparseCutoff);
    const std::int64_t nzb = detail::count_nonzero(b, n, kSparseCutoff);
    if (nza <= kSparseCutoff || nzb <= kSparseCutoff) {
        const bool a_sparse = nza <= nzb;
        const Series<R>& s = a_sparse ? a : b;
        const Series<R>& d = a_sparse ? b : a;
        std::vector<typename R::elem> c(static_cast<std::size_t>(n) + 1, ring.zero());
        for (std::int64_t j = 0; j <= n; ++j)
            if (!ring.is_zero(s[j])) detail::add_shifted(c, ring, j, s[j], d, n);
        return Series<R>(ring, std::move(c));
    }

    std::vector<typename R::elem> c(static_cast<std::size_t>(n) + 1);
    for (std::int64_t i = 0; i <= n; ++i) {
        auto acc = ring.make_accumulator(i + 1);
        for (std::int64_t j = 0; j <= i; ++j) acc.addmul(a[j], b[i - j]);
        c[static_cast<std::size_t>(i)] = ring.finish(std::move(acc));
    }
    return Series<R>(ring, std::move(c));
}

template <typename R>
Series<R> scale(const Series<R>& a, const typename R::elem& c) {
    std::vector<typename R::elem> out(a.coefficients().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.ring().mul(c, a.coefficients()[i]);
    return Series<R>(a.ring(), std::move(out));
}

/// Scale by a plain integer, mapped through the ring (so negative values
/// are safe in modular rings too).
template <typename R>
Series<R> scale_int(const Series<R>& a, long long c) {
    return scale(a, a.ring().from_int(c));
}

/// a^k by repeated squaring; pow(a, 0) = 1 at the same order.
template <typename R>
Series<R> pow(const Series<R>& a, unsigned long long k) {
    Series<R> result = Series<R>::one(a.ring(), a.order());
    if (k == 0) return result;
    Series<R> base = a;
    while (true) {
        if (k & 1ull) result = mul(result, base);
        k >>= 1;
        if (k == 0) break;
        base = mul(base, base);
    }
    return result;
}

/// Multiplicative inverse through the truncation order. Requires the
/// constant term to be a unit; uses the recurrence
///   b_0 = a_0^{-1},  b_n = -a_0^{-1} * sum_{j=1..n} a_j b_{n-j}.
template <typename R>
Series<R> inverse(const Series<R>& a) {
    const R& ring = a.ring();
    typename R::elem head_inv;
    if (!ring.try_invert(a[0], head_inv))
        throw non_invertible_error("inverse: constant term " + ring.to_decimal(a[0]) +
                                   " is not a unit in " + ring.name());
    const std::int64_t n = a.order();
    std::vector<typename R::elem> b(static_cast<std::size_t>(n) + 1, ring.zero());
    b[0] = head_inv;
    for (std::int64_t i = 1; i <= n; ++i) {
        auto acc = ring.make_accumulator(i);
        for (std::int64_t j = 1; j <= i; ++j) acc.addmul(a[j], b[static_cast<std::size_t>(i - j)]);
        b[static_cast<std::size_t>(i)] = ring.mul(ring.neg(ring.finish(std::move(acc))), head_inv);
    }
    return Series<R>(ring, std::move(b));
}

/// q -> q^m, result carried to an explicit order. Exactness requires
/// out_order < m*(order(a)+1): every requested coefficient is then either
/// a known coefficient of a or a structural zero.
template <typename R>
Series<R> substitute_power_to(const Series<R>& a, std::int64_t m, std::int64_t out_order) {
    require(m >= 1, "substitute_power: m must be >= 1");
    require(out_order >= 0, "substitute_power: order must be >= 0");
    require(out_order <= m * (a.order() + 1) - 1,
            "substitute_power: requested order exceeds known coefficients");
    std::vector<typename R::elem> c(static_cast<std::size_t>(out_order) + 1, a.ring().zero());
    for (std::int64_t t = 0; t <= a.order() && m * t <= out_order; ++t)
        c[static_cast<std::size_t>(m * t)] = a[t];
    return Series<R>(a.ring(), std::move(c));
}

/// q -> q^m keeping the input's truncation order.
template <typename R>
Series<R> substitute_power(const Series<R>& a, std::int64_t m) {
    return substitute_power_to(a, m, a.order());
}

/// q -> -q: coefficient n picks up a factor (-1)^n.
template <typename R>
Series<R> negate_variable(const Series<R>& a) {
    std::vector<typename R::elem> c(a.coefficients().size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = (i % 2 == 1) ? a.ring().neg(a.coefficients()[i]) : a.coefficients()[i];
    return Series<R>(a.ring(), std::move(c));
}

/// q^r * a with the truncation order raised by r: every coefficient of the
/// result is still known, so nothing is lost.
template <typename R>
Series<R> shift_up(const Series<R>& a, std::int64_t r) {
    require(r >= 0, "shift_up: shift must be nonnegative");
    std::vector<typename R::elem> c(a.coefficients().size() + static_cast<std::size_t>(r),
                                    a.ring().zero());
    for (std::size_t i = 0; i < a.coefficients().size(); ++i)
        c[i + static_cast<std::size_t>(r)] = a.coefficients()[i];
    return Series<R>(a.ring(), std::move(c));
}

/// Coefficients on the progression mn + r, reindexed by n: the classical
/// "extract q^{mn+r}, divide by q^r, replace q^m by q" step.
template <typename R>
Series<R> extract_progression(const Series<R>& a, std::int64_t m, std::int64_t r) {
    require(m >= 1, "extract_progression: m must be >= 1");
    require(r >= 0 && r < m, "extract_progression: need 0 <= r < m");
    require(r <= a.order(), "extract_progression: residue exceeds series order");
    const std::int64_t out = (a.order() - r) / m;
    std::vector<typename R::elem> c(static_cast<std::size_t>(out) + 1);
    for (std::int64_t t = 0; t <= out; ++t) c[static_cast<std::size_t>(t)] = a[m * t + r];
    return Series<R>(a.ring(), std::move(c));
}

/// Entrywise reduction of an exact-integer series into Z/M.
inline Series<ModRing> reduce_mod(const Series<ZRing>& a, std::uint64_t modulus) {
    ModRing ring(modulus);
    std::vector<ModRing::elem> c(a.coefficients().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = ring.from_mpz(a.coefficients()[i]);
    return Series<ModRing>(ring, std::move(c));
}

template <typename R>
bool equals_to_order(const Series<R>& a, const Series<R>& b, std::int64_t n) {
    detail::require_same_ring(a, b);
    require(n >= 0 && n <= a.order() && n <= b.order(),
            "equals_to_order: order exceeds a series");
    for (std::int64_t i = 0; i <= n; ++i)
        if (!a.ring().equal(a[i], b[i])) return false;
    return true;
}

/// First index in [0, min order] where a and b differ, or -1.
template <typename R>
std::int64_t first_difference(const Series<R>& a, const Series<R>& b) {
    detail::require_same_ring(a, b);
    const std::int64_t n = std::min(a.order(), b.order());
    for (std::int64_t i = 0; i <= n; ++i)
        if (!a.ring().equal(a[i], b[i])) return i;
    return -1;
}

template <typename R>
Series<R> operator+(const Series<R>& a, const Series<R>& b) { return add(a, b); }
template <typename R>
Series<R> operator-(const Series<R>& a, const Series<R>& b) { return sub(a, b); }
template <typename R>
Series<R> operator-(const Series<R>& a) { return negate(a); }
template <typename R>
Series<R> operator*(const Series<R>& a, const Series<R>& b) { return mul(a, b); }

using SeriesZ = Series<ZRing>;
using SeriesMod = Series<ModRing>;

}  // namespace qphi
