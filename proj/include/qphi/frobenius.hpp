#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "qphi/expr.hpp"
#include "qphi/products.hpp"
#include "qphi/theta.hpp"

namespace qphi {

namespace detail {

inline std::int64_t isqrt_floor(std::int64_t v) {
    if (v <= 0) return 0;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s;
    if (__builtin_add_overflow(a, b, &s))
        throw engine_error("quadform_theta: lattice count overflows 64 bits");
    return s;
}

}  // namespace detail

/// Lattice-point counts for the (k-1)-variable quadratic form
///   Q(m) = sum m_i^2 + sum_{i<j} m_i m_j,
/// i.e. result[n] = #{ m in Z^{k-1} : Q(m) = n } for n = 0..order.
///
/// Uses 2Q = s^2 + t with s = sum m_i and t = sum m_i^2, adding one
/// variable at a time over states (s, t). A state with r variables still
/// to come can only reach 2Q >= t + s^2/(r+1) (the remaining variables
/// minimize s^2 + sum m_i^2 by splitting -s/(r+1) evenly), so anything
/// with t + s^2/(r+1) > 2*order is pruned; in particular |s| stays within
/// sqrt((k-1) * 2*order). Counts are exact in uint64 with overflow checks.
inline std::vector<std::uint64_t> quadform_counts(int colors, std::int64_t order) {
    require(colors >= 1 && colors <= 8, "quadform_theta: colors must be in [1, 8]");
    require(order >= 0, "quadform_theta: order must be >= 0");
    std::vector<std::uint64_t> out(static_cast<std::size_t>(order) + 1, 0);
    const std::int64_t vars = colors - 1;
    if (vars == 0) {
        out[0] = 1;
        return out;
    }

    const std::int64_t cap = 2 * order;                        // bound on s^2 + t
    const std::int64_t smax = detail::isqrt_floor(vars * cap); // widest reachable |s|
    const std::int64_t width = 2 * smax + 1;
    const std::int64_t tsize = cap + 1;
    const auto idx = [&](std::int64_t s, std::int64_t t) {
        return static_cast<std::size_t>((s + smax) * tsize + t);
    };

    std::vector<std::uint64_t> cur(static_cast<std::size_t>(width * tsize), 0);
    std::vector<std::uint64_t> nxt(cur.size(), 0);
    cur[idx(0, 0)] = 1;

    for (std::int64_t j = 1; j <= vars; ++j) {
        const std::int64_t remaining = vars - j;  // after placing variable j
        std::fill(nxt.begin(), nxt.end(), 0);
        for (std::int64_t s = -smax; s <= smax; ++s) {
            for (std::int64_t t = 0; t <= cap; ++t) {
                const std::uint64_t count = cur[idx(s, t)];
                if (count == 0) continue;
                const std::int64_t mmax = detail::isqrt_floor(cap - t);
                for (std::int64_t m = -mmax; m <= mmax; ++m) {
                    const std::int64_t s2 = s + m;
                    const std::int64_t t2 = t + m * m;
                    if (s2 * s2 > (remaining + 1) * (cap - t2)) continue;
                    std::uint64_t& slot = nxt[idx(s2, t2)];
                    slot = detail::checked_add(slot, count);
                }
            }
        }
        cur.swap(nxt);
    }

    for (std::int64_t s = -smax; s <= smax; ++s)
        for (std::int64_t t = 0; t <= cap; ++t) {
            const std::uint64_t count = cur[idx(s, t)];
            if (count == 0) continue;
            const std::int64_t twice_q = s * s + t;
            if (twice_q > cap) continue;
            const std::int64_t n = twice_q / 2;  // s^2 + t is always even here
            out[static_cast<std::size_t>(n)] = detail::checked_add(out[static_cast<std::size_t>(n)], count);
        }
    return out;
}

/// The theta series of Q as a Series in an arbitrary ring.
template <typename R>
Series<R> quadform_theta_in(const R& ring, int colors, std::int64_t order) {
    const auto counts = quadform_counts(colors, order);
    std::vector<typename R::elem> c(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) c[i] = ring.from_uint64(counts[i]);
    return Series<R>(ring, std::move(c));
}

struct QuadFormTheta {
    int colors;
    std::int64_t order;
    Series<ZRing> coeffs;
};

inline QuadFormTheta quadform_theta(int colors, std::int64_t order) {
    return QuadFormTheta{colors, order, quadform_theta_in(ZRing{}, colors, order)};
}

/// Definition-level construction of sum cphi_k(n) q^n: the quadratic-form
/// theta series divided by (q;q)_inf^k.
template <typename R>
Series<R> cphi_oracle(const R& ring, int colors, std::int64_t order) {
    Series<R> theta = quadform_theta_in(ring, colors, order);
    Series<R> euler_inv = inverse(pochhammer(ring, 1, 1, order));
    return mul(theta, pow(euler_inv, static_cast<unsigned long long>(colors)));
}

inline Series<ZRing> cphi_oracle(int colors, std::int64_t order) {
    return cphi_oracle(ZRing{}, colors, order);
}

// ---------------------------------------------------------------------------
// The two closed forms for k = 6. Both are kept as expression trees so the
// transcriptions are data: the identity ledger embeds them verbatim and the
// mutation tests can flip individual constants.

/// sum cphi_6(n) q^n =
///   ( phi^3(q) phi(q^2) phi(q^6) + 24 q psi^3(q) psi(q^2) psi(q^3)
///     + 4 q^2 phi^3(q) psi(q^4) psi(q^12) ) / (q;q)_inf^6
inline ExprPtr cphi6_gen_expr() {
    using namespace ex;
    const ExprPtr phi = theta(ThetaKind::Phi);
    const ExprPtr psi = theta(ThetaKind::Psi);
    const ExprPtr phi_cubed = pow(phi, 3);
    const ExprPtr numerator =
        add({mul({phi_cubed, subst(phi, 2), subst(phi, 6)}),
             mul({monomial(24, 1), pow(psi, 3), subst(psi, 2), subst(psi, 3)}),
             mul({monomial(4, 2), phi_cubed, subst(psi, 4), subst(psi, 12)})});
    return mul({numerator, eta(ProductSpec{{1, 1, -6}})});
}

/// The integer constants of the closed form for sum cphi_6(3n+1) q^n.
/// Exposed so sensitivity tests can flip one literal at a time.
struct Cphi63n1Constants {
    long long outer = 9;
    long long group1_a = 2;     // 2 a^5 (q^3;q^3)^3 / (q;q)
    long long group1_b = 189;   // 189 q a^2 (q^3;q^3)^12 / (q;q)^4
    long long group2_a = 2;     // 2 a^6
    long long group2_b = 378;   // 378 q a^3 (q^3;q^3)^9 / (q;q)^3
    long long group2_c = 1458;  // 1458 q^2 (q^3;q^3)^18 / (q;q)^6
    long long group3_a = 36;    // 36 q a^5 (q^3;q^3)^3 / (q;q)
    long long group3_b = 1944;  // 1944 q^2 a^2 (q^3;q^3)^12 / (q;q)^4
};

/// sum cphi_6(3n+1) q^n = 9 * [ A*(...) + C*(...) - E*(...) ] with
///   A = (q^2;q^2)^5 (q^3;q^3)^6 / ((q;q)^22 (q^4;q^4)^2)
///   C = (q^3;q^3)^9 (q^4;q^4) (q^6;q^6)^2 / ((q;q)^23 (q^2;q^2) (q^12;q^12))
///   E = (q^3;q^3)^9 (q^12;q^12)^2 / ((q;q)^23 (q^6;q^6))
/// and the bracketed groups listed in Cphi63n1Constants.
inline ExprPtr cphi6_3n1_expr(const Cphi63n1Constants& k = {}) {
    using namespace ex;
    const ExprPtr a = theta(ThetaKind::A);
    const ExprPtr a2 = pow(a, 2);
    const ExprPtr a3 = pow(a, 3);
    const ExprPtr a5 = pow(a, 5);
    const ExprPtr a6 = pow(a, 6);

    const ExprPtr prefactor_a =
        eta(ProductSpec{{2, 2, 5}, {3, 3, 6}, {1, 1, -22}, {4, 4, -2}});
    const ExprPtr group1 =
        add({mul({monomial(k.group1_a), a5, eta(ProductSpec{{3, 3, 3}, {1, 1, -1}})}),
             mul({monomial(k.group1_b, 1), a2, eta(ProductSpec{{3, 3, 12}, {1, 1, -4}})})});

    const ExprPtr prefactor_c = eta(
        ProductSpec{{3, 3, 9}, {4, 4, 1}, {6, 6, 2}, {1, 1, -23}, {2, 2, -1}, {12, 12, -1}});
    const ExprPtr group2 =
        add({mul({monomial(k.group2_a), a6}),
             mul({monomial(k.group2_b, 1), a3, eta(ProductSpec{{3, 3, 9}, {1, 1, -3}})}),
             mul({monomial(k.group2_c, 2), eta(ProductSpec{{3, 3, 18}, {1, 1, -6}})})});

    const ExprPtr prefactor_e =
        eta(ProductSpec{{3, 3, 9}, {12, 12, 2}, {1, 1, -23}, {6, 6, -1}});
    const ExprPtr group3 =
        add({mul({monomial(k.group3_a, 1), a5, eta(ProductSpec{{3, 3, 3}, {1, 1, -1}})}),
             mul({monomial(k.group3_b, 2), a2, eta(ProductSpec{{3, 3, 12}, {1, 1, -4}})})});

    return scale(k.outer, add({mul({prefactor_a, group1}), mul({prefactor_c, group2}),
                               neg(mul({prefactor_e, group3}))}));
}

template <typename R>
Series<R> cphi6_gen(const R& ring, std::int64_t order) {
    static const ExprPtr tree = cphi6_gen_expr();
    return eval_expr(tree, order, ring);
}

template <typename R>
Series<R> cphi6_3n1(const R& ring, std::int64_t order, const Cphi63n1Constants& constants = {}) {
    return eval_expr(cphi6_3n1_expr(constants), order, ring);
}

inline Series<ZRing> cphi6_gen(std::int64_t order) { return cphi6_gen(ZRing{}, order); }
inline Series<ZRing> cphi6_3n1(std::int64_t order) { return cphi6_3n1(ZRing{}, order); }

}  // namespace qphi
