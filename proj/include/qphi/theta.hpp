#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "qphi/products.hpp"
#include "qphi/series.hpp"

namespace qphi {

/// The five named series of the identity chain:
///   phi(q) = sum_{n in Z} q^{n^2}
///   psi(q) = sum_{n >= 0} q^{n(n+1)/2}
///   a(q)   = sum_{m,n in Z} q^{m^2+mn+n^2}
///   X(q)   = sum_{n in Z} q^{3n^2+2n}
///   Y(q)   = sum_{n in Z} q^{n(3n+1)/2}
/// Each has an independent second construction: an eta quotient for
/// phi/psi/X/Y and a Lambert series for a(q).
enum class ThetaKind { Phi, Psi, A, X, Y };

inline const char* theta_tag(ThetaKind k) {
    switch (k) {
        case ThetaKind::Phi: return "phi";
        case ThetaKind::Psi: return "psi";
        case ThetaKind::A: return "a";
        case ThetaKind::X: return "X";
        case ThetaKind::Y: return "Y";
    }
    throw contract_error("unknown theta kind");
}

inline ThetaKind theta_kind_from_tag(const std::string& tag) {
    if (tag == "phi") return ThetaKind::Phi;
    if (tag == "psi") return ThetaKind::Psi;
    if (tag == "a") return ThetaKind::A;
    if (tag == "X" || tag == "x") return ThetaKind::X;
    if (tag == "Y" || tag == "y") return ThetaKind::Y;
    throw contract_error("unknown theta tag: \"" + tag + "\"");
}

/// Product form for the four kinds that have one (a(q) has none).
inline ProductSpec theta_product_spec(ThetaKind kind) {
    switch (kind) {
        case ThetaKind::Phi:
            return ProductSpec{{2, 2, 5}, {1, 1, -2}, {4, 4, -2}};
        case ThetaKind::Psi:
            return ProductSpec{{2, 2, 2}, {1, 1, -1}};
        case ThetaKind::X:
            return ProductSpec{{2, 2, 2}, {3, 3, 1}, {12, 12, 1}, {1, 1, -1}, {4, 4, -1}, {6, 6, -1}};
        case ThetaKind::Y:
            return ProductSpec{{2, 2, 1}, {3, 3, 2}, {1, 1, -1}, {6, 6, -1}};
        case ThetaKind::A:
            break;
    }
    throw contract_error("a(q) has no eta-quotient form; use the Lambert series");
}

namespace detail {

inline std::int64_t lattice_window(std::int64_t order) {
    // m^2+mn+n^2 >= (m^2+n^2)/2, so |m|,|n| <= sqrt(2*order); twice that is
    // a comfortably complete window (and it is cross-checked against the
    // Lambert form in the tests).
    return 2 * static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(order)))) + 1;
}

}  // namespace detail

/// Defining-sum construction.
template <typename R>
Series<R> theta_sum(const R& ring, ThetaKind kind, std::int64_t order) {
    require(order >= 0, "theta_sum: order must be >= 0");
    std::vector<typename R::elem> c(static_cast<std::size_t>(order) + 1, ring.zero());
    const auto bump = [&](std::int64_t e, long long amount) {
        if (e <= order) {
            auto& slot = c[static_cast<std::size_t>(e)];
            slot = ring.add(slot, ring.from_int(amount));
        }
    };
    switch (kind) {
        case ThetaKind::Phi:
            bump(0, 1);
            for (std::int64_t n = 1; n * n <= order; ++n) bump(n * n, 2);
            break;
        case ThetaKind::Psi:
            for (std::int64_t n = 0; n * (n + 1) / 2 <= order; ++n) bump(n * (n + 1) / 2, 1);
            break;
        case ThetaKind::X:
            bump(0, 1);
            for (std::int64_t n = 1; 3 * n * n - 2 * n <= order; ++n) {
                bump(3 * n * n + 2 * n, 1);   // index +n
                bump(3 * n * n - 2 * n, 1);   // index -n
            }
            break;
        case ThetaKind::Y:
            bump(0, 1);
            for (std::int64_t n = 1; (3 * n * n - n) / 2 <= order; ++n) {
                bump((3 * n * n + n) / 2, 1); // index +n
                bump((3 * n * n - n) / 2, 1); // index -n
            }
            break;
        case ThetaKind::A: {
            const std::int64_t w = detail::lattice_window(order);
            for (std::int64_t m = -w; m <= w; ++m)
                for (std::int64_t n = -w; n <= w; ++n) {
                    const std::int64_t e = m * m + m * n + n * n;
                    if (e <= order) bump(e, 1);
                }
            break;
        }
    }
    return Series<R>(ring, std::move(c));
}

/// a(q) through its Lambert series
///   1 + 6 sum_{n>=0} ( q^{3n+1}/(1-q^{3n+1}) - q^{3n+2}/(1-q^{3n+2}) ),
/// each geometric factor expanded term by term.
template <typename R>
Series<R> theta_lambert_a(const R& ring, std::int64_t order) {
    require(order >= 0, "theta_lambert_a: order must be >= 0");
    std::vector<typename R::elem> c(static_cast<std::size_t>(order) + 1, ring.zero());
    c[0] = ring.one();
    for (std::int64_t j = 1; j <= order; ++j) {
        const int residue = static_cast<int>(j % 3);
        if (residue == 0) continue;
        const auto amount = ring.from_int(residue == 1 ? 6 : -6);
        for (std::int64_t t = j; t <= order; t += j) {
            auto& slot = c[static_cast<std::size_t>(t)];
            slot = ring.add(slot, amount);
        }
    }
    return Series<R>(ring, std::move(c));
}

/// The alternate construction: eta quotient for phi/psi/X/Y, Lambert
/// series for a(q). theta_sum and theta_alt must agree for every kind.
template <typename R>
Series<R> theta_alt(const R& ring, ThetaKind kind, std::int64_t order) {
    if (kind == ThetaKind::A) return theta_lambert_a(ring, order);
    return eta_quotient(ring, theta_product_spec(kind), order);
}

inline Series<ZRing> theta_sum(ThetaKind kind, std::int64_t order) {
    return theta_sum(ZRing{}, kind, order);
}
inline Series<ZRing> theta_alt(ThetaKind kind, std::int64_t order) {
    return theta_alt(ZRing{}, kind, order);
}

/// f(sign * q^m), carried to an explicit order.
///
/// For sign = -1 the argument handed to f is -q^m, so coefficient n lands
/// at index mn carrying (-1)^n: negate the variable first, then upsample.
/// For odd m this coincides with flipping odd indices after upsampling;
/// for even m it does not (phi(-q^2) != phi(q^2)), and the identity chain
/// needs this reading.
template <typename R>
Series<R> eval_at_signed_power_to(const Series<R>& f, int sign, std::int64_t m,
                                  std::int64_t out_order) {
    require(sign == 1 || sign == -1, "eval_at_signed_power: sign must be +1 or -1");
    return substitute_power_to(sign == 1 ? f : negate_variable(f), m, out_order);
}

template <typename R>
Series<R> eval_at_signed_power(const Series<R>& f, int sign, std::int64_t m) {
    return eval_at_signed_power_to(f, sign, m, f.order());
}

/// The two pieces of a(q) = a(q^3) + 6q (q^9;q^9)^3 / (q^3;q^3), returned
/// as (a(q^3), correction) both truncated at the requested order.
template <typename R>
std::pair<Series<R>, Series<R>> a_cube_root_dissection(const R& ring, std::int64_t order) {
    require(order >= 0, "a_cube_root_dissection: order must be >= 0");
    Series<R> main = substitute_power_to(theta_sum(ring, ThetaKind::A, order / 3), 3, order);
    Series<R> quotient = eta_quotient(ring, ProductSpec{{9, 9, 3}, {3, 3, -1}}, order);
    Series<R> correction = mul(Series<R>::monomial(ring, order, ring.from_int(6), 1), quotient);
    return {std::move(main), std::move(correction)};
}

inline std::pair<Series<ZRing>, Series<ZRing>> a_cube_root_dissection(std::int64_t order) {
    return a_cube_root_dissection(ZRing{}, order);
}

}  // namespace qphi
