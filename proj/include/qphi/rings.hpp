#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include <gmpxx.h>

#include "qphi/errors.hpp"

namespace qphi {

/// Exact integer coefficients (GMP arbitrary precision).
///
/// Ring objects are stateless value types; every ZRing compares equal to
/// every other. The accumulator uses mpz_addmul to avoid temporaries in
/// convolution inner loops.
class ZRing {
public:
    using elem = mpz_class;

    elem zero() const { return mpz_class(0); }
    elem one() const { return mpz_class(1); }

    elem from_int(long long v) const {
        mpz_class r;
        mpz_set_si(r.get_mpz_t(), static_cast<long>(v));
        return r;
    }
    elem from_uint64(std::uint64_t v) const {
        mpz_class r;
        mpz_set_ui(r.get_mpz_t(), static_cast<unsigned long>(v));
        return r;
    }
    elem from_mpz(const mpz_class& v) const { return v; }
    elem from_decimal(const std::string& s) const {
        mpz_class r;
        if (mpz_set_str(r.get_mpz_t(), s.c_str(), 10) != 0)
            throw contract_error("not a decimal integer: \"" + s + "\"");
        return r;
    }

    elem add(const elem& a, const elem& b) const { return a + b; }
    elem sub(const elem& a, const elem& b) const { return a - b; }
    elem neg(const elem& a) const { return -a; }
    elem mul(const elem& a, const elem& b) const { return a * b; }

    bool is_zero(const elem& a) const { return mpz_sgn(a.get_mpz_t()) == 0; }
    bool equal(const elem& a, const elem& b) const { return a == b; }

    // Units of Z are +1 and -1.
    bool try_invert(const elem& a, elem& out) const {
        if (a == 1 || a == -1) {
            out = a;
            return true;
        }
        return false;
    }

    mpz_class to_mpz(const elem& a) const { return a; }
    std::string to_decimal(const elem& a) const { return a.get_str(); }

    bool same(const ZRing&) const { return true; }
    bool is_modular() const { return false; }
    // Exact integers determine residues to any modulus.
    bool determines_residues_mod(std::uint64_t) const { return true; }
    std::string name() const { return "Z"; }

    class accumulator {
    public:
        void addmul(const elem& a, const elem& b) {
            mpz_addmul(v_.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        }
        elem take() { return std::move(v_); }

    private:
        mpz_class v_{0};
    };

    accumulator make_accumulator(std::int64_t /*max_terms*/) const { return {}; }
    elem finish(accumulator&& acc) const { return acc.take(); }
};

/// Integers modulo m with canonical representatives in [0, m).
///
/// m may be anything in [2, 2^63). Convolution sums pick the cheapest safe
/// accumulation strategy for the modulus: plain 64-bit sums when
/// (m-1)^2 * terms cannot overflow, a 128-bit accumulator when single
/// products fit in 64 bits, and per-term reduction otherwise.
class ModRing {
public:
    using elem = std::uint64_t;

    explicit ModRing(std::uint64_t modulus) : m_(modulus) {
        require(modulus >= 2, "Modular ring requires modulus >= 2");
        require(modulus <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()),
                "Modular ring requires modulus < 2^63");
    }

    std::uint64_t modulus() const { return m_; }

    elem zero() const { return 0; }
    elem one() const { return 1 % m_; }

    elem from_int(long long v) const {
        long long r = v % static_cast<long long>(m_);
        if (r < 0) r += static_cast<long long>(m_);
        return static_cast<elem>(r);
    }
    elem from_uint64(std::uint64_t v) const { return v % m_; }
    elem from_mpz(const mpz_class& v) const {
        return mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(m_));
    }
    elem from_decimal(const std::string& s) const {
        mpz_class r;
        if (mpz_set_str(r.get_mpz_t(), s.c_str(), 10) != 0)
            throw contract_error("not a decimal integer: \"" + s + "\"");
        return from_mpz(r);
    }

    elem add(elem a, elem b) const {
        elem s = a + b;  // no overflow: a, b < m <= 2^63
        return s >= m_ ? s - m_ : s;
    }
    elem sub(elem a, elem b) const { return a >= b ? a - b : a + (m_ - b); }
    elem neg(elem a) const { return a == 0 ? 0 : m_ - a; }
    elem mul(elem a, elem b) const {
        return static_cast<elem>(static_cast<unsigned __int128>(a) * b % m_);
    }

    bool is_zero(elem a) const { return a == 0; }
    bool equal(elem a, elem b) const { return a == b; }

    // Extended Euclid; succeeds iff gcd(a, m) = 1.
    bool try_invert(elem a, elem& out) const {
        __int128 r0 = static_cast<__int128>(m_), r1 = static_cast<__int128>(a % m_);
        __int128 t0 = 0, t1 = 1;
        while (r1 != 0) {
            __int128 q = r0 / r1;
            __int128 r2 = r0 - q * r1;
            __int128 t2 = t0 - q * t1;
            r0 = r1; r1 = r2;
            t0 = t1; t1 = t2;
        }
        if (r0 != 1) return false;
        if (t0 < 0) t0 += static_cast<__int128>(m_);
        out = static_cast<elem>(t0);
        return true;
    }

    mpz_class to_mpz(elem a) const {
        mpz_class r;
        mpz_set_ui(r.get_mpz_t(), static_cast<unsigned long>(a));
        return r;
    }
    std::string to_decimal(elem a) const { return std::to_string(a); }

    bool same(const ModRing& o) const { return m_ == o.m_; }
    bool is_modular() const { return true; }
    // Z/m pins a value mod M only when M divides m.
    bool determines_residues_mod(std::uint64_t m) const { return m != 0 && m_ % m == 0; }
    std::string name() const { return "mod" + std::to_string(m_); }

    class accumulator {
    public:
        accumulator(std::uint64_t m, int mode) : m_(m), mode_(mode) {}

        void addmul(elem a, elem b) {
            switch (mode_) {
                case kPlain:
                    plain_ += a * b;
                    break;
                case kWide:
                    wide_ += static_cast<unsigned __int128>(a) * b;
                    break;
                default: {
                    elem p = static_cast<elem>(static_cast<unsigned __int128>(a) * b % m_);
                    plain_ += p;
                    if (plain_ >= m_) plain_ -= m_;
                }
            }
        }

        elem take() {
            if (mode_ == kWide) return static_cast<elem>(wide_ % m_);
            if (mode_ == kPlain) return plain_ % m_;
            return plain_;
        }

        enum { kPlain = 0, kWide = 1, kSlow = 2 };

    private:
        std::uint64_t m_;
        int mode_;
        std::uint64_t plain_ = 0;
        unsigned __int128 wide_ = 0;
    };

    accumulator make_accumulator(std::int64_t max_terms) const {
        const unsigned __int128 p = static_cast<unsigned __int128>(m_ - 1) * (m_ - 1);
        if (max_terms >= 0 &&
            p <= (~static_cast<unsigned __int128>(0) >> 64) &&
            p * static_cast<unsigned __int128>(max_terms + 1) <=
                static_cast<unsigned __int128>(~std::uint64_t{0}))
            return accumulator(m_, accumulator::kPlain);
        if (m_ <= (std::uint64_t{1} << 32)) return accumulator(m_, accumulator::kWide);
        return accumulator(m_, accumulator::kSlow);
    }
    elem finish(accumulator&& acc) const { return acc.take(); }

private:
    std::uint64_t m_;
};

}  // namespace qphi
