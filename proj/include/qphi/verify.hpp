#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "qphi/cache.hpp"
#include "qphi/ledger.hpp"
#include "qphi/sha256.hpp"
#include "qphi/version.hpp"

namespace qphi {

/// Resolves the named series of the ledger ("cphi6_gen", "cphi6_3n1",
/// "cphi6_oracle", with "cphi6" as an alias for the first), memoizing the
/// highest order computed per (id, ring) and optionally persisting results
/// through a SeriesCache. Thread-safe; computations run under the lock, so
/// concurrent requests for the same series never duplicate work.
class FrobeniusProvider : public NamedProvider {
public:
    FrobeniusProvider() = default;
    explicit FrobeniusProvider(SeriesCache cache) : cache_(std::move(cache)) {}

    Series<ZRing> get(const std::string& id, std::int64_t order, const ZRing& ring) override {
        return get_impl(id, order, ring, exact_memo_);
    }
    Series<ModRing> get(const std::string& id, std::int64_t order, const ModRing& ring) override {
        return get_impl(id, order, ring, mod_memo_);
    }

private:
    template <typename R>
    using Memo = std::map<std::pair<std::string, std::string>, Series<R>>;

    template <typename R>
    Series<R> get_impl(const std::string& id, std::int64_t order, const R& ring, Memo<R>& memo) {
        require(order >= 0, "named series: order must be >= 0");
        const auto key = std::make_pair(canonical_id(id), ring.name());
        std::lock_guard<std::mutex> lock(mu_);
        if (auto it = memo.find(key); it != memo.end() && it->second.order() >= order)
            return it->second.order() == order ? it->second : truncate(it->second, order);
        Series<R> s = load_or_compute(key.first, order, ring);
        auto [it, inserted] = memo.emplace(key, s);
        if (!inserted) it->second = s;  // keep the larger order
        return s;
    }

    template <typename R>
    Series<R> load_or_compute(const std::string& id, std::int64_t order, const R& ring) {
        if (cache_) {
            if (auto s = cache_->load(id, ring, order)) return std::move(*s);
        }
        Series<R> s = compute(id, order, ring);
        if (cache_) cache_->store(id, s);
        return s;
    }

    template <typename R>
    static Series<R> compute(const std::string& id, std::int64_t order, const R& ring) {
        if (id == "cphi6_gen") return cphi6_gen(ring, order);
        if (id == "cphi6_3n1") return cphi6_3n1(ring, order);
        if (id == "cphi6_oracle") return cphi_oracle(ring, 6, order);
        throw engine_error("unknown named series \"" + id + "\"");
    }

    static std::string canonical_id(const std::string& id) {
        return id == "cphi6" ? std::string("cphi6_gen") : id;
    }

    std::mutex mu_;
    Memo<ZRing> exact_memo_;
    Memo<ModRing> mod_memo_;
    std::optional<SeriesCache> cache_;
};

// ---------------------------------------------------------------------------
// Checking

namespace detail {

class Stopwatch {
public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

template <typename R>
VerificationReport compare_series(std::string name, const Series<R>& lhs, const Series<R>& rhs,
                                  std::int64_t order, const Stopwatch& timer) {
    VerificationReport rep;
    rep.name = std::move(name);
    rep.checked_through = order;
    const std::int64_t diff = first_difference(lhs, rhs);
    if (diff < 0) {
        rep.status = Status::Pass;
    } else {
        rep.status = Status::Fail;
        rep.first_failure = FirstFailure{diff, lhs.ring().to_decimal(lhs[diff]),
                                         rhs.ring().to_decimal(rhs[diff])};
    }
    rep.elapsed_ms = timer.elapsed_ms();
    return rep;
}

inline VerificationReport error_report(std::string name, const std::string& message,
                                       const Stopwatch& timer) {
    VerificationReport rep;
    rep.name = std::move(name);
    rep.status = Status::Error;
    rep.message = message;
    rep.elapsed_ms = timer.elapsed_ms();
    return rep;
}

}  // namespace detail

/// Evaluate both sides of an identity entry in the declared (or overridden)
/// mode and compare coefficients 0..order. Evaluation problems (unknown
/// series, non-invertible constant term, ...) surface as Status::Error,
/// distinct from a coefficient mismatch.
inline VerificationReport check_identity(const LedgerEntry& entry, NamedProvider* provider,
                                         std::optional<EvalMode> mode_override = std::nullopt,
                                         std::optional<std::int64_t> order_override = std::nullopt) {
    require(entry.kind == LedgerEntry::Kind::Identity, "check_identity: not an identity entry");
    const EvalMode mode = mode_override.value_or(entry.mode);
    const std::int64_t order = order_override.value_or(entry.order);
    detail::Stopwatch timer;
    try {
        if (mode.exact) {
            const ZRing ring;
            return detail::compare_series(entry.name, eval_expr(entry.lhs, order, ring, provider),
                                          eval_expr(entry.rhs, order, ring, provider), order,
                                          timer);
        }
        const ModRing ring(mode.modulus);
        return detail::compare_series(entry.name, eval_expr(entry.lhs, order, ring, provider),
                                      eval_expr(entry.rhs, order, ring, provider), order, timer);
    } catch (const std::exception& ex) {
        return detail::error_report(entry.name, ex.what(), timer);
    }
}

/// Check a congruence claim against a coefficient series. The series ring
/// must determine residues mod the claim's modulus: exact integers always
/// do, Z/m does iff the claim modulus divides m.
template <typename R>
VerificationReport check_congruence(const CongruenceClaim& claim, const Series<R>& coeffs) {
    detail::Stopwatch timer;
    try {
        claim.validate();
        if (!coeffs.ring().determines_residues_mod(claim.modulus))
            return detail::error_report(
                claim.source, "series ring " + coeffs.ring().name() +
                                  " does not determine residues mod " +
                                  std::to_string(claim.modulus),
                timer);
        const std::int64_t needed = claim.required_order();
        if (coeffs.order() < needed)
            return detail::error_report(
                claim.source, "series order " + std::to_string(coeffs.order()) +
                                  " below required order " + std::to_string(needed),
                timer);

        const auto residue = [&](const mpz_class& v) {
            return mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(claim.modulus));
        };
        VerificationReport rep;
        rep.name = claim.source;
        rep.checked_through = needed;
        rep.status = Status::Pass;
        for (std::int64_t n = 0; n < claim.n_range; ++n) {
            const std::int64_t i = claim.a * n + claim.b;
            const unsigned long lhs = residue(coeffs.ring().to_mpz(coeffs[i]));
            unsigned long rhs = 0;
            if (claim.rhs) {
                const std::int64_t i2 = claim.rhs->a * n + claim.rhs->b;
                rhs = residue(mpz_class(static_cast<long>(claim.rhs->c)) *
                              coeffs.ring().to_mpz(coeffs[i2]));
            }
            if (lhs != rhs) {
                rep.status = Status::Fail;
                rep.first_failure =
                    FirstFailure{i, std::to_string(lhs), std::to_string(rhs)};
                break;
            }
        }
        rep.elapsed_ms = timer.elapsed_ms();
        return rep;
    } catch (const std::exception& ex) {
        return detail::error_report(claim.source, ex.what(), timer);
    }
}

// ---------------------------------------------------------------------------
// Ledger runner

enum class Profile { Quick, Full };

inline const char* profile_name(Profile p) { return p == Profile::Quick ? "quick" : "full"; }

struct RunOptions {
    Profile profile = Profile::Full;
    int jobs = 1;
    std::vector<std::string> only;  // entry names; empty selects everything
    std::optional<std::int64_t> order_override;
};

namespace detail {

inline constexpr std::int64_t kQuickOrderCap = 300;
inline constexpr std::int64_t kQuickDemandCap = 2005;
inline constexpr std::uint64_t kQuickModulus = 2187;  // 3^7 covers every 3-power claim

// Ring in which a claim's source series is computed: 3^7 whenever the claim
// modulus divides it (so one shared series serves the whole 3-power family),
// the claim modulus itself otherwise.
inline std::uint64_t claim_working_modulus(std::uint64_t claim_modulus) {
    return kQuickModulus % claim_modulus == 0 ? kQuickModulus : claim_modulus;
}

inline std::int64_t max_named_demand(const LedgerEntry& e, std::int64_t order) {
    std::map<std::string, std::int64_t> demands;
    collect_named_demands(e.lhs, order, demands);
    collect_named_demands(e.rhs, order, demands);
    std::int64_t best = 0;
    for (const auto& [id, n] : demands) best = std::max(best, n);
    return best;
}

// Largest order <= min(entry order, 300) whose named-series demand stays
// within the quick cap; extraction-heavy entries shrink accordingly.
inline std::int64_t quick_identity_order(const LedgerEntry& e) {
    const std::int64_t base = std::min(e.order, kQuickOrderCap);
    if (max_named_demand(e, base) <= kQuickDemandCap) return base;
    std::int64_t lo = 0, hi = base;
    while (lo < hi) {
        const std::int64_t mid = (lo + hi + 1) / 2;
        if (max_named_demand(e, mid) <= kQuickDemandCap)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

struct EffectiveEntry {
    const LedgerEntry* entry = nullptr;
    EvalMode mode = EvalMode::Exact();  // identity only
    std::int64_t order = 0;             // identity only
    std::int64_t n_range = 0;           // congruence only
};

inline EffectiveEntry effective_entry(const LedgerEntry& e, const RunOptions& opts) {
    EffectiveEntry eff;
    eff.entry = &e;
    if (e.kind == LedgerEntry::Kind::Identity) {
        eff.mode = e.mode;
        if (opts.profile == Profile::Quick && e.mode.exact) eff.mode = EvalMode::Mod(kQuickModulus);
        eff.order = opts.order_override.value_or(
            opts.profile == Profile::Quick ? quick_identity_order(e) : e.order);
    } else {
        eff.n_range = e.claim.n_range;
        if (opts.profile == Profile::Quick) eff.n_range = std::min<std::int64_t>(10, eff.n_range);
        if (opts.order_override) {
            // Interpret the override as a cap on the coefficient order.
            const std::int64_t cap = *opts.order_override;
            std::int64_t fit = cap >= e.claim.b ? (cap - e.claim.b) / e.claim.a + 1 : 0;
            if (e.claim.rhs)
                fit = std::min(fit, cap >= e.claim.rhs->b
                                        ? (cap - e.claim.rhs->b) / e.claim.rhs->a + 1
                                        : 0);
            eff.n_range = std::min(eff.n_range, fit);
        }
    }
    return eff;
}

inline VerificationReport run_effective(const EffectiveEntry& eff, NamedProvider& provider) {
    const LedgerEntry& e = *eff.entry;
    if (e.kind == LedgerEntry::Kind::Identity)
        return check_identity(e, &provider, eff.mode, eff.order);

    Stopwatch timer;
    try {
        if (eff.n_range < 1)
            return error_report(e.name, "order override leaves no instances to check", timer);
        CongruenceClaim claim = e.claim;
        claim.n_range = eff.n_range;
        const ModRing ring(claim_working_modulus(claim.modulus));
        Series<ModRing> coeffs = provider.get(claim.source, claim.required_order(), ring);
        VerificationReport rep = check_congruence(claim, coeffs);
        rep.name = e.name;
        return rep;
    } catch (const std::exception& ex) {
        return error_report(e.name, ex.what(), timer);
    }
}

}  // namespace detail

/// Execute ledger entries (all, or the named subset) with the profile's
/// effective orders. Named series demands are collected up front and
/// computed once at the highest requested order; the per-entry checks then
/// run on a bounded worker pool. Reports come back in ledger order, and
/// statuses are independent of the worker count.
inline std::vector<VerificationReport> run_ledger(const Ledger& ledger, NamedProvider& provider,
                                                  const RunOptions& opts = {}) {
    std::vector<const LedgerEntry*> selected;
    if (opts.only.empty()) {
        for (const auto& e : ledger.entries) selected.push_back(&e);
    } else {
        for (const auto& name : opts.only) {
            const LedgerEntry* e = ledger.find(name);
            if (!e) throw contract_error("unknown ledger entry \"" + name + "\"");
            selected.push_back(e);
        }
    }

    std::vector<detail::EffectiveEntry> effective;
    effective.reserve(selected.size());
    for (const LedgerEntry* e : selected) effective.push_back(detail::effective_entry(*e, opts));

    // Demand pre-pass: compute each named series once, at its peak order.
    std::map<std::pair<std::string, std::uint64_t>, std::int64_t> demands;  // modulus 0 = exact
    for (const auto& eff : effective) {
        const LedgerEntry& e = *eff.entry;
        if (e.kind == LedgerEntry::Kind::Identity) {
            std::map<std::string, std::int64_t> local;
            collect_named_demands(e.lhs, eff.order, local);
            collect_named_demands(e.rhs, eff.order, local);
            for (const auto& [id, order] : local) {
                auto& slot = demands[{id, eff.mode.exact ? 0 : eff.mode.modulus}];
                slot = std::max(slot, order);
            }
        } else if (eff.n_range >= 1) {
            CongruenceClaim claim = e.claim;
            claim.n_range = eff.n_range;
            auto& slot =
                demands[{claim.source, detail::claim_working_modulus(claim.modulus)}];
            slot = std::max(slot, claim.required_order());
        }
    }
    for (const auto& [key, order] : demands) {
        try {
            if (key.second == 0)
                provider.get(key.first, order, ZRing{});
            else
                provider.get(key.first, order, ModRing(key.second));
        } catch (const std::exception&) {
            // Surfaces as an Error report when the owning entry runs.
        }
    }

    std::vector<VerificationReport> reports(effective.size());
    const int jobs = std::clamp(opts.jobs, 1, 64);
    if (jobs == 1 || effective.size() <= 1) {
        for (std::size_t i = 0; i < effective.size(); ++i)
            reports[i] = detail::run_effective(effective[i], provider);
        return reports;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < effective.size(); i = next.fetch_add(1))
            reports[i] = detail::run_effective(effective[i], provider);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return reports;
}

// ---------------------------------------------------------------------------
// Congruence discovery

struct ScanOptions {
    int colors = 6;
    std::int64_t max_a = 1;
    std::vector<std::uint64_t> moduli;
    std::int64_t order = 0;
    std::int64_t min_witnesses = 10;
};

/// Report every progression (an+b, M) with a <= max_a and M in moduli whose
/// available instances all vanish mod M. Results are labeled "empirical":
/// they are observations about the computed coefficients, never proofs.
inline std::vector<CongruenceClaim> scan_congruences(const ScanOptions& opts) {
    if (opts.moduli.empty()) return {};
    require(opts.max_a >= 1, "scan: max_a must be >= 1");
    require(opts.min_witnesses >= 1, "scan: min_witnesses must be >= 1");
    require(opts.order >= opts.max_a * opts.min_witnesses - 1,
            "scan: order too small to give every progression enough instances");

    const auto counts = quadform_counts(opts.colors, opts.order);
    std::vector<CongruenceClaim> found;
    for (const std::uint64_t modulus : opts.moduli) {
        const ModRing ring(modulus);
        std::vector<ModRing::elem> c(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i) c[i] = ring.from_uint64(counts[i]);
        const Series<ModRing> theta(ring, std::move(c));
        const Series<ModRing> cphi =
            mul(theta, pow(inverse(pochhammer(ring, 1, 1, opts.order)),
                           static_cast<unsigned long long>(opts.colors)));

        for (std::int64_t a = 1; a <= opts.max_a; ++a) {
            for (std::int64_t b = 0; b < a; ++b) {
                std::int64_t witnesses = 0;
                bool all_zero = true;
                for (std::int64_t i = b; i <= opts.order; i += a) {
                    ++witnesses;
                    if (cphi[i] != 0) {
                        all_zero = false;
                        break;
                    }
                }
                if (all_zero && witnesses >= opts.min_witnesses) {
                    CongruenceClaim claim;
                    claim.source = opts.colors == 6
                                       ? std::string("cphi6_oracle")
                                       : "cphi_oracle_k" + std::to_string(opts.colors);
                    claim.a = a;
                    claim.b = b;
                    claim.modulus = modulus;
                    claim.n_range = witnesses;
                    claim.note = "empirical";
                    found.push_back(std::move(claim));
                }
            }
        }
    }
    return found;
}

// ---------------------------------------------------------------------------
// Reports

inline std::string ledger_sha256(const Ledger& ledger) {
    return sha256_hex(ledger_to_json(ledger).dump());
}

/// Report schema: integers are decimal strings so values survive any JSON
/// reader, and key order is fixed so serialization round-trips bytewise.
inline nlohmann::ordered_json report_to_json(const std::vector<VerificationReport>& reports,
                                             const std::string& ledger_hash,
                                             const nlohmann::ordered_json& parameters) {
    nlohmann::ordered_json j;
    j["engine_version"] = std::string(kEngineVersion);
    j["ledger_sha256"] = ledger_hash;
    j["parameters"] = parameters;
    auto results = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json e;
        e["name"] = r.name;
        e["status"] = status_name(r.status);
        e["checked_through"] = std::to_string(r.checked_through);
        if (r.first_failure) {
            e["first_failure"] =
                nlohmann::ordered_json{{"index", std::to_string(r.first_failure->index)},
                                       {"lhs", r.first_failure->lhs},
                                       {"rhs", r.first_failure->rhs}};
        }
        if (!r.message.empty()) e["message"] = r.message;
        e["elapsed_ms"] = std::to_string(static_cast<long long>(r.elapsed_ms + 0.5));
        results.push_back(std::move(e));
    }
    j["results"] = std::move(results);
    return j;
}

inline void render_report_table(const std::vector<VerificationReport>& reports,
                                std::ostream& out) {
    std::size_t width = 4;
    for (const auto& r : reports) width = std::max(width, r.name.size());
    for (const auto& r : reports) {
        out << r.name << std::string(width - r.name.size() + 2, ' ');
        switch (r.status) {
            case Status::Pass: out << "PASS "; break;
            case Status::Fail: out << "FAIL "; break;
            case Status::Error: out << "ERROR"; break;
        }
        out << "  N=" << r.checked_through;
        out << "  " << static_cast<long long>(r.elapsed_ms + 0.5) << " ms";
        if (r.first_failure)
            out << "  first failure at q^" << r.first_failure->index << ": lhs="
                << r.first_failure->lhs << " rhs=" << r.first_failure->rhs;
        if (!r.message.empty()) out << "  (" << r.message << ")";
        out << '\n';
    }
}

inline int reports_exit_code(const std::vector<VerificationReport>& reports) {
    bool any_fail = false;
    for (const auto& r : reports) {
        if (r.status == Status::Error) return 2;
        if (r.status == Status::Fail) any_fail = true;
    }
    return any_fail ? 1 : 0;
}

}  // namespace qphi
