#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qphi/expr.hpp"
#include "qphi/frobenius.hpp"

namespace qphi {

/// Evaluation mode of an identity entry: exact integers or Z/M.
struct EvalMode {
    bool exact = true;
    std::uint64_t modulus = 0;

    static EvalMode Exact() { return {true, 0}; }
    static EvalMode Mod(std::uint64_t m) { return {false, m}; }

    std::string describe() const {
        return exact ? "exact" : "mod " + std::to_string(modulus);
    }
    friend bool operator==(const EvalMode&, const EvalMode&) = default;
};

/// Second side of a relation claim f(an+b) = c * f(a'n+b') (mod M).
struct RelationRhs {
    long long c = 1;
    std::int64_t a = 1;
    std::int64_t b = 0;
};

/// "coeffs[an+b] vanishes mod M for n = 0..n_range-1", optionally against
/// c * coeffs[a'n+b'] instead of zero.
struct CongruenceClaim {
    std::string source;
    std::int64_t a = 1;
    std::int64_t b = 0;
    std::uint64_t modulus = 2;
    std::optional<RelationRhs> rhs;
    std::int64_t n_range = 1;
    std::string note;

    void validate() const {
        require(a >= 1, "congruence: a must be >= 1");
        require(b >= 0 && b < a, "congruence: need 0 <= b < a");
        require(modulus >= 2, "congruence: modulus must be >= 2");
        require(n_range >= 1, "congruence: n_range must be >= 1");
        if (rhs) {
            require(rhs->a >= 1, "congruence: rhs a must be >= 1");
            require(rhs->b >= 0 && rhs->b < rhs->a, "congruence: need 0 <= b' < a'");
        }
    }

    std::int64_t required_order() const {
        std::int64_t need = a * (n_range - 1) + b;
        if (rhs) need = std::max(need, rhs->a * (n_range - 1) + rhs->b);
        return need;
    }
};

enum class Status { Pass, Fail, Error };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Error: return "error";
    }
    return "error";
}

struct FirstFailure {
    std::int64_t index = 0;   // coefficient index q^index
    std::string lhs;
    std::string rhs;
};

struct VerificationReport {
    std::string name;
    Status status = Status::Error;
    std::int64_t checked_through = -1;
    std::optional<FirstFailure> first_failure;
    double elapsed_ms = 0.0;
    std::string message;  // populated for Status::Error
};

/// One machine-checkable ledger line: either an identity between two
/// expression trees or a congruence claim on a named series.
struct LedgerEntry {
    enum class Kind { Identity, Congruence };

    Kind kind = Kind::Identity;
    std::string name;

    // Identity fields.
    ExprPtr lhs;
    ExprPtr rhs;
    EvalMode mode = EvalMode::Exact();
    std::int64_t order = 0;

    // Congruence fields.
    CongruenceClaim claim;
};

struct Ledger {
    std::vector<LedgerEntry> entries;

    const LedgerEntry* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
};

// ---------------------------------------------------------------------------
// JSON form: a bare array of entries, shipped as data/ledger.json.

inline nlohmann::ordered_json mode_to_json(const EvalMode& m) {
    if (m.exact) return "exact";
    return nlohmann::ordered_json{{"mod", m.modulus}};
}

inline EvalMode mode_from_json(const nlohmann::json& j) {
    if (j.is_string() && j.get<std::string>() == "exact") return EvalMode::Exact();
    if (j.is_object() && j.contains("mod")) return EvalMode::Mod(j.at("mod").get<std::uint64_t>());
    throw contract_error("entry mode must be \"exact\" or {\"mod\": M}");
}

inline nlohmann::ordered_json entry_to_json(const LedgerEntry& e) {
    nlohmann::ordered_json j;
    j["name"] = e.name;
    if (e.kind == LedgerEntry::Kind::Identity) {
        j["kind"] = "identity";
        j["mode"] = mode_to_json(e.mode);
        j["order"] = e.order;
        j["lhs"] = expr_to_json(e.lhs);
        j["rhs"] = expr_to_json(e.rhs);
    } else {
        j["kind"] = "congruence";
        j["source"] = e.claim.source;
        j["a"] = e.claim.a;
        j["b"] = e.claim.b;
        j["mod"] = e.claim.modulus;
        if (e.claim.rhs) {
            j["rhs"] = nlohmann::ordered_json{
                {"c", e.claim.rhs->c}, {"a", e.claim.rhs->a}, {"b", e.claim.rhs->b}};
        }
        j["n_range"] = e.claim.n_range;
        if (!e.claim.note.empty()) j["note"] = e.claim.note;
    }
    return j;
}

inline LedgerEntry entry_from_json(const nlohmann::json& j) {
    LedgerEntry e;
    e.name = j.at("name").get<std::string>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") {
        e.kind = LedgerEntry::Kind::Identity;
        e.mode = mode_from_json(j.at("mode"));
        e.order = j.at("order").get<std::int64_t>();
        require(e.order >= 0, "entry order must be >= 0");
        e.lhs = expr_from_json(j.at("lhs"));
        e.rhs = expr_from_json(j.at("rhs"));
    } else if (kind == "congruence") {
        e.kind = LedgerEntry::Kind::Congruence;
        e.claim.source = j.at("source").get<std::string>();
        e.claim.a = j.at("a").get<std::int64_t>();
        e.claim.b = j.at("b").get<std::int64_t>();
        e.claim.modulus = j.at("mod").get<std::uint64_t>();
        if (j.contains("rhs")) {
            RelationRhs r;
            r.c = j.at("rhs").at("c").get<long long>();
            r.a = j.at("rhs").at("a").get<std::int64_t>();
            r.b = j.at("rhs").at("b").get<std::int64_t>();
            e.claim.rhs = r;
        }
        e.claim.n_range = j.at("n_range").get<std::int64_t>();
        e.claim.note = j.value("note", std::string());
        e.claim.validate();
    } else {
        throw contract_error("entry kind must be \"identity\" or \"congruence\"");
    }
    return e;
}

inline nlohmann::ordered_json ledger_to_json(const Ledger& ledger) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : ledger.entries) arr.push_back(entry_to_json(e));
    return arr;
}

inline Ledger ledger_from_json(const nlohmann::json& j) {
    require(j.is_array(), "ledger JSON must be an array of entries");
    Ledger ledger;
    for (const auto& e : j) ledger.entries.push_back(entry_from_json(e));
    return ledger;
}

// ---------------------------------------------------------------------------
// The shipped ledger: every displayed identity and congruence of the cphi6
// proof chain as one named entry.

namespace detail {

inline LedgerEntry identity(std::string name, ExprPtr lhs, ExprPtr rhs, EvalMode mode,
                            std::int64_t order) {
    LedgerEntry e;
    e.kind = LedgerEntry::Kind::Identity;
    e.name = std::move(name);
    e.lhs = std::move(lhs);
    e.rhs = std::move(rhs);
    e.mode = mode;
    e.order = order;
    return e;
}

inline LedgerEntry congruence(std::string name, std::int64_t a, std::int64_t b,
                              std::uint64_t modulus, std::int64_t n_range,
                              std::optional<RelationRhs> rhs = std::nullopt,
                              std::string note = {}) {
    LedgerEntry e;
    e.kind = LedgerEntry::Kind::Congruence;
    e.name = std::move(name);
    e.claim.source = "cphi6_gen";
    e.claim.a = a;
    e.claim.b = b;
    e.claim.modulus = modulus;
    e.claim.n_range = n_range;
    e.claim.rhs = rhs;
    e.claim.note = std::move(note);
    e.claim.validate();
    return e;
}

}  // namespace detail

inline Ledger builtin_ledger() {
    using namespace ex;
    using detail::congruence;
    using detail::identity;

    const auto exact = EvalMode::Exact();
    const ExprPtr phi = theta(ThetaKind::Phi);
    const ExprPtr psi = theta(ThetaKind::Psi);
    const ExprPtr a = theta(ThetaKind::A);
    const ExprPtr a3 = subst(a, 3);       // a(q^3)
    const ExprPtr x = theta(ThetaKind::X);
    const ExprPtr y = theta(ThetaKind::Y);
    const ExprPtr euler = eta(ProductSpec{{1, 1, 1}});       // (q;q)
    const ExprPtr euler_cube = eta(ProductSpec{{1, 1, 3}});  // (q;q)^3
    const ExprPtr zero = monomial(0);

    // 6q (q^9;q^9)^3 / (q^3;q^3), the correction term of the a(q) dissection.
    const ExprPtr a_correction =
        mul({monomial(6, 1), eta(ProductSpec{{9, 9, 3}, {3, 3, -1}})});

    // The three bracket summands of the mod-243 form of sum cphi6(3n+1) q^n;
    // their q^{3n+2} extractions are the series I, J, K.
    const ExprPtr eta_term1 = eta(ProductSpec{{2, 2, 5}, {1, 1, 4}, {4, 4, -2}});
    const ExprPtr eta_term2 =
        eta(ProductSpec{{1, 1, 4}, {4, 4, 1}, {6, 6, 2}, {2, 2, -1}, {12, 12, -1}});
    const ExprPtr eta_term3 = eta(ProductSpec{{3, 3, 4}, {12, 12, 2}, {6, 6, -1}});
    const ExprPtr summand1 = mul({pow(a, 5), eta_term1});
    const ExprPtr summand2 = mul({pow(a, 6), eta_term2});
    const ExprPtr summand3 = neg(mul({monomial(18, 1), pow(a, 5), eta_term3}));
    const ExprPtr series_i = extract(summand1, 3, 2);
    const ExprPtr series_j = extract(summand2, 3, 2);
    const ExprPtr series_k = extract(summand3, 3, 2);

    const ExprPtr gen = named("cphi6_gen");

    Ledger ledger;
    auto& L = ledger.entries;

    // --- the named series against their second constructions ------------
    L.push_back(identity("phi-product-form", phi, eta(theta_product_spec(ThetaKind::Phi)),
                         exact, 400));
    L.push_back(identity("phi-neg-product-form", negvar(phi),
                         eta(ProductSpec{{1, 1, 2}, {2, 2, -1}}), exact, 400));
    L.push_back(identity("psi-product-form", psi, eta(theta_product_spec(ThetaKind::Psi)),
                         exact, 400));
    L.push_back(identity("psi-neg-product-form", negvar(psi),
                         eta(ProductSpec{{1, 1, 1}, {4, 4, 1}, {2, 2, -1}}), exact, 400));
    L.push_back(identity("x-product-form", x, eta(theta_product_spec(ThetaKind::X)), exact, 400));
    L.push_back(identity("y-product-form", y, eta(theta_product_spec(ThetaKind::Y)), exact, 400));
    L.push_back(identity("a-sum-vs-lambert", a, theta(ThetaKind::A, /*alt=*/true), exact, 400));

    // --- 3-dissections ---------------------------------------------------
    L.push_back(identity("phi-3-dissection", phi,
                         add({subst(phi, 9), mul({monomial(2, 1), subst(x, 3)})}), exact, 400));
    L.push_back(identity("psi-3-dissection", psi,
                         add({subst(y, 3), mul({monomial(1, 1), subst(psi, 9)})}), exact, 400));
    L.push_back(identity("a-3-dissection", a, add({a3, a_correction}), exact, 400));

    // --- a(q)^5 and a(q)^6 mod 27 ---------------------------------------
    L.push_back(identity(
        "a-pow5-mod27", pow(a, 5),
        add({pow(a3, 5),
             mul({monomial(3, 1), pow(a3, 4), eta(ProductSpec{{9, 9, 3}, {3, 3, -1}})}),
             mul({monomial(9, 2), pow(a3, 3), eta(ProductSpec{{9, 9, 6}, {3, 3, -2}})})}),
        EvalMode::Mod(27), 300));
    L.push_back(identity(
        "a-pow6-mod27", pow(a, 6),
        add({pow(a3, 6),
             mul({monomial(9, 1), pow(a3, 5), eta(ProductSpec{{9, 9, 3}, {3, 3, -1}})})}),
        EvalMode::Mod(27), 300));

    // --- (q;q)^{p^alpha} = (q^p;q^p)^{p^{alpha-1}} mod p^alpha ----------
    struct PrimePower { int p; int alpha; };
    for (const PrimePower pp : {PrimePower{2, 1}, {2, 2}, {3, 1}, {3, 2}, {3, 3}, {5, 1}}) {
        std::uint64_t palpha = 1;
        for (int i = 0; i < pp.alpha; ++i) palpha *= static_cast<std::uint64_t>(pp.p);
        L.push_back(identity(
            "eta-power-p" + std::to_string(pp.p) + "-a" + std::to_string(pp.alpha),
            eta(ProductSpec{{1, 1, static_cast<long long>(palpha)}}),
            eta(ProductSpec{{pp.p, pp.p, static_cast<long long>(palpha / pp.p)}}),
            EvalMode::Mod(palpha), 300));
    }

    // --- the (q;q)^3 dissection ------------------------------------------
    L.push_back(identity("jacobi-cube", jacobi(), euler_cube, exact, 400));
    L.push_back(identity("lemma-3dis", euler_cube,
                         add({mul({eta(ProductSpec{{3, 3, 1}}), a3}),
                              neg(mul({monomial(3, 1), eta(ProductSpec{{9, 9, 3}})}))}),
                         exact, 400));
    L.push_back(identity("eta-cube-part0", extract(euler_cube, 3, 0), mul({euler, a}),
                         exact, 400));
    L.push_back(identity("eta-cube-part1", extract(euler_cube, 3, 1),
                         scale(-3, eta(ProductSpec{{3, 3, 3}})), exact, 400));

    // --- the two closed forms for cphi6 ----------------------------------
    L.push_back(identity("cphi6-gen-vs-oracle", gen, named("cphi6_oracle"), exact, 200));
    L.push_back(identity("cphi6-3n1-vs-gen", cphi6_3n1_expr(), extract(gen, 3, 1), exact, 300));
    L.push_back(identity("cphi6-3n1-vs-gen-mod2187", cphi6_3n1_expr(), extract(gen, 3, 1),
                         EvalMode::Mod(2187), 300));

    // --- reduction of the 3n+1 form mod 243 ------------------------------
    L.push_back(identity("cphi6-3n1-reduced-mod243", named("cphi6_3n1"),
                         scale(18, add({summand1, summand2, summand3})), EvalMode::Mod(243),
                         300));
    L.push_back(identity("phi-eta6-identity", eta_term1, mul({phi, eta(ProductSpec{{1, 1, 6}})}),
                         exact, 300));
    L.push_back(identity("psi-neg-eta3-identity",
                         eta(ProductSpec{{1, 1, 4}, {4, 4, 1}, {2, 2, -1}}),
                         mul({negvar(psi), euler_cube}), exact, 300));

    // --- the I / J / K pieces mod 27 -------------------------------------
    L.push_back(identity("eq-I", series_i,
                         scale(-6, mul({pow(a, 6), x, eta(ProductSpec{{1, 1, 1}, {3, 3, 3}})})),
                         EvalMode::Mod(27), 300));
    L.push_back(identity("eq-J", series_j,
                         scale(-6, mul({eta(ProductSpec{{2, 2, 2}, {4, 4, -1}}), pow(a, 6),
                                        theta(ThetaKind::Psi, false, -1, 3),
                                        eta(ProductSpec{{3, 3, 3}})})),
                         EvalMode::Mod(27), 300));
    L.push_back(identity("eq-I-equals-J", series_i, series_j, EvalMode::Mod(27), 300));
    L.push_back(identity("eq-K", series_k, zero, EvalMode::Mod(27), 300));

    // --- sum cphi6(9n+7) q^n mod 243 --------------------------------------
    L.push_back(identity("cphi6-9n7-mod243", extract(gen, 9, 7), scale(36, series_j),
                         EvalMode::Mod(243), 300));
    L.push_back(identity("cphi6-9n7-sum-mod243", extract(gen, 9, 7),
                         scale(18, add({series_i, series_j, series_k})), EvalMode::Mod(243),
                         300));

    // --- the dissected form of J and its vanishing progression -----------
    L.push_back(identity("eq-J-dissected", series_j,
                         scale(-6, mul({theta(ThetaKind::Phi, false, -1, 2), pow(a3, 6),
                                        theta(ThetaKind::Psi, false, -1, 3),
                                        eta(ProductSpec{{3, 3, 3}})})),
                         EvalMode::Mod(27), 300));
    L.push_back(identity(
        "eq-J-dissected-split", series_j,
        scale(-6, mul({add({theta(ThetaKind::Phi, false, -1, 18),
                            neg(mul({monomial(2, 2), theta(ThetaKind::X, false, -1, 6)}))}),
                       pow(a3, 6), theta(ThetaKind::Psi, false, -1, 3),
                       eta(ProductSpec{{3, 3, 3}})})),
        EvalMode::Mod(27), 300));
    L.push_back(identity("eq-J-progression1-vanishes", extract(series_j, 3, 1), zero,
                         EvalMode::Mod(27), 300));

    // --- sum cphi6(27n+7) q^n mod 243 -------------------------------------
    L.push_back(identity("cphi6-27n7-first-mod243", extract(gen, 27, 7),
                         scale(-216, mul({theta(ThetaKind::Phi, false, -1, 6), pow(a, 6),
                                          negvar(psi), euler_cube})),
                         EvalMode::Mod(243), 300));
    L.push_back(identity(
        "cphi6-27n7-mod243", extract(gen, 27, 7),
        scale(27, mul({theta(ThetaKind::Phi, false, -1, 6), pow(a3, 6),
                       add({theta(ThetaKind::Y, false, -1, 3),
                            neg(mul({monomial(1, 1), theta(ThetaKind::Psi, false, -1, 9)}))}),
                       add({mul({a3, eta(ProductSpec{{3, 3, 1}})}),
                            neg(mul({monomial(3, 1), eta(ProductSpec{{9, 9, 3}})}))})})),
        EvalMode::Mod(243), 300));

    // --- sum cphi6(81n+61) q^n mod 243 ------------------------------------
    L.push_back(identity("cphi6-81n61-first-mod243", extract(gen, 81, 61),
                         scale(81, mul({theta(ThetaKind::Phi, false, -1, 2), pow(a, 6),
                                        theta(ThetaKind::Psi, false, -1, 3),
                                        eta(ProductSpec{{3, 3, 3}})})),
                         EvalMode::Mod(243), 300));
    L.push_back(identity(
        "cphi6-81n61-mod243", extract(gen, 81, 61),
        scale(81, mul({add({theta(ThetaKind::Phi, false, -1, 18),
                            neg(mul({monomial(2, 2), theta(ThetaKind::X, false, -1, 6)}))}),
                       pow(a3, 6), theta(ThetaKind::Psi, false, -1, 3),
                       eta(ProductSpec{{3, 3, 3}})})),
        EvalMode::Mod(243), 300));

    // --- the theorem's congruences (order >= 2005 in the full profile) ----
    L.push_back(congruence("thm-27n16-mod243", 27, 16, 243, 71));
    L.push_back(congruence("thm-81n61-mod81", 81, 61, 81, 24));
    L.push_back(congruence("thm-243n142-mod243", 243, 142, 243, 8));
    L.push_back(congruence("thm-729n547-mod243", 729, 547, 243, 3));
    L.push_back(congruence("thm-81n61-relation", 81, 61, 243, 24, RelationRhs{3, 9, 7}));

    // --- previously known congruences -------------------------------------
    L.push_back(congruence("hist-2n1-mod4", 2, 1, 4, 50));
    L.push_back(congruence("hist-3n1-mod9", 3, 1, 9, 50));
    L.push_back(congruence("hist-3n2-mod9", 3, 2, 9, 50));
    L.push_back(congruence("hist-3n2-mod27", 3, 2, 27, 50));
    L.push_back(congruence("hist-9n7-mod27", 9, 7, 27, 50));

    // --- the open mod-729 strengthening, tested as evidence only ----------
    L.push_back(congruence("conjecture-729", 243, 142, 729, 8, std::nullopt, "empirical"));

    return ledger;
}

}  // namespace qphi
