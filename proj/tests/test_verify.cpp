#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <fstream>

#include "qphi/verify.hpp"

using namespace qphi;

namespace {

const ZRing Z;

LedgerEntry make_identity(std::string name, ExprPtr lhs, ExprPtr rhs, EvalMode mode,
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

bool has_entry(const Ledger& ledger, const std::string& name) {
    return ledger.find(name) != nullptr;
}

}  // namespace

TEST_CASE("check_identity is reflexive") {
    auto e = make_identity("phi-eq-phi", ex::theta(ThetaKind::Phi), ex::theta(ThetaKind::Phi),
                           EvalMode::Exact(), 10);
    auto rep = check_identity(e, nullptr);
    CHECK(rep.status == Status::Pass);
    CHECK(rep.checked_through == 10);
    CHECK_FALSE(rep.first_failure.has_value());
}

TEST_CASE("check_identity reports the first differing coefficient") {
    // phi vs psi differ first at q^2 (0 vs ... phi: 1,2,0,...; psi: 1,1,0)
    auto e = make_identity("phi-vs-psi", ex::theta(ThetaKind::Phi), ex::theta(ThetaKind::Psi),
                           EvalMode::Exact(), 10);
    auto rep = check_identity(e, nullptr);
    REQUIRE(rep.status == Status::Fail);
    REQUIRE(rep.first_failure.has_value());
    CHECK(rep.first_failure->index == 1);
    CHECK(rep.first_failure->lhs == "2");
    CHECK(rep.first_failure->rhs == "1");
}

TEST_CASE("check_identity surfaces evaluation problems as errors") {
    auto bad = make_identity("bad-inverse", ex::inv(ex::monomial(2)), ex::monomial(1),
                             EvalMode::Exact(), 5);
    auto rep = check_identity(bad, nullptr);
    CHECK(rep.status == Status::Error);
    CHECK_FALSE(rep.message.empty());

    auto orphan = make_identity("orphan", ex::named("cphi6_gen"), ex::monomial(1),
                                EvalMode::Exact(), 5);
    CHECK(check_identity(orphan, nullptr).status == Status::Error);
}

TEST_CASE("check_congruence on known progressions") {
    FrobeniusProvider provider;
    const ModRing ring(2187);

    CongruenceClaim claim;
    claim.source = "cphi6_gen";
    claim.a = 27;
    claim.b = 16;
    claim.modulus = 243;
    claim.n_range = 20;
    auto coeffs = provider.get("cphi6_gen", claim.required_order(), ring);
    auto rep = check_congruence(claim, coeffs);
    CHECK(rep.status == Status::Pass);

    CongruenceClaim mod4;
    mod4.source = "cphi6_gen";
    mod4.a = 2;
    mod4.b = 1;
    mod4.modulus = 4;
    mod4.n_range = 50;
    auto coeffs4 = provider.get("cphi6_gen", mod4.required_order(), ModRing(4));
    CHECK(check_congruence(mod4, coeffs4).status == Status::Pass);

    CongruenceClaim relation;
    relation.source = "cphi6_gen";
    relation.a = 81;
    relation.b = 61;
    relation.modulus = 243;
    relation.rhs = RelationRhs{3, 9, 7};
    relation.n_range = 12;
    auto coeffs_rel = provider.get("cphi6_gen", relation.required_order(), ring);
    CHECK(check_congruence(relation, coeffs_rel).status == Status::Pass);
}

TEST_CASE("check_congruence error paths") {
    CongruenceClaim claim;
    claim.source = "cphi6_gen";
    claim.a = 27;
    claim.b = 16;
    claim.modulus = 243;
    claim.n_range = 5;

    // insufficient order
    auto short_series = cphi6_gen(Z, 50);
    CHECK(check_congruence(claim, short_series).status == Status::Error);

    // ring does not determine residues mod 243
    auto wrong_ring = cphi6_gen(ModRing(4), claim.required_order());
    CHECK(check_congruence(claim, wrong_ring).status == Status::Error);

    // a failing claim carries a witness
    CongruenceClaim false_claim;
    false_claim.source = "cphi6_gen";
    false_claim.a = 3;
    false_claim.b = 0;
    false_claim.modulus = 9;
    false_claim.n_range = 3;
    auto coeffs = cphi6_gen(Z, 6);
    auto rep = check_congruence(false_claim, coeffs);
    REQUIRE(rep.status == Status::Fail);
    REQUIRE(rep.first_failure.has_value());
    CHECK(rep.first_failure->index == 0);  // cphi6(0) = 1 is not 0 mod 9
    CHECK(rep.first_failure->lhs == "1");
}

TEST_CASE("builtin ledger carries every chain entry") {
    const Ledger ledger = builtin_ledger();
    const std::vector<std::string> required = {
        "phi-product-form", "phi-neg-product-form", "psi-product-form", "psi-neg-product-form",
        "x-product-form", "y-product-form", "a-sum-vs-lambert",
        "phi-3-dissection", "psi-3-dissection", "a-3-dissection",
        "a-pow5-mod27", "a-pow6-mod27",
        "eta-power-p2-a1", "eta-power-p2-a2", "eta-power-p3-a1", "eta-power-p3-a2",
        "eta-power-p3-a3", "eta-power-p5-a1",
        "jacobi-cube", "lemma-3dis", "eta-cube-part0", "eta-cube-part1",
        "cphi6-gen-vs-oracle", "cphi6-3n1-vs-gen", "cphi6-3n1-vs-gen-mod2187",
        "cphi6-3n1-reduced-mod243", "phi-eta6-identity", "psi-neg-eta3-identity",
        "eq-I", "eq-J", "eq-I-equals-J", "eq-K",
        "cphi6-9n7-mod243", "cphi6-9n7-sum-mod243",
        "eq-J-dissected", "eq-J-dissected-split", "eq-J-progression1-vanishes",
        "cphi6-27n7-first-mod243", "cphi6-27n7-mod243",
        "cphi6-81n61-first-mod243", "cphi6-81n61-mod243",
        "thm-27n16-mod243", "thm-81n61-mod81", "thm-243n142-mod243", "thm-729n547-mod243",
        "thm-81n61-relation",
        "hist-2n1-mod4", "hist-3n1-mod9", "hist-3n2-mod9", "hist-3n2-mod27", "hist-9n7-mod27",
        "conjecture-729"};
    for (const auto& name : required) {
        INFO(name);
        CHECK(has_entry(ledger, name));
    }
    CHECK(ledger.entries.size() == required.size());
}

TEST_CASE("ledger JSON round-trips and matches the shipped file") {
    const Ledger ledger = builtin_ledger();
    const auto j = ledger_to_json(ledger);
    const Ledger parsed = ledger_from_json(j);
    CHECK(ledger_to_json(parsed) == j);
    CHECK(ledger_sha256(parsed) == ledger_sha256(ledger));

    const std::string path = std::string(QPHI_SOURCE_DIR) + "/data/ledger.json";
    std::ifstream in(path);
    REQUIRE(in.good());
    const auto file_json = nlohmann::json::parse(in);
    CHECK(nlohmann::json(j) == file_json);
}

TEST_CASE("report JSON round-trips bytewise") {
    const Ledger ledger = builtin_ledger();
    FrobeniusProvider provider;
    RunOptions opts;
    opts.only = {"phi-product-form", "jacobi-cube"};
    opts.order_override = 60;
    auto reports = run_ledger(ledger, provider, opts);

    nlohmann::ordered_json params;
    params["command"] = "verify";
    const auto j = report_to_json(reports, ledger_sha256(ledger), params);
    const std::string text = j.dump(2);
    const auto reparsed = nlohmann::ordered_json::parse(text);
    CHECK(reparsed.dump(2) == text);
    CHECK(j.at("results").size() == 2);
    CHECK(j.at("results").at(0).at("status") == "pass");
}

TEST_CASE("run_ledger on a cheap subset, single- and multi-threaded") {
    const Ledger ledger = builtin_ledger();
    RunOptions opts;
    opts.only = {"phi-product-form", "psi-product-form", "x-product-form", "y-product-form",
                 "jacobi-cube", "lemma-3dis", "eta-power-p3-a3", "a-pow6-mod27"};
    opts.order_override = 80;

    FrobeniusProvider p1;
    auto serial = run_ledger(ledger, p1, opts);
    REQUIRE(serial.size() == opts.only.size());
    for (const auto& r : serial) {
        INFO(r.name);
        CHECK(r.status == Status::Pass);
    }

    opts.jobs = 3;
    FrobeniusProvider p2;
    auto parallel = run_ledger(ledger, p2, opts);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(parallel[i].name == serial[i].name);
        CHECK(parallel[i].status == serial[i].status);
        CHECK(parallel[i].checked_through == serial[i].checked_through);
    }
}

TEST_CASE("run_ledger rejects unknown entry names") {
    const Ledger ledger = builtin_ledger();
    FrobeniusProvider provider;
    RunOptions opts;
    opts.only = {"no-such-entry"};
    CHECK_THROWS_AS(run_ledger(ledger, provider, opts), contract_error);
}

TEST_CASE("identity passes persist under truncation") {
    const Ledger ledger = builtin_ledger();
    FrobeniusProvider provider;
    const LedgerEntry* e = ledger.find("lemma-3dis");
    REQUIRE(e != nullptr);
    CHECK(check_identity(*e, &provider, std::nullopt, std::int64_t{400}).status == Status::Pass);
    CHECK(check_identity(*e, &provider, std::nullopt, std::int64_t{150}).status == Status::Pass);
}

TEST_CASE("a corrupted ledger constant is caught with a witness") {
    // flip 189 -> 188 inside the shipped 3n+1 transcription
    auto j = ledger_to_json(builtin_ledger());
    std::string text = j.dump();
    const auto pos = text.find("\"189\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 5, "\"188\"");
    Ledger corrupted = ledger_from_json(nlohmann::json::parse(text));

    FrobeniusProvider provider;
    RunOptions opts;
    opts.only = {"cphi6-3n1-vs-gen"};
    opts.order_override = 40;
    auto reports = run_ledger(corrupted, provider, opts);
    REQUIRE(reports.size() == 1);
    REQUIRE(reports[0].status == Status::Fail);
    REQUIRE(reports[0].first_failure.has_value());
    CHECK(reports[0].first_failure->lhs != reports[0].first_failure->rhs);
}

TEST_CASE("an error in one entry does not stop the run") {
    Ledger ledger;
    ledger.entries.push_back(make_identity("will-error", ex::named("no-such-series"),
                                           ex::monomial(1), EvalMode::Exact(), 5));
    ledger.entries.push_back(make_identity("will-pass", ex::jacobi(),
                                           ex::eta(ProductSpec{{1, 1, 3}}), EvalMode::Exact(),
                                           40));
    FrobeniusProvider provider;
    auto reports = run_ledger(ledger, provider);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].status == Status::Error);
    CHECK(reports[1].status == Status::Pass);
    CHECK(reports_exit_code(reports) == 2);
}

TEST_CASE("scan finds the small congruences") {
    ScanOptions opts;
    opts.colors = 6;
    opts.max_a = 3;
    opts.moduli = {4, 9};
    opts.order = 200;
    auto claims = scan_congruences(opts);
    auto found = [&](std::int64_t a, std::int64_t b, std::uint64_t m) {
        return std::any_of(claims.begin(), claims.end(), [&](const CongruenceClaim& c) {
            return c.a == a && c.b == b && c.modulus == m;
        });
    };
    CHECK(found(2, 1, 4));
    CHECK(found(3, 1, 9));
    CHECK(found(3, 2, 9));
    CHECK_FALSE(found(3, 0, 9));
    for (const auto& c : claims) CHECK(c.note == "empirical");
}

TEST_CASE("scan rediscovers the theorem's progressions at their sharp moduli") {
    ScanOptions opts;
    opts.colors = 6;
    opts.max_a = 243;
    opts.moduli = {81, 243};
    opts.order = 2005;
    opts.min_witnesses = 8;
    auto claims = scan_congruences(opts);
    auto found = [&](std::int64_t a, std::int64_t b, std::uint64_t m) {
        return std::any_of(claims.begin(), claims.end(), [&](const CongruenceClaim& c) {
            return c.a == a && c.b == b && c.modulus == m;
        });
    };
    CHECK(found(27, 16, 243));
    CHECK(found(243, 142, 243));
    CHECK(found(81, 61, 81));
    // (81n+61) holds mod 81 only; cphi6(61) has 3-adic valuation exactly 4
    CHECK_FALSE(found(81, 61, 243));
}

TEST_CASE("scan edge cases") {
    ScanOptions empty;
    empty.colors = 6;
    empty.max_a = 3;
    empty.order = 200;
    CHECK(scan_congruences(empty).empty());

    ScanOptions tiny;
    tiny.colors = 6;
    tiny.max_a = 30;
    tiny.moduli = {9};
    tiny.order = 40;  // not enough instances for a = 30
    CHECK_THROWS_AS(scan_congruences(tiny), contract_error);
}

TEST_CASE("sha256 known answer") {
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("expression JSON round-trips") {
    const auto tree = cphi6_3n1_expr();
    const auto j = expr_to_json(tree);
    const auto back = expr_from_json(j);
    CHECK(expr_to_json(back) == j);
    // and evaluates identically
    CHECK(eval_expr(tree, 12, Z) == eval_expr(back, 12, Z));

    CHECK_THROWS_AS(expr_from_json(nlohmann::json::parse("{\"op\":\"gamma\"}")), contract_error);
}

TEST_CASE("theta node with a signed-power wrapper") {
    const auto node = ex::theta(ThetaKind::Psi, false, -1, 3);
    const auto j = expr_to_json(node);
    CHECK(j.at("sign") == -1);
    CHECK(j.at("m") == 3);
    auto direct = eval_at_signed_power_to(theta_sum(ThetaKind::Psi, 40), -1, 3, 120);
    CHECK(eval_expr(node, 120, Z) == direct);
}
