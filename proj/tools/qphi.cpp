// qphi command-line front end: expand coefficients, run ledger entries,
// compare the two cphi6 constructions, and scan for empirical congruences.
//
// Exit codes: 0 when everything requested passes, 1 when any check fails,
// 2 on usage or evaluation errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qphi/verify.hpp"

namespace {

using namespace qphi;

struct RingChoice {
    bool exact = true;
    std::uint64_t modulus = 0;
};

RingChoice parse_ring(const std::string& text) {
    if (text == "exact") return {true, 0};
    if (text.rfind("mod:", 0) == 0) {
        const std::string m = text.substr(4);
        if (!m.empty() && m.find_first_not_of("0123456789") == std::string::npos)
            return {false, std::stoull(m)};
    }
    throw CLI::ValidationError("--ring", "expected \"exact\" or \"mod:M\"");
}

struct CacheFlags {
    std::string dir;
    bool disabled = false;

    std::optional<SeriesCache> make() const {
        if (disabled) return std::nullopt;
        std::string d = dir;
        if (d.empty()) {
            if (const char* env = std::getenv("QPHI_CACHE")) d = env;
        }
        if (d.empty()) d = ".qphi-cache";
        return SeriesCache(d);
    }

    void add_flags(CLI::App* app) {
        app->add_option("--cache", dir,
                        "cache directory (default ./.qphi-cache, or $QPHI_CACHE)");
        app->add_flag("--no-cache", disabled, "disable the series cache");
    }
};

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path);
    out << j.dump(2) << '\n';
    if (!out) throw engine_error("cannot write " + path);
}

Ledger load_ledger(const std::string& path) {
    if (path.empty()) return builtin_ledger();
    std::ifstream in(path);
    if (!in) throw engine_error("cannot read ledger file " + path);
    return ledger_from_json(nlohmann::json::parse(in));
}

nlohmann::ordered_json base_parameters(const std::string& command) {
    nlohmann::ordered_json p;
    p["command"] = command;
    return p;
}

int run_expand(int k, std::int64_t terms, const RingChoice& ring, const std::string& out_path,
               const CacheFlags& cache_flags) {
    const std::string id = k == 6 ? "cphi6_oracle" : "cphi_oracle_k" + std::to_string(k);
    auto cache = cache_flags.make();
    auto expand_in = [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if (cache) {
            if (auto s = cache->load(id, r, terms)) return std::move(*s);
        }
        Series<R> s = cphi_oracle(r, k, terms);
        if (cache) cache->store(id, s);
        return s;
    };

    auto print_and_save = [&](const auto& series) {
        for (std::int64_t n = 0; n <= series.order(); ++n)
            std::cout << "cphi_" << k << "(" << n << ") = "
                      << series.ring().to_decimal(series[n]) << '\n';
        if (!out_path.empty()) {
            nlohmann::ordered_json j;
            j["engine_version"] = std::string(kEngineVersion);
            auto params = base_parameters("expand");
            params["k"] = std::to_string(k);
            params["terms"] = std::to_string(terms);
            params["ring"] = ring.exact ? "exact" : "mod:" + std::to_string(ring.modulus);
            j["parameters"] = std::move(params);
            j["series"] = series_to_json(series);
            write_json(out_path, j);
        }
    };

    if (ring.exact)
        print_and_save(expand_in(ZRing{}));
    else
        print_and_save(expand_in(ModRing(ring.modulus)));
    return 0;
}

int run_verify(const std::vector<std::string>& entries, std::optional<std::int64_t> terms,
               const std::string& ledger_path, const std::string& out_path, int jobs,
               Profile profile, bool all_entries, const CacheFlags& cache_flags) {
    const Ledger ledger = load_ledger(ledger_path);
    FrobeniusProvider provider = [&]() {
        auto cache = cache_flags.make();
        return cache ? FrobeniusProvider(std::move(*cache)) : FrobeniusProvider();
    }();

    RunOptions opts;
    opts.profile = profile;
    opts.jobs = jobs;
    opts.order_override = terms;
    if (!all_entries) opts.only = entries;

    const auto reports = run_ledger(ledger, provider, opts);
    render_report_table(reports, std::cout);

    if (!out_path.empty()) {
        auto params = base_parameters(all_entries ? "verify-all" : "verify");
        params["profile"] = profile_name(profile);
        params["jobs"] = std::to_string(jobs);
        if (terms) params["terms"] = std::to_string(*terms);
        if (!all_entries) {
            auto arr = nlohmann::ordered_json::array();
            for (const auto& e : entries) arr.push_back(e);
            params["entries"] = std::move(arr);
        }
        params["ledger"] = ledger_path.empty() ? "builtin" : ledger_path;
        write_json(out_path, report_to_json(reports, ledger_sha256(ledger), params));
    }
    return reports_exit_code(reports);
}

int run_oracle(int k, std::int64_t terms, const RingChoice& ring, const std::string& out_path,
               const CacheFlags& cache_flags) {
    if (k != 6)
        throw CLI::ValidationError("--k", "only k=6 has a second construction to compare");
    LedgerEntry entry;
    entry.kind = LedgerEntry::Kind::Identity;
    entry.name = "cphi6-gen-vs-oracle";
    entry.lhs = ex::named("cphi6_gen");
    entry.rhs = ex::named("cphi6_oracle");
    entry.mode = ring.exact ? EvalMode::Exact() : EvalMode::Mod(ring.modulus);
    entry.order = terms;

    FrobeniusProvider provider = [&]() {
        auto cache = cache_flags.make();
        return cache ? FrobeniusProvider(std::move(*cache)) : FrobeniusProvider();
    }();
    const std::vector<VerificationReport> reports = {check_identity(entry, &provider)};
    render_report_table(reports, std::cout);

    if (!out_path.empty()) {
        auto params = base_parameters("oracle");
        params["k"] = std::to_string(k);
        params["terms"] = std::to_string(terms);
        params["ring"] = ring.exact ? "exact" : "mod:" + std::to_string(ring.modulus);
        write_json(out_path, report_to_json(reports, ledger_sha256(builtin_ledger()), params));
    }
    return reports_exit_code(reports);
}

int run_scan(int k, std::int64_t max_a, const std::vector<std::uint64_t>& moduli,
             std::int64_t terms, std::int64_t min_witnesses, const std::string& out_path) {
    ScanOptions opts;
    opts.colors = k;
    opts.max_a = max_a;
    opts.moduli = moduli;
    opts.order = terms;
    opts.min_witnesses = min_witnesses;
    const auto claims = scan_congruences(opts);

    for (const auto& c : claims)
        std::cout << "cphi_" << k << "(" << c.a << "n+" << c.b << ") == 0 (mod " << c.modulus
                  << ") for n = 0.." << c.n_range - 1 << "  [" << c.note << "]\n";
    if (claims.empty()) std::cout << "no congruences found\n";

    if (!out_path.empty()) {
        nlohmann::ordered_json j;
        j["engine_version"] = std::string(kEngineVersion);
        auto params = base_parameters("scan");
        params["k"] = std::to_string(k);
        params["max_a"] = std::to_string(max_a);
        {
            auto arr = nlohmann::ordered_json::array();
            for (auto m : moduli) arr.push_back(std::to_string(m));
            params["moduli"] = std::move(arr);
        }
        params["terms"] = std::to_string(terms);
        params["min_witnesses"] = std::to_string(min_witnesses);
        j["parameters"] = std::move(params);
        auto arr = nlohmann::ordered_json::array();
        for (const auto& c : claims) {
            nlohmann::ordered_json e;
            e["source"] = c.source;
            e["a"] = std::to_string(c.a);
            e["b"] = std::to_string(c.b);
            e["mod"] = std::to_string(c.modulus);
            e["n_range"] = std::to_string(c.n_range);
            e["note"] = c.note;
            arr.push_back(std::move(e));
        }
        j["claims"] = std::move(arr);
        write_json(out_path, j);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact q-series engine for 6-colored generalized Frobenius partitions"};
    app.require_subcommand(1);

    // expand
    auto* expand = app.add_subcommand("expand", "print cphi_k(0..N)");
    int expand_k = 6;
    std::int64_t expand_terms = 20;
    std::string expand_ring = "exact", expand_out;
    CacheFlags expand_cache;
    expand->add_option("--k", expand_k, "number of colors (1..8)")->check(CLI::Range(1, 8));
    expand->add_option("--terms", expand_terms, "truncation order N")->required();
    expand->add_option("--ring", expand_ring, "exact | mod:M");
    expand->add_option("--out", expand_out, "write series JSON here");
    expand_cache.add_flags(expand);

    // verify
    auto* verify = app.add_subcommand("verify", "run named ledger entries");
    std::vector<std::string> verify_entries;
    std::int64_t verify_terms = -1;
    std::string verify_ledger, verify_out;
    int verify_jobs = 1;
    CacheFlags verify_cache;
    verify->add_option("--entry", verify_entries, "ledger entry name (repeatable)")->required();
    verify->add_option("--terms", verify_terms, "override the entry's order");
    verify->add_option("--ledger", verify_ledger, "ledger JSON file (default: builtin)");
    verify->add_option("--out", verify_out, "write report JSON here");
    verify->add_option("--jobs", verify_jobs, "worker threads")->check(CLI::Range(1, 64));
    verify_cache.add_flags(verify);

    // verify-all
    auto* verify_all = app.add_subcommand("verify-all", "run the whole ledger");
    std::string profile_text = "full";
    std::string all_ledger, all_out;
    int all_jobs = 1;
    CacheFlags all_cache;
    verify_all->add_option("--profile", profile_text, "quick | full")
        ->check(CLI::IsMember({"quick", "full"}));
    verify_all->add_option("--ledger", all_ledger, "ledger JSON file (default: builtin)");
    verify_all->add_option("--out", all_out, "write report JSON here");
    verify_all->add_option("--jobs", all_jobs, "worker threads")->check(CLI::Range(1, 64));
    all_cache.add_flags(verify_all);

    // oracle
    auto* oracle = app.add_subcommand("oracle", "compare the closed form against the oracle");
    int oracle_k = 6;
    std::int64_t oracle_terms = 200;
    std::string oracle_ring = "exact", oracle_out;
    CacheFlags oracle_cache;
    oracle->add_option("--k", oracle_k, "number of colors (must be 6)");
    oracle->add_option("--terms", oracle_terms, "comparison order");
    oracle->add_option("--ring", oracle_ring, "exact | mod:M");
    oracle->add_option("--out", oracle_out, "write report JSON here");
    oracle_cache.add_flags(oracle);

    // scan
    auto* scan = app.add_subcommand("scan", "search for empirical congruences");
    int scan_k = 6;
    std::int64_t scan_max_a = 1, scan_terms = 0, scan_witnesses = 10;
    std::vector<std::uint64_t> scan_moduli;
    std::string scan_out;
    scan->add_option("--k", scan_k, "number of colors (1..8)")->check(CLI::Range(1, 8));
    scan->add_option("--max-a", scan_max_a, "largest progression stride")->required();
    scan->add_option("--moduli", scan_moduli, "moduli to test")->required()->delimiter(',');
    scan->add_option("--terms", scan_terms, "truncation order N")->required();
    scan->add_option("--min-witnesses", scan_witnesses, "minimum instances per progression");
    scan->add_option("--out", scan_out, "write claims JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // ParseError codes vary; usage problems are exit 2
    }

    try {
        if (expand->parsed())
            return run_expand(expand_k, expand_terms, parse_ring(expand_ring), expand_out,
                              expand_cache);
        if (verify->parsed())
            return run_verify(verify_entries,
                              verify_terms >= 0 ? std::optional<std::int64_t>(verify_terms)
                                                : std::nullopt,
                              verify_ledger, verify_out, verify_jobs, Profile::Full, false,
                              verify_cache);
        if (verify_all->parsed())
            return run_verify({}, std::nullopt, all_ledger, all_out, all_jobs,
                              profile_text == "quick" ? Profile::Quick : Profile::Full, true,
                              all_cache);
        if (oracle->parsed())
            return run_oracle(oracle_k, oracle_terms, parse_ring(oracle_ring), oracle_out,
                              oracle_cache);
        if (scan->parsed())
            return run_scan(scan_k, scan_max_a, scan_moduli, scan_terms, scan_witnesses,
                            scan_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
