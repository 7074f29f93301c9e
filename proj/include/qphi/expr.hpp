#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qphi/theta.hpp"

namespace qphi {

/// Expression trees over the engine's constructors. Ledger entries store
/// their two sides as trees so an entry is plain data: it can be shipped
/// as JSON, hashed, mutated in tests, and evaluated in any ring.
enum class ExprOp {
    Monomial,     // c * q^power
    Eta,          // eta quotient from a ProductSpec
    Theta,        // named theta series, optional (sign, m) argument wrapper
    JacobiCube,   // (q;q)^3 as the closed Jacobi sum
    Named,        // externally provided series ("cphi6_gen", ...)
    Add,
    Mul,
    Neg,
    Pow,
    Scale,        // integer constant times a subtree
    Subst,        // q -> q^m
    NegVar,       // q -> -q
    SignedPower,  // f((sign*q)^m)
    Extract,      // progression mn+r, reindexed
    Inverse,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprOp op{};
    mpz_class coeff;            // Monomial, Scale
    std::int64_t power = 0;     // Monomial
    ProductSpec eta;            // Eta
    ThetaKind theta_kind{};     // Theta
    bool theta_alt_form = false;
    int sign = 1;               // Theta wrapper, SignedPower
    std::int64_t m = 1;         // Theta wrapper, Subst, SignedPower, Extract
    std::int64_t r = 0;         // Extract
    unsigned long long exp = 0; // Pow
    std::string id;             // Named
    std::vector<ExprPtr> args;
};

namespace ex {

inline ExprPtr monomial(mpz_class c, std::int64_t power = 0) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Monomial;
    e->coeff = std::move(c);
    e->power = power;
    return e;
}
inline ExprPtr monomial(long long c, std::int64_t power = 0) { return monomial(mpz_class(static_cast<long>(c)), power); }
inline ExprPtr one() { return monomial(1); }

inline ExprPtr eta(ProductSpec spec) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Eta;
    e->eta = std::move(spec);
    return e;
}

inline ExprPtr theta(ThetaKind kind, bool alt_form = false, int sign = 1, std::int64_t m = 1) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Theta;
    e->theta_kind = kind;
    e->theta_alt_form = alt_form;
    e->sign = sign;
    e->m = m;
    return e;
}

inline ExprPtr jacobi() {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::JacobiCube;
    return e;
}

inline ExprPtr named(std::string id) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Named;
    e->id = std::move(id);
    return e;
}

inline ExprPtr add(std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Add;
    e->args = std::move(args);
    return e;
}

inline ExprPtr mul(std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Mul;
    e->args = std::move(args);
    return e;
}

inline ExprPtr neg(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Neg;
    e->args = {std::move(a)};
    return e;
}

inline ExprPtr pow(ExprPtr a, unsigned long long k) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Pow;
    e->exp = k;
    e->args = {std::move(a)};
    return e;
}

inline ExprPtr scale(mpz_class c, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Scale;
    e->coeff = std::move(c);
    e->args = {std::move(a)};
    return e;
}
inline ExprPtr scale(long long c, ExprPtr a) { return scale(mpz_class(static_cast<long>(c)), std::move(a)); }

inline ExprPtr subst(ExprPtr a, std::int64_t m) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Subst;
    e->m = m;
    e->args = {std::move(a)};
    return e;
}

inline ExprPtr negvar(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::NegVar;
    e->args = {std::move(a)};
    return e;
}

inline ExprPtr signed_power(ExprPtr a, int sign, std::int64_t m) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::SignedPower;
    e->sign = sign;
    e->m = m;
    e->args = {std::move(a)};
    return e;
}

inline ExprPtr extract(ExprPtr a, std::int64_t m, std::int64_t r) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Extract;
    e->m = m;
    e->r = r;
    e->args = {std::move(a)};
    return e;
}

inline ExprPtr inv(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Inverse;
    e->args = {std::move(a)};
    return e;
}

}  // namespace ex

// ---------------------------------------------------------------------------
// JSON form

inline nlohmann::ordered_json expr_to_json(const ExprPtr& e) {
    using nlohmann::ordered_json;
    ordered_json j;
    switch (e->op) {
        case ExprOp::Monomial:
            j["op"] = "monomial";
            j["coeff"] = e->coeff.get_str();
            if (e->power != 0) j["power"] = e->power;
            return j;
        case ExprOp::Eta:
            j["op"] = "eta";
            j["factors"] = e->eta.to_json();
            return j;
        case ExprOp::Theta:
            j["op"] = "theta";
            j["kind"] = theta_tag(e->theta_kind);
            if (e->theta_alt_form) j["form"] = "alt";
            if (e->sign != 1) j["sign"] = e->sign;
            if (e->m != 1) j["m"] = e->m;
            return j;
        case ExprOp::JacobiCube:
            j["op"] = "jacobi_cube";
            return j;
        case ExprOp::Named:
            j["op"] = "named";
            j["id"] = e->id;
            return j;
        case ExprOp::Add:
        case ExprOp::Mul: {
            j["op"] = e->op == ExprOp::Add ? "add" : "mul";
            auto args = ordered_json::array();
            for (const auto& a : e->args) args.push_back(expr_to_json(a));
            j["args"] = std::move(args);
            return j;
        }
        case ExprOp::Neg:
            j["op"] = "neg";
            j["arg"] = expr_to_json(e->args[0]);
            return j;
        case ExprOp::Pow:
            j["op"] = "pow";
            j["exp"] = e->exp;
            j["arg"] = expr_to_json(e->args[0]);
            return j;
        case ExprOp::Scale:
            j["op"] = "scale";
            j["coeff"] = e->coeff.get_str();
            j["arg"] = expr_to_json(e->args[0]);
            return j;
        case ExprOp::Subst:
            j["op"] = "subst";
            j["m"] = e->m;
            j["arg"] = expr_to_json(e->args[0]);
            return j;
        case ExprOp::NegVar:
            j["op"] = "negate_variable";
            j["arg"] = expr_to_json(e->args[0]);
            return j;
        case ExprOp::SignedPower:
            j["op"] = "signed_power";
            j["sign"] = e->sign;
            j["m"] = e->m;
            j["arg"] = expr_to_json(e->args[0]);
            return j;
        case ExprOp::Extract:
            j["op"] = "extract";
            j["m"] = e->m;
            j["r"] = e->r;
            j["arg"] = expr_to_json(e->args[0]);
            return j;
        case ExprOp::Inverse:
            j["op"] = "inverse";
            j["arg"] = expr_to_json(e->args[0]);
            return j;
    }
    throw contract_error("unknown expression node");
}

inline ExprPtr expr_from_json(const nlohmann::json& j) {
    require(j.is_object() && j.contains("op"), "expression JSON needs an \"op\" field");
    const std::string op = j.at("op").get<std::string>();
    const auto arg = [&]() { return expr_from_json(j.at("arg")); };
    if (op == "monomial") {
        mpz_class c(j.at("coeff").get<std::string>());
        return ex::monomial(std::move(c), j.value("power", std::int64_t{0}));
    }
    if (op == "eta") return ex::eta(ProductSpec::from_json(j.at("factors")));
    if (op == "theta") {
        return ex::theta(theta_kind_from_tag(j.at("kind").get<std::string>()),
                         j.value("form", std::string("sum")) == "alt",
                         j.value("sign", 1), j.value("m", std::int64_t{1}));
    }
    if (op == "jacobi_cube") return ex::jacobi();
    if (op == "named") return ex::named(j.at("id").get<std::string>());
    if (op == "add" || op == "mul") {
        std::vector<ExprPtr> args;
        for (const auto& a : j.at("args")) args.push_back(expr_from_json(a));
        require(!args.empty(), "add/mul needs at least one argument");
        return op == "add" ? ex::add(std::move(args)) : ex::mul(std::move(args));
    }
    if (op == "neg") return ex::neg(arg());
    if (op == "pow") return ex::pow(arg(), j.at("exp").get<unsigned long long>());
    if (op == "scale") return ex::scale(mpz_class(j.at("coeff").get<std::string>()), arg());
    if (op == "subst") return ex::subst(arg(), j.at("m").get<std::int64_t>());
    if (op == "negate_variable") return ex::negvar(arg());
    if (op == "signed_power")
        return ex::signed_power(arg(), j.at("sign").get<int>(), j.at("m").get<std::int64_t>());
    if (op == "extract")
        return ex::extract(arg(), j.at("m").get<std::int64_t>(), j.at("r").get<std::int64_t>());
    if (op == "inverse") return ex::inv(arg());
    throw contract_error("unknown expression op: \"" + op + "\"");
}

// ---------------------------------------------------------------------------
// Evaluation

/// Supplies the series behind Named nodes. Implementations must be pure:
/// identical (id, order, ring) requests yield identical coefficients.
class NamedProvider {
public:
    virtual ~NamedProvider() = default;
    virtual Series<ZRing> get(const std::string& id, std::int64_t order, const ZRing& ring) = 0;
    virtual Series<ModRing> get(const std::string& id, std::int64_t order, const ModRing& ring) = 0;
};

namespace detail {

template <typename R>
using EvalMemo = std::map<std::pair<const Expr*, std::int64_t>, Series<R>>;

template <typename R>
Series<R> eval_node(const ExprPtr& e, std::int64_t order, const R& ring,
                    NamedProvider* provider, EvalMemo<R>& memo) {
    const auto key = std::make_pair(e.get(), order);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    const auto child = [&](std::size_t i, std::int64_t n) {
        return eval_node<R>(e->args[i], n, ring, provider, memo);
    };

    Series<R> result = [&]() -> Series<R> {
        switch (e->op) {
            case ExprOp::Monomial:
                return Series<R>::monomial(ring, order, ring.from_mpz(e->coeff), e->power);
            case ExprOp::Eta:
                return eta_quotient(ring, e->eta, order);
            case ExprOp::Theta: {
                if (e->m == 1 && e->sign == 1)
                    return e->theta_alt_form ? theta_alt(ring, e->theta_kind, order)
                                             : theta_sum(ring, e->theta_kind, order);
                Series<R> inner = e->theta_alt_form
                                      ? theta_alt(ring, e->theta_kind, order / e->m)
                                      : theta_sum(ring, e->theta_kind, order / e->m);
                return eval_at_signed_power_to(inner, e->sign, e->m, order);
            }
            case ExprOp::JacobiCube:
                return jacobi_cube(ring, order);
            case ExprOp::Named:
                if (!provider)
                    throw engine_error("no provider for named series \"" + e->id + "\"");
                return provider->get(e->id, order, ring);
            case ExprOp::Add: {
                Series<R> s = child(0, order);
                for (std::size_t i = 1; i < e->args.size(); ++i) s = add(s, child(i, order));
                return s;
            }
            case ExprOp::Mul: {
                Series<R> s = child(0, order);
                for (std::size_t i = 1; i < e->args.size(); ++i) s = mul(s, child(i, order));
                return s;
            }
            case ExprOp::Neg:
                return negate(child(0, order));
            case ExprOp::Pow:
                return pow(child(0, order), e->exp);
            case ExprOp::Scale:
                return scale(child(0, order), ring.from_mpz(e->coeff));
            case ExprOp::Subst:
                require(e->m >= 1, "subst: m must be >= 1");
                return substitute_power_to(child(0, order / e->m), e->m, order);
            case ExprOp::NegVar:
                return negate_variable(child(0, order));
            case ExprOp::SignedPower:
                require(e->m >= 1, "signed_power: m must be >= 1");
                return eval_at_signed_power_to(child(0, order / e->m), e->sign, e->m, order);
            case ExprOp::Extract:
                return extract_progression(child(0, e->m * order + e->r), e->m, e->r);
            case ExprOp::Inverse:
                return inverse(child(0, order));
        }
        throw contract_error("unknown expression node");
    }();

    auto [it, inserted] = memo.emplace(key, std::move(result));
    return it->second;
}

}  // namespace detail

/// Evaluate a tree to the given order. Shared subtrees (same node object)
/// are computed once per call.
template <typename R>
Series<R> eval_expr(const ExprPtr& e, std::int64_t order, const R& ring,
                    NamedProvider* provider = nullptr) {
    detail::EvalMemo<R> memo;
    return detail::eval_node<R>(e, order, ring, provider, memo);
}

/// Record, per named series id, the highest order this tree will request
/// when evaluated at `order`. Mirrors the evaluator's order propagation.
inline void collect_named_demands(const ExprPtr& e, std::int64_t order,
                                  std::map<std::string, std::int64_t>& demands) {
    switch (e->op) {
        case ExprOp::Named: {
            auto [it, inserted] = demands.emplace(e->id, order);
            if (!inserted && it->second < order) it->second = order;
            return;
        }
        case ExprOp::Subst:
        case ExprOp::SignedPower:
            collect_named_demands(e->args[0], order / e->m, demands);
            return;
        case ExprOp::Extract:
            collect_named_demands(e->args[0], e->m * order + e->r, demands);
            return;
        default:
            for (const auto& a : e->args) collect_named_demands(a, order, demands);
            return;
    }
}

}  // namespace qphi
