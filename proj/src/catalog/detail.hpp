#pragma once

// Helpers shared by the catalog translation units.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mevni/catalog.hpp"

namespace mevni::catalog::detail {

inline Value tok(const Token& t) { return Value::token(t); }
inline Value acct(const AccountId& a) { return Value::account(a); }

inline MethodSpec method(std::string name, MethodBody body, AttachSpec attach = AttachSpec::none(),
                         std::vector<ParamSpec> params = {}, bool getter = false) {
    MethodSpec m;
    m.name = std::move(name);
    m.body = std::move(body);
    m.attach = std::move(attach);
    m.params = std::move(params);
    m.getter = getter;
    return m;
}

inline MethodSpec getter(std::string name, MethodBody body, std::vector<ParamSpec> params = {}) {
    return method(std::move(name), std::move(body), AttachSpec::none(), std::move(params), true);
}

inline void add(ContractCode& c, MethodSpec m) {
    std::string n = m.name;
    c.methods.emplace(std::move(n), std::move(m));
}

inline Transaction tx(const AccountId& origin, const AccountId& callee, std::string method,
                      std::vector<Value> args = {}, Wallet attached = {}) {
    return Transaction{origin, callee, std::move(method), std::move(args), std::move(attached)};
}

// Unbounded integer param enumerated over 0..ceiling.
inline ParamSpec amount_param(std::string name) { return ParamSpec{std::move(name), ParamKind::amount, {}, true}; }

// A lower-bound guard such as ymin: 0 admits every outcome any other value admits.
inline ParamSpec min_guard_param(std::string name) {
    return ParamSpec{std::move(name), ParamKind::scalar, {Value::integer(0)}, true};
}

inline ParamSpec scalar_param(std::string name, std::vector<Value> domain, bool complete) {
    return ParamSpec{std::move(name), ParamKind::scalar, std::move(domain), complete};
}

inline ParamSpec token_param(std::string name, const std::vector<Token>& ts) {
    std::vector<Value> dom;
    for (const auto& t : ts) dom.push_back(tok(t));
    return ParamSpec{std::move(name), ParamKind::token, std::move(dom), true};
}

inline std::vector<Value> small_ints(std::initializer_list<long long> xs) {
    std::vector<Value> out;
    for (auto x : xs) out.push_back(Value::integer(x));
    return out;
}

// The single (token, amount) attached to the current call; aborts otherwise.
inline std::pair<Token, Amount> single_attachment(const MethodEnv& env) {
    const auto& e = env.attached().entries();
    env.require(e.size() == 1, "exactly one token type attached");
    return e.front();
}

inline Amount int_arg_or(const MethodEnv& env, std::size_t i, long long fallback) {
    const Value& v = env.arg(i);
    return v.is_null() ? Amount(fallback) : v.as_int();
}

// Σ balance of t over the strict dependencies of `self`: the liquidity a
// wrapper routes into, used to scale its amount grid.
Amount routed_liquidity(const BlockchainState& s, const AccountId& self, const Token& t);

// Calls c.getTokens() on the pre-deployment state.
std::pair<Token, Token> token_pair(const BlockchainState& s, const AccountId& c);
Token single_token(const BlockchainState& s, const AccountId& c, const std::string& method);

std::vector<Value> value_args(std::initializer_list<Value> xs);

const Value& arg_at(const std::vector<Value>& args, std::size_t i);

}  // namespace mevni::catalog::detail
