#pragma once

#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include "mevni/scenario.hpp"

namespace fixtures {

using namespace mevni;

inline Scenario load(const std::string& name) { return load_scenario(resolve_scenario(name, default_scenario_dir())); }

inline AccountId C(const std::string& n) { return AccountId::contract(n); }
inline AccountId U(const std::string& n) { return AccountId::user(n); }
inline Token T(const std::string& s) { return Token{s}; }

inline std::set<AccountId> contracts(std::initializer_list<const char*> names) {
    std::set<AccountId> out;
    for (const char* n : names) out.insert(C(n));
    return out;
}

inline Transaction call(const std::string& origin, const std::string& callee, const std::string& method,
                        std::vector<Value> args = {}, Wallet attached = {}) {
    return Transaction{U(origin), C(callee), method, std::move(args), std::move(attached)};
}

inline Wallet pay(const std::string& token, long long x) { return Wallet{{T(token), Amount(x)}}; }

inline Amount balance(const BlockchainState& s, const AccountId& a, const std::string& token) {
    return s.wallet_of(a).balance(T(token));
}

// The deployments of `sc` whose names are listed, in scenario order.
inline std::vector<Deployment> only(const Scenario& sc, std::initializer_list<const char*> names) {
    std::set<std::string> keep(names.begin(), names.end());
    std::vector<Deployment> out;
    for (const auto& d : sc.deployments)
        if (keep.count(d.id.name)) out.push_back(d);
    return out;
}

// The four-step attack on the bet in ex3.
inline std::vector<Transaction> bet_attack() {
    return {call("M", "AMM", "swap", {Value::integer(0)}, pay("ETH", 300)), call("M", "Bet", "bet", {}, pay("ETH", 10)),
            call("M", "Bet", "win"), call("M", "AMM", "swap", {Value::integer(0)}, pay("T", 200))};
}

inline std::vector<Transaction> ex1_attack() {
    return {call("M", "AMM1", "swap", {Value::integer(0)}, pay("T0", 3)),
            call("M", "AMM2", "swap", {Value::integer(0)}, pay("T1", 2))};
}

}  // namespace fixtures
