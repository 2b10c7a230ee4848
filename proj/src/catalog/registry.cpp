#include <stdexcept>

#include "detail.hpp"

namespace mevni::catalog {

namespace detail {

Amount routed_liquidity(const BlockchainState& s, const AccountId& self, const Token& t) {
    Amount sum = 0;
    for (const AccountId& d : deps({self}, s))
        if (d != self) sum += s.wallet_of(d).balance(t);
    return sum;
}

namespace {

Value call_getter(const BlockchainState& s, const AccountId& c, const std::string& method) {
    if (!s.contract(c)) throw DeployError(c.name + " is not deployed");
    const AccountId who = AccountId::user("<deployer>");
    CallOutcome out = invoke_as(s, who, who, c, method, {}, {});
    if (out.observation.aborted) throw DeployError(c.name + "." + method + "() aborted");
    return out.observation.return_value;
}

}  // namespace

std::pair<Token, Token> token_pair(const BlockchainState& s, const AccountId& c) {
    Value v = call_getter(s, c, "getTokens");
    if (!v.is_tuple() || v.as_tuple().size() != 2) throw DeployError(c.name + ".getTokens() is not a pair");
    return {v.as_tuple()[0].as_token(), v.as_tuple()[1].as_token()};
}

Token single_token(const BlockchainState& s, const AccountId& c, const std::string& method) {
    return call_getter(s, c, method).as_token();
}

std::vector<Value> value_args(std::initializer_list<Value> xs) { return std::vector<Value>(xs); }

const Value& arg_at(const std::vector<Value>& args, std::size_t i) {
    static const Value null_value;
    return i < args.size() ? args[i] : null_value;
}

}  // namespace detail

const std::vector<CatalogEntry>& all() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> v{amm(),       airdrop(),     exchange(),     bet(),
                                    best_swap(), swap_router(), lending_pool(), lp_arbitrage(),
                                    flash_loan_arbitrage()};
        for (auto& e : counterexample_contracts()) v.push_back(std::move(e));
        return v;
    }();
    return entries;
}

const CatalogEntry* find(const std::string& name) {
    for (const auto& e : all())
        if (e.name == name) return &e;
    return nullptr;
}

std::vector<Value> positional_args(const CatalogEntry& entry, const std::vector<std::pair<std::string, Value>>& named) {
    std::vector<Value> out(entry.constructor_schema.size());
    std::vector<bool> seen(out.size(), false);
    for (const auto& [k, v] : named) {
        std::size_t i = 0;
        while (i < entry.constructor_schema.size() && entry.constructor_schema[i].name != k) ++i;
        if (i == entry.constructor_schema.size())
            throw std::invalid_argument(entry.name + " has no constructor parameter '" + k + "'");
        if (seen[i]) throw std::invalid_argument("parameter '" + k + "' given twice");
        seen[i] = true;
        out[i] = v;
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!seen[i] && !entry.constructor_schema[i].optional)
            throw std::invalid_argument(entry.name + " requires parameter '" + entry.constructor_schema[i].name + "'");
    while (!out.empty() && out.back().is_null()) out.pop_back();
    return out;
}

std::vector<Amount> grid_amounts(const Amount& base, int grid) {
    std::vector<Amount> out;
    if (base <= 0) return out;
    out.push_back(1);
    for (int k = 1; k <= grid; ++k) {
        Amount x = base * k / grid;
        if (x > out.back()) out.push_back(x);
    }
    return out;
}

}  // namespace mevni::catalog
