#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mevni/value.hpp"

namespace mevni {

class LedgerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Token balances with zero entries pruned, kept sorted by symbol.
class Wallet {
public:
    using Entry = std::pair<Token, Amount>;

    Wallet() = default;
    Wallet(std::initializer_list<Entry> entries);

    Amount balance(const Token& t) const;
    void credit(const Token& t, const Amount& a);
    // Returns false (and leaves the wallet untouched) when funds are short.
    bool debit(const Token& t, const Amount& a);
    void set(const Token& t, const Amount& a);

    Wallet& operator+=(const Wallet& other);
    bool covers(const Wallet& other) const;  // pointwise >=
    Wallet scaled(const Amount& k) const;

    bool empty() const { return entries_.empty(); }
    const std::vector<Entry>& entries() const { return entries_; }
    std::string str() const;

    friend bool operator==(const Wallet&, const Wallet&) = default;

private:
    std::vector<Entry> entries_;
};

// Contract storage: string keys, scalar values, sorted by key.
class Store {
public:
    const Value& get(const std::string& key) const;
    bool has(const std::string& key) const;
    void set(const std::string& key, Value v);
    const std::vector<std::pair<std::string, Value>>& entries() const { return entries_; }
    friend bool operator==(const Store&, const Store&) = default;

private:
    std::vector<std::pair<std::string, Value>> entries_;
};

struct ContractState {
    Wallet wallet;
    Store store;
    friend bool operator==(const ContractState&, const ContractState&) = default;
};

struct ContractCode;

struct ContractInstance {
    AccountId id;
    std::shared_ptr<const ContractCode> code;
    ContractState state;
};

struct BlockchainState {
    std::map<AccountId, Wallet> users;
    std::vector<ContractInstance> contracts;  // deployment order
    std::uint64_t height = 0;
    std::set<AccountId> adversary;

    const ContractInstance* contract(const AccountId& id) const;
    ContractInstance* contract(const AccountId& id);
    std::optional<std::size_t> index_of(const AccountId& id) const;
    bool has_account(const AccountId& id) const;

    // Wallet of a user or contract; an empty wallet for unknown accounts.
    const Wallet& wallet_of(const AccountId& id) const;
    // Creates an empty user wallet on first use.
    Wallet& wallet_mut(const AccountId& id);

    std::vector<AccountId> contract_ids() const;
    std::set<Token> tokens() const;
    Amount total_supply(const Token& t) const;
    Amount total_units() const;

    // Same contracts and height, no user wallets.
    BlockchainState contracts_only() const;
    bool same_contracts(const BlockchainState& other) const;
};

bool operator==(const BlockchainState& a, const BlockchainState& b);

using PriceMap = std::map<Token, Rational>;

Rational wealth(const std::set<AccountId>& accounts, const BlockchainState& state, const PriceMap& prices);
Rational wealth_of_wallet(const Wallet& w, const PriceMap& prices);
Rational gain(const std::set<AccountId>& accounts, const BlockchainState& before, const BlockchainState& after,
              const PriceMap& prices);

// a ≥ b in the richer-state order: same contracts, user wallets pointwise larger.
bool richer_than(const BlockchainState& a, const BlockchainState& b);

}  // namespace mevni
