#include "mevni/ledger.hpp"

#include <algorithm>

namespace mevni {

Wallet::Wallet(std::initializer_list<Entry> entries) {
    for (const auto& [t, a] : entries) credit(t, a);
}

Amount Wallet::balance(const Token& t) const {
    for (const auto& [tok, a] : entries_)
        if (tok == t) return a;
    return 0;
}

void Wallet::credit(const Token& t, const Amount& a) {
    if (a < 0) throw LedgerError("negative credit of " + t.symbol);
    if (a == 0) return;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), t,
                               [](const Entry& e, const Token& k) { return e.first < k; });
    if (it != entries_.end() && it->first == t)
        it->second += a;
    else
        entries_.insert(it, {t, a});
}

bool Wallet::debit(const Token& t, const Amount& a) {
    if (a < 0) throw LedgerError("negative debit of " + t.symbol);
    if (a == 0) return true;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), t,
                               [](const Entry& e, const Token& k) { return e.first < k; });
    if (it == entries_.end() || it->first != t || it->second < a) return false;
    it->second -= a;
    if (it->second == 0) entries_.erase(it);
    return true;
}

void Wallet::set(const Token& t, const Amount& a) {
    if (a < 0) throw LedgerError("negative balance of " + t.symbol);
    auto it = std::lower_bound(entries_.begin(), entries_.end(), t,
                               [](const Entry& e, const Token& k) { return e.first < k; });
    bool found = it != entries_.end() && it->first == t;
    if (a == 0) {
        if (found) entries_.erase(it);
    } else if (found) {
        it->second = a;
    } else {
        entries_.insert(it, {t, a});
    }
}

Wallet& Wallet::operator+=(const Wallet& other) {
    for (const auto& [t, a] : other.entries_) credit(t, a);
    return *this;
}

bool Wallet::covers(const Wallet& other) const {
    for (const auto& [t, a] : other.entries_)
        if (balance(t) < a) return false;
    return true;
}

Wallet Wallet::scaled(const Amount& k) const {
    Wallet w;
    for (const auto& [t, a] : entries_) w.credit(t, a * k);
    return w;
}

std::string Wallet::str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) out += ",";
        out += entries_[i].second.str() + ":" + entries_[i].first.symbol;
    }
    return out + "]";
}

const Value& Store::get(const std::string& key) const {
    static const Value null_value;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const auto& e, const std::string& k) { return e.first < k; });
    if (it != entries_.end() && it->first == key) return it->second;
    return null_value;
}

bool Store::has(const std::string& key) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const auto& e, const std::string& k) { return e.first < k; });
    return it != entries_.end() && it->first == key;
}

void Store::set(const std::string& key, Value v) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const auto& e, const std::string& k) { return e.first < k; });
    if (it != entries_.end() && it->first == key)
        it->second = std::move(v);
    else
        entries_.insert(it, {key, std::move(v)});
}

const ContractInstance* BlockchainState::contract(const AccountId& id) const {
    for (const auto& c : contracts)
        if (c.id == id) return &c;
    return nullptr;
}

ContractInstance* BlockchainState::contract(const AccountId& id) {
    for (auto& c : contracts)
        if (c.id == id) return &c;
    return nullptr;
}

std::optional<std::size_t> BlockchainState::index_of(const AccountId& id) const {
    for (std::size_t i = 0; i < contracts.size(); ++i)
        if (contracts[i].id == id) return i;
    return std::nullopt;
}

bool BlockchainState::has_account(const AccountId& id) const {
    if (id.is_user()) return users.count(id) > 0;
    return contract(id) != nullptr;
}

const Wallet& BlockchainState::wallet_of(const AccountId& id) const {
    static const Wallet empty;
    if (id.is_user()) {
        auto it = users.find(id);
        return it == users.end() ? empty : it->second;
    }
    const ContractInstance* c = contract(id);
    return c ? c->state.wallet : empty;
}

Wallet& BlockchainState::wallet_mut(const AccountId& id) {
    if (id.is_user()) return users[id];
    ContractInstance* c = contract(id);
    if (!c) throw LedgerError("unknown contract " + id.name);
    return c->state.wallet;
}

std::vector<AccountId> BlockchainState::contract_ids() const {
    std::vector<AccountId> out;
    out.reserve(contracts.size());
    for (const auto& c : contracts) out.push_back(c.id);
    return out;
}

std::set<Token> BlockchainState::tokens() const {
    std::set<Token> out;
    for (const auto& [id, w] : users)
        for (const auto& e : w.entries()) out.insert(e.first);
    for (const auto& c : contracts)
        for (const auto& e : c.state.wallet.entries()) out.insert(e.first);
    return out;
}

Amount BlockchainState::total_supply(const Token& t) const {
    Amount total = 0;
    for (const auto& [id, w] : users) total += w.balance(t);
    for (const auto& c : contracts) total += c.state.wallet.balance(t);
    return total;
}

Amount BlockchainState::total_units() const {
    Amount total = 0;
    for (const auto& t : tokens()) total += total_supply(t);
    return total;
}

BlockchainState BlockchainState::contracts_only() const {
    BlockchainState s;
    s.contracts = contracts;
    s.height = height;
    s.adversary = adversary;
    return s;
}

bool BlockchainState::same_contracts(const BlockchainState& other) const {
    if (contracts.size() != other.contracts.size()) return false;
    for (std::size_t i = 0; i < contracts.size(); ++i) {
        const auto& a = contracts[i];
        const auto& b = other.contracts[i];
        if (a.id != b.id || a.code != b.code || !(a.state == b.state)) return false;
    }
    return true;
}

bool operator==(const BlockchainState& a, const BlockchainState& b) {
    if (a.height != b.height || a.adversary != b.adversary) return false;
    if (!a.same_contracts(b)) return false;
    // Users with empty wallets are indistinguishable from absent ones.
    auto nonempty = [](const std::map<AccountId, Wallet>& m) {
        std::vector<std::pair<AccountId, Wallet>> v;
        for (const auto& [id, w] : m)
            if (!w.empty()) v.emplace_back(id, w);
        return v;
    };
    return nonempty(a.users) == nonempty(b.users);
}

Rational wealth_of_wallet(const Wallet& w, const PriceMap& prices) {
    Rational total = 0;
    for (const auto& [t, a] : w.entries()) {
        auto it = prices.find(t);
        if (it == prices.end()) throw LedgerError("no price for token " + t.symbol);
        total += it->second * a;
    }
    return total;
}

Rational wealth(const std::set<AccountId>& accounts, const BlockchainState& state, const PriceMap& prices) {
    Rational total = 0;
    for (const auto& id : accounts) total += wealth_of_wallet(state.wallet_of(id), prices);
    return total;
}

Rational gain(const std::set<AccountId>& accounts, const BlockchainState& before, const BlockchainState& after,
              const PriceMap& prices) {
    return wealth(accounts, after, prices) - wealth(accounts, before, prices);
}

bool richer_than(const BlockchainState& a, const BlockchainState& b) {
    if (!a.same_contracts(b)) throw LedgerError("richer_than: states have different contract parts");
    for (const auto& [id, w] : b.users)
        if (!a.wallet_of(id).covers(w)) return false;
    return true;
}

}  // namespace mevni
