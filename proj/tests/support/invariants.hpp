#pragma once

// Randomized execution harness: walks random transactions through catalog
// states and checks the VM invariants on every step.

#include <random>
#include <string>
#include <vector>

#include "mevni/engine.hpp"
#include "mevni/sampling.hpp"
#include "support/common.hpp"

namespace invariants {

using namespace mevni;

inline const std::vector<std::string>& bundled() {
    static const std::vector<std::string> names = {
        "ex1",         "ex2",         "ex3",         "ex4",         "ex6",         "exB1",        "exB2",
        "exB3",        "exB4",        "exB5",        "exB6",        "exB7",        "exB8",        "table2_row1",
        "table2_row2", "table2_row3", "table2_row4", "table2_row5", "table2_row6", "table2_row7", "table2_row8"};
    return names;
}

inline bool is_wrapper(const ContractInstance& c) {
    const std::string& n = c.code->name;
    return n == "best_swap" || n == "swap_router" || n == "lp_arbitrage" || n == "flash_loan_arbitrage";
}

inline Amount pool_product(const ContractInstance& c) {
    return c.state.wallet.balance(c.state.store.get("T0").as_token()) *
           c.state.wallet.balance(c.state.store.get("T1").as_token());
}

struct Tally {
    std::size_t txs = 0;
    std::size_t valid = 0;
    std::size_t monotonic_checks = 0;
    std::size_t swaps_checked = 0;
    std::size_t wrapper_calls = 0;
    std::vector<std::string> failures;
};

// A bundled scenario or a fresh micro one.
inline BlockchainState random_state(std::mt19937_64& rng, std::string& label) {
    std::uniform_int_distribution<int> coin(0, 1);
    BlockchainState s;
    if (coin(rng)) {
        const auto& names = bundled();
        label = names[std::uniform_int_distribution<std::size_t>(0, names.size() - 1)(rng)];
        s = fixtures::load(label).state;
    } else {
        MicroSample m = random_micro_scenario(rng);
        label = m.text;
        s = m.scenario.state;
    }
    return s;
}

inline Transaction random_move(std::mt19937_64& rng, const BlockchainState& s) {
    SearchBudget b;
    b.grid = 4;
    MoveSet ms = adversary_moves(s, Restriction::all(), b);
    auto contracts = s.contract_ids();
    std::vector<Transaction> pool = ms.txs;
    AccountId adv = *s.adversary.begin();
    // Also raw enumerations, which include calls no generator proposes.
    const AccountId& c = contracts[std::uniform_int_distribution<std::size_t>(0, contracts.size() - 1)(rng)];
    MoveSet raw = enumerate_calls(s, c, adv, 3);
    pool.insert(pool.end(), raw.txs.begin(), raw.txs.end());
    return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
}

inline void check_step(const BlockchainState& s, const Transaction& tx, const std::string& label, Tally& t) {
    auto fail = [&](const std::string& what) {
        if (t.failures.size() < 20) t.failures.push_back(what + " on " + tx.str() + " in\n" + label);
    };
    ExecResult a = execute(s, tx);
    ExecResult b = execute(s, tx);
    ++t.txs;
    if (a.valid != b.valid || !(a.state == b.state)) fail("nondeterminism");
    if (a.state.height != s.height + 1) fail("height did not advance by one");

    if (!a.valid) {
        BlockchainState rolled = a.state;
        rolled.height = s.height;
        if (!(rolled == s)) fail("invalid transaction left changes behind");
        return;
    }
    ++t.valid;

    std::set<Token> tokens = s.tokens();
    for (const auto& tk : a.state.tokens()) tokens.insert(tk);
    for (const auto& tk : tokens)
        if (a.state.total_supply(tk) != s.total_supply(tk)) fail("supply of " + tk.symbol + " changed");

    for (const auto& c : s.contracts) {
        const ContractInstance* after = a.state.contract(c.id);
        if (c.code->name == "amm") {
            ++t.swaps_checked;
            if (pool_product(*after) < pool_product(c)) fail("constant product of " + c.id.name + " decreased");
        }
        if (is_wrapper(c)) {
            if (tx.callee == c.id) ++t.wrapper_calls;
            if (!after->state.wallet.empty()) fail(c.id.name + " kept a balance");
        }
    }

    if (t.valid % 10 == 0) {
        ++t.monotonic_checks;
        std::map<AccountId, Wallet> delta;
        for (const auto& tk : s.tokens()) delta[tx.origin].credit(tk, 5);
        if (!check_wallet_monotonic(s, tx, delta)) fail("wallet monotonicity");
    }
}

// Random walks of up to six steps until `n` transactions have been checked.
inline Tally run(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    Tally t;
    while (t.txs < n) {
        std::string label;
        BlockchainState s = random_state(rng, label);
        // A random top-up lets more of the adversary's calls go through.
        std::uniform_int_distribution<int> topup(0, 20);
        for (const auto& tk : s.tokens()) s.wallet_mut(*s.adversary.begin()).credit(tk, topup(rng));
        for (int step = 0; step < 6 && t.txs < n; ++step) {
            Transaction tx = random_move(rng, s);
            check_step(s, tx, label, t);
            ExecResult r = execute(s, tx);
            s = r.state;
        }
    }
    return t;
}

struct AgnosticReport {
    std::size_t checks = 0;
    std::vector<std::string> failures;
};

// Every generated call to a sender-agnostic contract, replayed from two
// different senders, must look the same apart from the sender's own wallet.
inline AgnosticReport spot_check_flagged() {
    AgnosticReport r;
    for (const auto& name : bundled()) {
        Scenario sc = fixtures::load(name);
        BlockchainState s = sc.state;
        AccountId adv = *s.adversary.begin();
        for (const auto& tk : s.tokens()) s.wallet_mut(adv).credit(tk, 50);
        for (const auto& c : s.contracts) {
            if (!c.code->sender_agnostic || !c.code->move_generator) continue;
            MoveSet ms = c.code->move_generator(s, c.id, adv, MoveOptions{4});
            for (const auto& tx : ms.txs) {
                ++r.checks;
                if (!sender_agnostic_spot_check(s, c.id, tx.method, tx.args, tx.attached, adv, adv,
                                                AccountId::user("Other")))
                    r.failures.push_back(name + ": " + tx.str());
            }
        }
    }
    return r;
}

// The sender-checking C0 of exB2 pays C1 but not anyone else.
inline bool exB2_c0_detected() {
    Scenario sc = fixtures::load("exB2");
    const ContractInstance* c0 = sc.state.contract(AccountId::contract("C0"));
    bool flagged_off = !c0->code->sender_agnostic;
    bool caught = !sender_agnostic_spot_check(sc.state, c0->id, "f", {}, {}, AccountId::user("M"),
                                              AccountId::contract("C1"), AccountId::user("M"));
    return flagged_off && caught;
}

}  // namespace invariants
