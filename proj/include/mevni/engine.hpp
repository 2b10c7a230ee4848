#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mevni/vm.hpp"

namespace mevni {

struct SearchBudget {
    int max_depth = 4;  // K: longest trace explored
    int grid = 8;       // G: amount-grid resolution of the move generators
    // Enumerate every argument tuple from the method signatures instead of
    // asking the move generators. Amounts run up to `ceiling`.
    bool exhaustive = false;
    Amount ceiling = 10;
    std::optional<std::size_t> state_cap = 2'000'000;
    int threads = 1;
    bool memo = true;  // transposition table on canonical states
};

// Which contracts the adversary may target. `universe` admits every contract.
struct Restriction {
    bool universe = false;
    std::set<AccountId> contracts;

    static Restriction all() { return {true, {}}; }
    static Restriction only(std::set<AccountId> cs) { return {false, std::move(cs)}; }
    bool allows(const AccountId& c) const { return universe || contracts.count(c) > 0; }
    // The allowed contracts that are deployed in `state`, in deployment order.
    std::vector<AccountId> resolve(const BlockchainState& state) const;
    std::string str() const;
};

struct MevResult {
    Rational value;
    std::vector<Transaction> witness;
    // The search covered every behaviourally distinct trace (complete move
    // sets at every expanded state, and no new states left to reach).
    bool complete = false;
    // The value equals the wealth bound, so no trace can do better.
    bool bound_attained = false;
    // Zero for a structural reason: nothing observed, nothing callable, or nothing to take.
    bool trivial = false;
    bool cap_hit = false;
    SearchBudget budget;
    std::size_t states = 0;
    std::string warning;

    bool exact() const { return complete || bound_attained || trivial; }
};

// Moves proposed at `state`: the union of move generators (or the exhaustive
// enumeration) over the allowed contracts, for every adversary account.
MoveSet adversary_moves(const BlockchainState& state, const Restriction& restriction, const SearchBudget& budget);

// Every argument tuple a signature admits, amounts bounded by the ceiling
// and the adversary's balance. `complete` is false when a bound cut anything off.
MoveSet enumerate_calls(const BlockchainState& state, const AccountId& contract, const AccountId& adversary,
                        const Amount& ceiling);

// Digest of the state used as the transposition-table key. The block height
// is included only when some contract reads it.
std::string canonical_key(const BlockchainState& state);

// Largest loss of the observed contracts over adversary traces of length <= K.
MevResult lmev(const BlockchainState& state, const std::set<AccountId>& observed, const Restriction& restriction,
               const PriceMap& prices, const SearchBudget& budget = {});

// Largest adversary gain over traces of length <= K.
MevResult global_mev(const BlockchainState& state, const PriceMap& prices, const SearchBudget& budget = {});

struct LadderRung {
    Amount scale;  // adversary wallet = scale * W0
    MevResult result;
};

// Local MEV for a wealthy adversary: W0 per token is the contracts' total
// holdings plus G units; every adversary gets scale*W0 with the scale
// doubling until two consecutive rungs agree or the wealth bound is reached.
struct RichResult {
    MevResult result;
    std::vector<LadderRung> ladder;
    Wallet w0;
};

constexpr unsigned rich_scale_cap_log2 = 20;

// W0: per priced token, everything the contracts hold plus G units.
Wallet rich_base_wallet(const BlockchainState& contracts, const PriceMap& prices, const SearchBudget& budget);

RichResult rlmev_ladder(const BlockchainState& contracts, const std::set<AccountId>& observed,
                        const Restriction& restriction, const PriceMap& prices, const SearchBudget& budget = {});
MevResult rlmev(const BlockchainState& contracts, const std::set<AccountId>& observed, const Restriction& restriction,
                const PriceMap& prices, const SearchBudget& budget = {});
std::vector<std::pair<Amount, Rational>> stability_probe(const BlockchainState& contracts,
                                                         const std::set<AccountId>& observed,
                                                         const Restriction& restriction, const PriceMap& prices,
                                                         const SearchBudget& budget = {});

// The adversary set used when a state names none.
AccountId default_adversary();

// `state` with each adversary's wallet replaced by `w` (adding M if the state has no adversary).
BlockchainState with_adversary_wallet(const BlockchainState& state, const Wallet& w);

}  // namespace mevni
