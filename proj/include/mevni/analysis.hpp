#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mevni/engine.hpp"

namespace mevni {

enum class Holds { holds, violated, unknown };

enum class Justification {
    none,
    zero_mev,              // condition 1: the new contracts have nothing to lose
    contract_independent,  // condition 2
    stable,                // condition 3
    direct_search,
    counterexample,
};

std::string to_string(Holds h);
std::string to_string(Justification j);
// 1, 2 or 3 for the sufficient conditions, 0 otherwise.
int condition_number(Justification j);

struct Verdict {
    Holds holds = Holds::unknown;
    Justification justification = Justification::none;
    std::vector<Transaction> witness;
    // Unrestricted and restricted MEV of the new contracts, when computed.
    std::optional<MevResult> lhs;
    std::optional<MevResult> rhs;
    // For violations: the restricted side is exact, so the gap is real and
    // not an artefact of the search budget.
    bool certified = false;
    std::string note;

    std::optional<Rational> lhs_value() const { return lhs ? std::optional<Rational>(lhs->value) : std::nullopt; }
    std::optional<Rational> rhs_value() const { return rhs ? std::optional<Rational>(rhs->value) : std::nullopt; }
};

struct AnalysisOptions {
    // Run both searches even when a sufficient condition settles the verdict.
    bool compute_values = false;
    // Re-run inexact searches on micro states (<= micro_units tokens) in exhaustive mode.
    bool certify = true;
    Amount micro_units = 10;
};

// Contracts of `state` outside deps(keep) are dropped; users are kept.
BlockchainState strip(const BlockchainState& state, const std::set<AccountId>& keep);

struct TokenSets {
    std::set<Token> in;
    std::set<Token> out;
};

// Declared token sets of the fragment, widened by every transfer seen on
// adversary traces of length <= 2.
TokenSets intok_outtok(const BlockchainState& state, const std::set<AccountId>& fragment,
                       const SearchBudget& budget = {});
bool token_independent(const BlockchainState& state, const std::set<AccountId>& a, const std::set<AccountId>& b,
                       const SearchBudget& budget = {});
bool contract_independent(const BlockchainState& state, const std::set<AccountId>& a, const std::set<AccountId>& b);

struct Stability {
    Holds stable = Holds::unknown;
    std::vector<Transaction> witness;  // trace whose last move changed a probe
    std::optional<ProbeCall> probe;
    std::string note;
};

// Does any adversary move on `gamma` change what `delta` can observe of it?
// Checked at `state` and at states reachable by up to two moves on gamma.
Stability stable_wrt_adversary(const BlockchainState& state, const std::set<AccountId>& gamma,
                               const std::set<AccountId>& delta, const SearchBudget& budget = {});

// `state` holds Γ | Δ; `delta` names the new contracts.
Verdict nonint(const BlockchainState& state, const std::set<AccountId>& delta, const PriceMap& prices,
               const SearchBudget& budget = {}, const AnalysisOptions& opts = {});
Verdict richnonint(const BlockchainState& state, const std::set<AccountId>& delta, const PriceMap& prices,
                   const SearchBudget& budget = {}, const AnalysisOptions& opts = {});

struct EpsilonResult {
    Holds holds = Holds::unknown;
    MevResult before;  // global MEV without the new contracts
    MevResult after;   // global MEV with them
    Rational epsilon;
    bool certified = false;
};

EpsilonResult epsilon_composable(const BlockchainState& before, const BlockchainState& after, const Rational& epsilon,
                                 const PriceMap& prices, const SearchBudget& budget = {});

struct StripCheck {
    bool hypothesis_met = false;
    std::set<AccountId> shared;       // contracts the hypothesis constrains
    std::set<AccountId> not_agnostic;  // members of `shared` lacking the flag
    std::optional<bool> passes;        // empty when the hypothesis is not met
    bool equal = false;                // the two sides agree (computed either way)
    std::string lhs_label;
    std::string rhs_label;
    std::string lhs_value;
    std::string rhs_value;
    std::string note;
};

// rlmev of `observed` restricted to `restriction`, on Γ and on strip(Γ, observed).
StripCheck verify_stripping(const BlockchainState& gamma, const std::set<AccountId>& observed,
                            const Restriction& restriction, const PriceMap& prices, const SearchBudget& budget = {});
// richnonint(Γ, Δ) against richnonint(strip(Γ, Δ), Δ); `state` holds Γ | Δ.
StripCheck verify_stripping_nonint(const BlockchainState& state, const std::set<AccountId>& delta,
                                   const PriceMap& prices, const SearchBudget& budget = {});

// The composability-property battery: positive rows are checked as
// implications over scenario families, negative rows by their counterexamples.
struct BatteryRow {
    std::string property;
    std::string instance;
    bool expect_valid = true;  // the implication is expected to hold in general
    bool ok = false;
    std::string detail;
};

struct BatteryReport {
    std::vector<BatteryRow> rows;
    bool all_ok() const;
};

BatteryReport structural_battery(const std::string& scenario_dir, const SearchBudget& budget = {});

}  // namespace mevni
