#pragma once

// Sampled checks of the search engine on micro scenarios: agreement with the
// brute-force oracle, and the order properties local MEV must satisfy.

#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mevni/engine.hpp"
#include "mevni/sampling.hpp"
#include "support/brute_force.hpp"

namespace properties {

using namespace mevni;

struct Outcome {
    std::string name;
    std::size_t samples = 0;
    std::size_t nonzero = 0;  // samples where the relation was exercised with a positive value
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

struct Draw {
    MicroSample sample;
    std::set<AccountId> observed;
    SearchBudget budget;
};

inline std::set<AccountId> deployed(const BlockchainState& s) {
    std::vector<AccountId> ids = s.contract_ids();
    return {ids.begin(), ids.end()};
}

inline std::set<AccountId> random_subset(std::mt19937_64& rng, const std::set<AccountId>& from) {
    std::set<AccountId> out;
    for (const auto& a : from)
        if (rng() & 1) out.insert(a);
    return out;
}

// Observed set: Δ half the time, otherwise any nonempty subset of the contracts.
inline Draw draw(std::mt19937_64& rng, int min_depth, int max_depth) {
    Draw d{random_micro_scenario(rng), {}, {}};
    const Scenario& sc = d.sample.scenario;
    d.observed = (rng() & 1) ? sc.delta() : random_subset(rng, sc.all_contracts());
    if (d.observed.empty()) d.observed = {*sc.all_contracts().begin()};
    d.budget = *sc.budget;
    d.budget.max_depth = std::uniform_int_distribution<int>(min_depth, max_depth)(rng);
    return d;
}

inline std::string describe(const Draw& d, const std::string& what) {
    std::string obs;
    for (const auto& a : d.observed) obs += a.name + " ";
    return what + " [observed " + obs + "depth " + std::to_string(d.budget.max_depth) + "]\n" + d.sample.text;
}

inline void fail(Outcome& o, const Draw& d, const std::string& what) {
    if (o.failures.size() < 5) o.failures.push_back(describe(d, what));
}

inline Rational run(const Draw& d, const BlockchainState& s, const std::set<AccountId>& observed, const Restriction& r) {
    return lmev(s, observed, r, d.sample.scenario.prices, d.budget).value;
}

// Exhaustive search against the brute-force oracle, depths 2 to 4.
inline Outcome oracle_agreement(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    Outcome o{"exhaustive lmev matches brute force"};
    for (; o.samples < n; ++o.samples) {
        Draw d = draw(rng, 2, 4);
        const Scenario& sc = d.sample.scenario;
        bool restricted = rng() & 1;
        std::set<AccountId> allowed = restricted ? d.observed : sc.all_contracts();
        Restriction r = restricted ? Restriction::only(d.observed) : Restriction::all();
        MevResult got = lmev(sc.state, d.observed, r, sc.prices, d.budget);
        oracle::BruteForce bf(d.observed, allowed, sc.prices, d.budget.ceiling.convert_to<long>());
        Rational want = bf.lmev(sc.state, d.budget.max_depth);
        if (want > 0) ++o.nonzero;
        if (got.value != want)
            fail(o, d, "engine " + to_string(got.value) + " oracle " + to_string(want) +
                           (restricted ? " restricted" : " unrestricted"));
    }
    return o;
}

using Check = std::function<void(std::mt19937_64&, const Draw&, Outcome&)>;

inline Outcome sampled(const std::string& name, std::uint64_t seed, std::size_t n, const Check& check,
                       int max_depth = 3) {
    std::mt19937_64 rng(seed);
    Outcome o{name};
    for (; o.samples < n; ++o.samples) check(rng, draw(rng, 1, max_depth), o);
    return o;
}

inline Outcome empty_sets(std::uint64_t seed, std::size_t n) {
    return sampled("nothing observed or nothing allowed gives 0", seed, n, [](auto& rng, const Draw& d, Outcome& o) {
        const BlockchainState& s = d.sample.scenario.state;
        Restriction any = (rng() & 1) ? Restriction::all() : Restriction::only(random_subset(rng, deployed(s)));
        if (run(d, s, {}, any) != 0) fail(o, d, "empty observed set");
        if (run(d, s, d.observed, Restriction::only({})) != 0) fail(o, d, "empty restriction");
    });
}

inline Outcome restriction_monotone(std::uint64_t seed, std::size_t n) {
    return sampled("wider restriction never lowers lmev", seed, n, [](auto& rng, const Draw& d, Outcome& o) {
        const BlockchainState& s = d.sample.scenario.state;
        std::set<AccountId> narrow = random_subset(rng, deployed(s));
        std::set<AccountId> wide = narrow;
        for (const auto& a : random_subset(rng, deployed(s))) wide.insert(a);
        Rational lo = run(d, s, d.observed, Restriction::only(narrow));
        Rational hi = run(d, s, d.observed, Restriction::only(wide));
        if (lo > 0) ++o.nonzero;
        if (lo > hi) fail(o, d, to_string(lo) + " on the narrow set, " + to_string(hi) + " on the wide one");
    });
}

inline Outcome undeployed_ignored(std::uint64_t seed, std::size_t n) {
    return sampled("undeployed names in a restriction change nothing", seed, n,
                   [](auto& rng, const Draw& d, Outcome& o) {
                       const BlockchainState& s = d.sample.scenario.state;
                       std::set<AccountId> r = random_subset(rng, deployed(s));
                       std::set<AccountId> padded = r;
                       padded.insert(AccountId::contract("Ghost"));
                       padded.insert(AccountId::contract("Ghost2"));
                       Rational a = run(d, s, d.observed, Restriction::only(r));
                       Rational b = run(d, s, d.observed, Restriction::only(padded));
                       if (a > 0) ++o.nonzero;
                       if (a != b) fail(o, d, "padding changed " + to_string(a) + " to " + to_string(b));
                       Rational every = run(d, s, d.observed, Restriction::only(deployed(s)));
                       if (every != run(d, s, d.observed, Restriction::all())) fail(o, d, "all deployed vs universe");
                   });
}

inline Outcome bounded_by_wealth(std::uint64_t seed, std::size_t n) {
    return sampled("0 <= lmev <= wealth of the observed contracts", seed, n,
                   [](auto& rng, const Draw& d, Outcome& o) {
                       const Scenario& sc = d.sample.scenario;
                       Restriction r = (rng() & 1) ? Restriction::all() : Restriction::only(d.observed);
                       Rational v = run(d, sc.state, d.observed, r);
                       Rational cap = oracle::value_of(d.observed, sc.state, sc.prices);
                       if (v > 0) ++o.nonzero;
                       if (v < 0 || v > cap) fail(o, d, to_string(v) + " outside [0, " + to_string(cap) + "]");
                   });
}

inline Outcome bystanders_irrelevant(std::uint64_t seed, std::size_t n) {
    return sampled("wallets of other users do not matter", seed, n, [](auto& rng, const Draw& d, Outcome& o) {
        const Scenario& sc = d.sample.scenario;
        BlockchainState more = sc.state;
        std::uniform_int_distribution<int> amount(0, 5);
        for (const auto& t : sc.tokens) more.wallet_mut(AccountId::user("Z")).credit(t, amount(rng));
        Restriction r = (rng() & 1) ? Restriction::all() : Restriction::only(d.observed);
        Rational a = run(d, sc.state, d.observed, r);
        Rational b = run(d, more, d.observed, r);
        if (a > 0) ++o.nonzero;
        if (a != b) fail(o, d, "a bystander's wallet changed " + to_string(a) + " to " + to_string(b));
    });
}

inline Outcome richer_adversary(std::uint64_t seed, std::size_t n) {
    return sampled("a richer adversary never extracts less", seed, n, [](auto& rng, const Draw& d, Outcome& o) {
        const Scenario& sc = d.sample.scenario;
        BlockchainState rich = sc.state;
        std::uniform_int_distribution<int> amount(0, 3);
        for (const auto& adv : sc.state.adversary)
            for (const auto& t : sc.tokens) rich.wallet_mut(adv).credit(t, amount(rng));
        Restriction r = (rng() & 1) ? Restriction::all() : Restriction::only(d.observed);
        Rational poor = run(d, sc.state, d.observed, r);
        Rational more = run(d, rich, d.observed, r);
        if (more > 0) ++o.nonzero;
        if (poor > more) fail(o, d, to_string(poor) + " before topping up, " + to_string(more) + " after");
    });
}

inline Outcome ladder_monotone(std::uint64_t seed, std::size_t n) {
    return sampled(
        "rungs of the wealth ladder never decrease", seed, n,
        [](auto& rng, const Draw& d, Outcome& o) {
            const Scenario& sc = d.sample.scenario;
            Restriction r = (rng() & 1) ? Restriction::all() : Restriction::only(d.observed);
            // Generator moves do not depend on the wallet, so each rung reaches a
            // superset of the previous one. Exhaustive enumeration at rich
            // wallets would cost far more and adds nothing to the relation.
            SearchBudget b = d.budget;
            b.exhaustive = false;
            RichResult rr = rlmev_ladder(sc.state, d.observed, r, sc.prices, b);
            if (rr.ladder.empty()) fail(o, d, "empty ladder");
            for (std::size_t i = 1; i < rr.ladder.size(); ++i) {
                if (rr.ladder[i].scale <= rr.ladder[i - 1].scale) fail(o, d, "scales not increasing");
                if (rr.ladder[i].result.value < rr.ladder[i - 1].result.value)
                    fail(o, d, "rung " + std::to_string(i) + " dropped to " + to_string(rr.ladder[i].result.value));
            }
            if (!rr.ladder.empty() && rr.result.value != rr.ladder.back().result.value)
                fail(o, d, "result differs from the last rung");
            if (rr.result.value > 0) ++o.nonzero;
        },
        2);
}

inline Outcome restricted_below_unrestricted(std::uint64_t seed, std::size_t n) {
    return sampled("restricting to the observed contracts never raises lmev", seed, n,
                   [](auto&, const Draw& d, Outcome& o) {
                       const BlockchainState& s = d.sample.scenario.state;
                       Rational lo = run(d, s, d.observed, Restriction::only(d.observed));
                       Rational hi = run(d, s, d.observed, Restriction::all());
                       if (hi > lo) ++o.nonzero;
                       if (lo > hi) fail(o, d, to_string(lo) + " restricted, " + to_string(hi) + " unrestricted");
                   });
}

inline std::vector<Outcome> all_properties(std::uint64_t seed, std::size_t n) {
    return {empty_sets(seed, n),           restriction_monotone(seed + 1, n), undeployed_ignored(seed + 2, n),
            bounded_by_wealth(seed + 3, n), bystanders_irrelevant(seed + 4, n), richer_adversary(seed + 5, n),
            ladder_monotone(seed + 6, n),   restricted_below_unrestricted(seed + 7, n)};
}

}  // namespace properties
