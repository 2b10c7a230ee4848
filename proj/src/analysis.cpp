#include "mevni/analysis.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace mevni {

std::string to_string(Holds h) {
    switch (h) {
        case Holds::holds:
            return "holds";
        case Holds::violated:
            return "violated";
        case Holds::unknown:
            break;
    }
    return "unknown";
}

std::string to_string(Justification j) {
    switch (j) {
        case Justification::zero_mev:
            return "zero-mev";
        case Justification::contract_independent:
            return "contract-independent";
        case Justification::stable:
            return "stable";
        case Justification::direct_search:
            return "direct-search";
        case Justification::counterexample:
            return "counterexample";
        case Justification::none:
            break;
    }
    return "none";
}

int condition_number(Justification j) {
    switch (j) {
        case Justification::zero_mev:
            return 1;
        case Justification::contract_independent:
            return 2;
        case Justification::stable:
            return 3;
        default:
            return 0;
    }
}

namespace {

std::set<AccountId> deployed(const std::set<AccountId>& ids, const BlockchainState& s) {
    std::set<AccountId> out;
    for (const auto& id : ids)
        if (s.contract(id)) out.insert(id);
    return out;
}

std::set<AccountId> all_contracts(const BlockchainState& s) {
    std::set<AccountId> out;
    for (const auto& c : s.contracts) out.insert(c.id);
    return out;
}

std::set<AccountId> minus(const std::set<AccountId>& a, const std::set<AccountId>& b) {
    std::set<AccountId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

std::set<AccountId> meet(const std::set<AccountId>& a, const std::set<AccountId>& b) {
    std::set<AccountId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

template <class T>
bool disjoint(const std::set<T>& a, const std::set<T>& b) {
    for (const auto& x : a)
        if (b.count(x)) return false;
    return true;
}

std::string names(const std::set<AccountId>& ids) {
    std::string s;
    for (const auto& id : ids) s += (s.empty() ? "" : ",") + id.name;
    return "{" + s + "}";
}

// States reachable from `root` by at most `depth` valid moves within the
// restriction, with the trace that first reached each.
std::vector<std::pair<BlockchainState, std::vector<Transaction>>> reachable(const BlockchainState& root,
                                                                           const Restriction& r,
                                                                           const SearchBudget& budget, int depth,
                                                                           bool* complete = nullptr) {
    std::vector<std::pair<BlockchainState, std::vector<Transaction>>> out{{root, {}}};
    std::unordered_set<std::string> seen{canonical_key(root)};
    std::size_t level_begin = 0;
    if (complete) *complete = true;
    for (int d = 0; d < depth; ++d) {
        std::size_t level_end = out.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            MoveSet ms = adversary_moves(out[i].first, r, budget);
            if (complete) *complete = *complete && ms.complete;
            for (const auto& tx : ms.txs) {
                ExecResult e = execute(out[i].first, tx);
                if (!e.valid) continue;
                if (!seen.insert(canonical_key(e.state)).second) continue;
                auto trace = out[i].second;
                trace.push_back(tx);
                out.emplace_back(std::move(e.state), std::move(trace));
            }
        }
        level_begin = level_end;
    }
    return out;
}

}  // namespace

BlockchainState strip(const BlockchainState& state, const std::set<AccountId>& keep) {
    std::set<AccountId> closure = deps(deployed(keep, state), state);
    BlockchainState out = state;
    out.contracts.clear();
    for (const auto& c : state.contracts)
        if (closure.count(c.id)) out.contracts.push_back(c);
    return out;
}

TokenSets intok_outtok(const BlockchainState& state, const std::set<AccountId>& fragment, const SearchBudget& budget) {
    TokenSets ts;
    std::set<AccountId> frag = deployed(fragment, state);
    if (frag.empty()) return ts;
    for (const auto& id : frag) {
        const ContractCode& code = *state.contract(id)->code;
        ts.in.insert(code.intok_decl.begin(), code.intok_decl.end());
        ts.out.insert(code.outtok_decl.begin(), code.outtok_decl.end());
    }
    // Widen by what the fragment actually receives or sends on short traces.
    for (const auto& [s, trace] : reachable(state, Restriction::all(), budget, 1)) {
        for (const auto& tx : adversary_moves(s, Restriction::all(), budget).txs) {
            ExecResult e = execute(s, tx);
            if (!e.valid) continue;
            for (const auto& id : frag) {
                const Wallet& before = s.wallet_of(id);
                const Wallet& after = e.state.wallet_of(id);
                std::set<Token> toks = s.tokens();
                for (const auto& t : e.state.tokens()) toks.insert(t);
                for (const auto& t : toks) {
                    if (after.balance(t) > before.balance(t)) ts.in.insert(t);
                    if (after.balance(t) < before.balance(t)) ts.out.insert(t);
                }
            }
        }
    }
    return ts;
}

bool token_independent(const BlockchainState& state, const std::set<AccountId>& a, const std::set<AccountId>& b,
                       const SearchBudget& budget) {
    TokenSets ta = intok_outtok(state, a, budget);
    TokenSets tb = intok_outtok(state, b, budget);
    return disjoint(ta.in, tb.out) && disjoint(tb.in, ta.out);
}

bool contract_independent(const BlockchainState& state, const std::set<AccountId>& a, const std::set<AccountId>& b) {
    return disjoint(deps(deployed(a, state), state), deps(deployed(b, state), state));
}

Stability stable_wrt_adversary(const BlockchainState& state, const std::set<AccountId>& gamma,
                               const std::set<AccountId>& delta, const SearchBudget& budget) {
    Stability out;
    std::set<AccountId> g = deployed(gamma, state);
    std::set<AccountId> d = deployed(delta, state);

    // The calls Δ makes out of itself are the only channel through which Γ shows.
    std::set<std::pair<AccountId, std::string>> sites;
    for (const auto& id : d)
        for (const auto& site : state.contract(id)->code->call_sites)
            if (!d.count(site.first)) sites.insert(site);
    if (sites.empty() || g.empty()) {
        out.stable = Holds::holds;
        out.note = "no calls from the subject into the context";
        return out;
    }

    std::vector<std::pair<AccountId, ProbeCall>> probes;  // (sender, call)
    for (const auto& id : d) {
        const ContractCode& code = *state.contract(id)->code;
        if (!code.probes) continue;
        for (auto& p : code.probes(state, id))
            if (!d.count(p.callee)) probes.emplace_back(id, std::move(p));
    }
    for (const auto& [callee, method] : sites) {
        bool covered = std::any_of(probes.begin(), probes.end(),
                                   [&](const auto& p) { return p.second.callee == callee && p.second.method == method; });
        if (!covered) {
            out.stable = Holds::unknown;
            out.note = "no probe covers " + callee.name + "." + method;
            return out;
        }
    }

    const AccountId origin = state.adversary.empty() ? default_adversary() : *state.adversary.begin();
    auto observe = [&](const BlockchainState& s) {
        std::vector<Observation> obs;
        for (const auto& [sender, p] : probes)
            obs.push_back(invoke_as(s, origin, sender, p.callee, p.method, p.args, p.attached).observation);
        return obs;
    };

    const Restriction on_gamma = Restriction::only(g);
    for (const auto& [s, trace] : reachable(state, on_gamma, budget, 1)) {
        std::vector<Observation> before = observe(s);
        for (const auto& tx : adversary_moves(s, on_gamma, budget).txs) {
            ExecResult e = execute(s, tx);
            if (!e.valid) continue;
            std::vector<Observation> after = observe(e.state);
            for (std::size_t i = 0; i < probes.size(); ++i) {
                if (before[i] == after[i]) continue;
                out.stable = Holds::violated;
                out.witness = trace;
                out.witness.push_back(tx);
                out.probe = probes[i].second;
                out.note = probes[i].second.str() + ": " + before[i].str() + " -> " + after[i].str();
                return out;
            }
        }
    }
    out.stable = Holds::holds;
    out.note = "probes unchanged by context moves within two steps";
    return out;
}

namespace {

bool is_micro(const BlockchainState& s, const AnalysisOptions& opts) { return s.total_units() <= opts.micro_units; }

MevResult certified_lmev(const BlockchainState& state, const std::set<AccountId>& observed, const Restriction& r,
                         const PriceMap& prices, const SearchBudget& budget, const AnalysisOptions& opts) {
    MevResult m = lmev(state, observed, r, prices, budget);
    if (m.exact() || !opts.certify || budget.exhaustive || !is_micro(state, opts)) return m;
    SearchBudget ex = budget;
    ex.exhaustive = true;
    ex.ceiling = std::max(state.total_units(), Amount(1));
    MevResult e = lmev(state, observed, r, prices, ex);
    // Both are lower bounds; keep the larger.
    return e.value >= m.value ? e : m;
}

Verdict decide(const BlockchainState& state, const std::set<AccountId>& delta, const PriceMap& prices,
               const SearchBudget& budget, const AnalysisOptions& opts, bool rich) {
    if (!check_well_formed(state)) throw WellFormednessError("composition is not well-formed");
    for (const auto& id : delta)
        if (!state.contract(id)) throw std::invalid_argument("new contract " + id.name + " is not deployed");
    const std::set<AccountId> d = delta;
    const std::set<AccountId> g = minus(all_contracts(state), d);

    Verdict v;
    auto search = [&](const Restriction& r) {
        return rich ? rlmev(state, d, r, prices, budget) : certified_lmev(state, d, r, prices, budget, opts);
    };
    auto fill_values = [&] {
        v.lhs = search(Restriction::all());
        v.rhs = search(Restriction::only(d));
    };
    auto settle = [&](Justification j, std::string note) {
        v.holds = Holds::holds;
        v.justification = j;
        v.note = std::move(note);
        if (opts.compute_values) fill_values();
        return v;
    };

    if (d.empty() || wealth(d, state, prices) == 0) return settle(Justification::zero_mev, "the new contracts hold no tokens");

    std::optional<bool> tok_indep;
    auto token_ok = [&] {
        if (rich) return true;
        if (!tok_indep) tok_indep = token_independent(state, g, d, budget);
        return *tok_indep;
    };

    if (contract_independent(state, g, d) && token_ok())
        return settle(Justification::contract_independent,
                      rich ? "disjoint dependencies" : "disjoint dependencies and token sets");

    BlockchainState probe_state = state;
    if (rich) probe_state = with_adversary_wallet(state.contracts_only(), rich_base_wallet(state.contracts_only(), prices, budget));
    if (token_ok()) {
        Stability st = stable_wrt_adversary(probe_state, g, d, budget);
        if (st.stable == Holds::holds) return settle(Justification::stable, st.note);
    }

    fill_values();
    const MevResult& lhs = *v.lhs;
    const MevResult& rhs = *v.rhs;
    if (lhs.exact() && lhs.value == 0) {
        v.holds = Holds::holds;
        v.justification = Justification::zero_mev;
        v.note = "the unrestricted search is exact and finds nothing";
    } else if (lhs.value > rhs.value) {
        v.holds = Holds::violated;
        v.justification = Justification::counterexample;
        v.witness = lhs.witness;
        v.certified = rhs.exact();
        if (!v.certified) v.note = "the restricted value is a lower bound; a deeper search may close the gap";
    } else if (lhs.exact()) {
        v.holds = Holds::holds;
        v.justification = Justification::direct_search;
        v.note = "both sides agree and the unrestricted value is exact";
    } else {
        v.holds = Holds::unknown;
        v.note = "no gap found within the budget";
    }
    return v;
}

}  // namespace

Verdict nonint(const BlockchainState& state, const std::set<AccountId>& delta, const PriceMap& prices,
               const SearchBudget& budget, const AnalysisOptions& opts) {
    return decide(state, delta, prices, budget, opts, false);
}

Verdict richnonint(const BlockchainState& state, const std::set<AccountId>& delta, const PriceMap& prices,
                   const SearchBudget& budget, const AnalysisOptions& opts) {
    return decide(state, delta, prices, budget, opts, true);
}

EpsilonResult epsilon_composable(const BlockchainState& before, const BlockchainState& after, const Rational& epsilon,
                                 const PriceMap& prices, const SearchBudget& budget) {
    if (epsilon < 0) throw std::invalid_argument("epsilon must be non-negative");
    EpsilonResult r;
    r.epsilon = epsilon;
    r.before = global_mev(before, prices, budget);
    r.after = global_mev(after, prices, budget);
    const Rational limit = (1 + epsilon) * r.before.value;
    if (r.after.value > limit) {
        r.holds = Holds::violated;
        r.certified = r.before.exact();
    } else {
        r.holds = Holds::holds;
        r.certified = r.after.exact();
    }
    return r;
}

StripCheck verify_stripping(const BlockchainState& gamma, const std::set<AccountId>& observed,
                            const Restriction& restriction, const PriceMap& prices, const SearchBudget& budget) {
    StripCheck sc;
    const std::set<AccountId> obs = deployed(observed, gamma);
    const std::set<AccountId> dep_obs = deps(obs, gamma);
    std::set<AccountId> D;
    for (const auto& id : restriction.resolve(gamma)) D.insert(id);
    sc.shared = meet(dep_obs, deps(minus(D, dep_obs), gamma));
    for (const auto& id : sc.shared)
        if (!gamma.contract(id)->code->sender_agnostic) sc.not_agnostic.insert(id);
    bool inside = std::includes(D.begin(), D.end(), sc.shared.begin(), sc.shared.end());
    sc.hypothesis_met = sc.not_agnostic.empty() && inside;

    MevResult full = rlmev(gamma, obs, restriction, prices, budget);
    MevResult stripped = rlmev(strip(gamma, obs), obs, restriction, prices, budget);
    sc.lhs_label = "rlmev on the full context";
    sc.rhs_label = "rlmev on the stripped context";
    sc.lhs_value = to_string(full.value);
    sc.rhs_value = to_string(stripped.value);
    sc.equal = full.value == stripped.value;
    if (sc.hypothesis_met) {
        sc.passes = sc.equal;
    } else {
        std::string why;
        if (!sc.not_agnostic.empty()) why = names(sc.not_agnostic) + " not sender-agnostic";
        if (!inside) why += std::string(why.empty() ? "" : "; ") + names(sc.shared) + " not within the restriction";
        sc.note = "hypothesis not met: " + why;
    }
    return sc;
}

StripCheck verify_stripping_nonint(const BlockchainState& state, const std::set<AccountId>& delta,
                                   const PriceMap& prices, const SearchBudget& budget) {
    StripCheck sc;
    const std::set<AccountId> d = deployed(delta, state);
    const std::set<AccountId> dep_d = deps(d, state);
    const std::set<AccountId> g = minus(all_contracts(state), d);
    sc.shared = meet(dep_d, deps(minus(g, dep_d), state));
    for (const auto& id : sc.shared)
        if (!state.contract(id)->code->sender_agnostic) sc.not_agnostic.insert(id);
    sc.hypothesis_met = sc.not_agnostic.empty();

    Verdict full = richnonint(state, d, prices, budget);
    Verdict stripped = richnonint(strip(state, d), d, prices, budget);
    sc.lhs_label = "richnonint on the full context";
    sc.rhs_label = "richnonint on the stripped context";
    sc.lhs_value = to_string(full.holds);
    sc.rhs_value = to_string(stripped.holds);
    // An unknown on either side cannot contradict the other.
    sc.equal = full.holds == stripped.holds || full.holds == Holds::unknown || stripped.holds == Holds::unknown;
    if (sc.hypothesis_met)
        sc.passes = sc.equal;
    else
        sc.note = "hypothesis not met: " + names(sc.not_agnostic) + " not sender-agnostic";
    return sc;
}

bool BatteryReport::all_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const BatteryRow& r) { return r.ok; });
}

}  // namespace mevni
