#include "mevni/engine.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <thread>
#include <unordered_set>

namespace mevni {

std::vector<AccountId> Restriction::resolve(const BlockchainState& state) const {
    std::vector<AccountId> out;
    for (const auto& c : state.contracts)
        if (allows(c.id)) out.push_back(c.id);
    return out;
}

std::string Restriction::str() const {
    if (universe) return "*";
    std::string s = "{";
    for (const auto& c : contracts) s += (s.size() > 1 ? "," : "") + c.name;
    return s + "}";
}

AccountId default_adversary() { return AccountId::user("M"); }

BlockchainState with_adversary_wallet(const BlockchainState& state, const Wallet& w) {
    BlockchainState s = state;
    if (s.adversary.empty()) s.adversary.insert(default_adversary());
    for (const auto& a : s.adversary) s.users[a] = w;
    return s;
}

namespace {

bool reads_height(const BlockchainState& s) {
    return std::any_of(s.contracts.begin(), s.contracts.end(), [](const ContractInstance& c) { return c.code->reads_height; });
}

// Every combination of one choice per slot.
template <class T, class F>
void cartesian(const std::vector<std::vector<T>>& slots, F&& emit) {
    std::vector<std::size_t> idx(slots.size(), 0);
    for (const auto& s : slots)
        if (s.empty()) return;
    while (true) {
        std::vector<T> pick;
        pick.reserve(slots.size());
        for (std::size_t i = 0; i < slots.size(); ++i) pick.push_back(slots[i][idx[i]]);
        emit(pick);
        std::size_t i = slots.size();
        while (i > 0) {
            --i;
            if (++idx[i] < slots[i].size()) break;
            idx[i] = 0;
            if (i == 0) return;
        }
        if (slots.empty()) return;
    }
}

}  // namespace

MoveSet enumerate_calls(const BlockchainState& state, const AccountId& contract, const AccountId& adversary,
                        const Amount& ceiling) {
    MoveSet out;
    out.complete = true;
    const ContractInstance* inst = state.contract(contract);
    if (!inst) return out;
    const Wallet& bal = state.wallet_of(adversary);
    const Amount total = state.total_units();

    std::vector<Value> accounts;
    for (const auto& [id, w] : state.users) accounts.push_back(Value::account(id));
    for (const auto& c : state.contracts) accounts.push_back(Value::account(c.id));

    auto amounts_up_to = [&](const Amount& hi, Amount from) {
        std::vector<Amount> xs;
        for (Amount x = from; x <= hi; ++x) xs.push_back(x);
        return xs;
    };

    for (const auto& [name, m] : inst->code->methods) {
        if (m.getter) continue;
        std::vector<std::vector<Value>> slots;
        for (const auto& p : m.params) {
            std::vector<Value> dom;
            switch (p.kind) {
                case ParamKind::amount:
                    for (const Amount& x : amounts_up_to(ceiling, 0)) dom.push_back(Value::integer(x));
                    if (ceiling < total) out.complete = false;
                    break;
                case ParamKind::account:
                    dom = accounts;
                    break;
                case ParamKind::scalar:
                case ParamKind::token:
                    dom = p.domain;
                    if (!p.domain_complete) out.complete = false;
                    break;
            }
            slots.push_back(std::move(dom));
        }

        std::vector<Wallet> attachments;
        auto capped = [&](const Token& t) {
            Amount b = bal.balance(t);
            if (b > ceiling) out.complete = false;
            return b < ceiling ? b : ceiling;
        };
        const AttachSpec& a = m.attach;
        switch (a.kind) {
            case AttachSpec::Kind::none:
                attachments.push_back({});
                break;
            case AttachSpec::Kind::exact:
                attachments.push_back(a.exact);
                break;
            case AttachSpec::Kind::one_of:
            case AttachSpec::Kind::one_any: {
                attachments.push_back({});
                std::vector<Token> ts = a.tokens;
                if (a.kind == AttachSpec::Kind::one_any)
                    for (const auto& [t, x] : bal.entries()) ts.push_back(t);
                for (const Token& t : ts)
                    for (const Amount& x : amounts_up_to(capped(t), 1)) attachments.push_back(Wallet{{t, x}});
                break;
            }
            case AttachSpec::Kind::any_of: {
                std::vector<std::vector<Amount>> per;
                for (const Token& t : a.tokens) per.push_back(amounts_up_to(capped(t), 0));
                cartesian(per, [&](const std::vector<Amount>& xs) {
                    Wallet w;
                    for (std::size_t i = 0; i < xs.size(); ++i) w.credit(a.tokens[i], xs[i]);
                    attachments.push_back(std::move(w));
                });
                break;
            }
        }

        std::vector<std::vector<Value>> arg_tuples;
        cartesian(slots, [&](const std::vector<Value>& args) { arg_tuples.push_back(args); });
        for (const auto& args : arg_tuples)
            for (const auto& w : attachments) out.txs.push_back(Transaction{adversary, contract, name, args, w});
    }
    return out;
}

MoveSet adversary_moves(const BlockchainState& state, const Restriction& restriction, const SearchBudget& budget) {
    MoveSet out;
    out.complete = true;
    std::vector<AccountId> targets = restriction.resolve(state);
    if (targets.empty() || state.adversary.empty()) return out;
    MoveOptions opts{budget.grid};
    for (const auto& c : targets) {
        const ContractInstance* inst = state.contract(c);
        for (const auto& adv : state.adversary) {
            MoveSet ms;
            if (budget.exhaustive)
                ms = enumerate_calls(state, c, adv, budget.ceiling);
            else if (inst->code->move_generator)
                ms = inst->code->move_generator(state, c, adv, opts);
            out.complete = out.complete && ms.complete;
            for (auto& tx : ms.txs)
                if (tx.origin == adv && tx.callee == c) out.txs.push_back(std::move(tx));
        }
    }
    // An always-invalid call: lets time pass without touching anything else.
    if (reads_height(state))
        out.txs.push_back(Transaction{*state.adversary.begin(), targets.front(), Transaction::tick_method, {}, {}});
    std::sort(out.txs.begin(), out.txs.end(), [](const Transaction& a, const Transaction& b) { return compare(a, b) < 0; });
    out.txs.erase(std::unique(out.txs.begin(), out.txs.end()), out.txs.end());
    return out;
}

std::string canonical_key(const BlockchainState& state) {
    std::string k;
    for (const auto& c : state.contracts)
        if (c.code->reads_height)
            k += c.code->height_view ? c.code->height_view(c.state, state.height) + ";" : "h" + std::to_string(state.height) + ";";
    for (const auto& [id, w] : state.users)
        if (!w.empty()) k += id.name + "=" + w.str() + ";";
    k += "|";
    for (const auto& c : state.contracts) {
        k += c.id.name + "=" + c.state.wallet.str() + "{";
        for (const auto& [key, v] : c.state.store.entries()) k += key + ":" + v.str() + ",";
        k += "};";
    }
    return k;
}

namespace {

struct TraceNode {
    std::shared_ptr<const TraceNode> parent;
    Transaction tx;
};
using TracePtr = std::shared_ptr<const TraceNode>;

std::vector<Transaction> unwind(TracePtr t) {
    std::vector<Transaction> out;
    for (; t; t = t->parent) out.push_back(t->tx);
    std::reverse(out.begin(), out.end());
    return out;
}

// Ranked lexicographically: the loss (or gain) first, then a secondary
// preference used only to pick among equally damaging traces.
struct Score {
    Rational primary;
    Rational secondary;
};

bool better(const Score& a, const Score& b) {
    return a.primary > b.primary || (a.primary == b.primary && a.secondary > b.secondary);
}

using Objective = std::function<Score(const BlockchainState&)>;

struct Node {
    BlockchainState state;
    TracePtr trace;
};

struct Child {
    Transaction tx;
    BlockchainState state;
    std::string key;
};

struct Expansion {
    std::vector<Child> children;
    bool complete = true;
};

Expansion expand(const BlockchainState& s, const Restriction& r, const SearchBudget& b) {
    Expansion e;
    MoveSet ms = adversary_moves(s, r, b);
    e.complete = ms.complete;
    for (auto& tx : ms.txs) {
        ExecResult res = execute(s, tx);
        if (!res.valid && !tx.is_tick()) continue;
        std::string key = canonical_key(res.state);
        e.children.push_back(Child{std::move(tx), std::move(res.state), std::move(key)});
    }
    return e;
}

std::vector<Expansion> expand_block(const std::vector<Node>& frontier, std::size_t from, std::size_t to,
                                    const Restriction& r, const SearchBudget& b) {
    std::vector<Expansion> out(to - from);
    int threads = std::max(1, b.threads);
    if (threads == 1 || to - from < 2) {
        for (std::size_t i = from; i < to; ++i) out[i - from] = expand(frontier[i].state, r, b);
        return out;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = from + t; i < to; i += threads) out[i - from] = expand(frontier[i].state, r, b);
        });
    for (auto& th : pool) th.join();
    return out;
}

struct SearchOutcome {
    Score best;
    TracePtr witness;
    bool complete = false;
    bool cap_hit = false;
    std::size_t states = 0;
};

// Level-synchronous breadth-first search. Frontier order is the
// lexicographic order of the traces reaching each state, so the first trace
// to reach a score is the shortest and lexicographically smallest one.
SearchOutcome search(const BlockchainState& root, const Restriction& r, const SearchBudget& b, const Objective& f,
                     const std::optional<Rational>& stop_at) {
    SearchOutcome out;
    std::unordered_set<std::string> visited;
    visited.insert(canonical_key(root));
    out.best = f(root);
    out.states = 1;
    if (stop_at && out.best.primary == *stop_at) return out;

    std::vector<Node> frontier;
    frontier.push_back(Node{root, nullptr});
    bool all_complete = true;
    bool saturated = false;
    const std::size_t block = 64 * static_cast<std::size_t>(std::max(1, b.threads));

    for (int depth = 1; depth <= b.max_depth && !saturated; ++depth) {
        std::vector<Node> next;
        std::size_t fresh_count = 0;
        for (std::size_t from = 0; from < frontier.size(); from += block) {
            std::size_t to = std::min(frontier.size(), from + block);
            std::vector<Expansion> exps = expand_block(frontier, from, to, r, b);
            bool keep = depth < b.max_depth || all_complete;
            for (std::size_t i = 0; i < exps.size(); ++i) {
                all_complete = all_complete && exps[i].complete;
                for (auto& c : exps[i].children) {
                    bool fresh = visited.insert(c.key).second;
                    if (!fresh && b.memo) continue;
                    if (fresh) ++fresh_count;
                    ++out.states;
                    Score s = f(c.state);
                    auto trace = std::make_shared<const TraceNode>(TraceNode{frontier[from + i].trace, c.tx});
                    if (better(s, out.best)) {
                        out.best = s;
                        out.witness = trace;
                        if (stop_at && s.primary == *stop_at) return out;
                    }
                    if (keep) next.push_back(Node{std::move(c.state), trace});
                    if (b.state_cap && out.states >= *b.state_cap) {
                        out.cap_hit = true;
                        return out;
                    }
                }
            }
        }
        frontier = std::move(next);
        if (fresh_count == 0) saturated = true;
    }

    // One more level, looking only for states not seen yet.
    if (!saturated && all_complete) {
        saturated = true;
        for (std::size_t from = 0; from < frontier.size() && saturated; from += block) {
            std::size_t to = std::min(frontier.size(), from + block);
            for (const auto& e : expand_block(frontier, from, to, r, b)) {
                all_complete = all_complete && e.complete;
                for (const auto& c : e.children)
                    if (!visited.count(c.key)) saturated = false;
            }
        }
    }
    out.complete = all_complete && saturated;
    return out;
}

std::set<AccountId> deployed_subset(const std::set<AccountId>& ids, const BlockchainState& s) {
    std::set<AccountId> out;
    for (const auto& id : ids)
        if (s.contract(id)) out.insert(id);
    return out;
}

MevResult from_outcome(const SearchOutcome& o, const SearchBudget& b, const Rational& bound) {
    MevResult r;
    r.value = o.best.primary;
    r.witness = unwind(o.witness);
    r.complete = o.complete && !o.cap_hit;
    r.cap_hit = o.cap_hit;
    r.bound_attained = r.value == bound;
    r.budget = b;
    r.states = o.states;
    if (o.cap_hit) r.warning = "state cap reached";
    return r;
}

MevResult trivial_zero(const SearchBudget& b) {
    MevResult r;
    r.trivial = true;
    r.budget = b;
    return r;
}

MevResult lmev_impl(const BlockchainState& state, const std::set<AccountId>& observed, const Restriction& restriction,
                    const PriceMap& prices, const SearchBudget& budget, bool stop_at_bound) {
    std::set<AccountId> obs = deployed_subset(observed, state);
    Rational bound = wealth(obs, state, prices);
    if (obs.empty() || bound == 0 || restriction.resolve(state).empty() || state.adversary.empty())
        return trivial_zero(budget);
    const Rational adv_before = wealth(state.adversary, state, prices);
    Objective f = [&](const BlockchainState& s) {
        return Score{bound - wealth(obs, s, prices), wealth(s.adversary, s, prices) - adv_before};
    };
    SearchOutcome o = search(state, restriction, budget, f, stop_at_bound ? std::optional<Rational>(bound) : std::nullopt);
    return from_outcome(o, budget, bound);
}

}  // namespace

MevResult lmev(const BlockchainState& state, const std::set<AccountId>& observed, const Restriction& restriction,
               const PriceMap& prices, const SearchBudget& budget) {
    return lmev_impl(state, observed, restriction, prices, budget, false);
}

MevResult global_mev(const BlockchainState& state, const PriceMap& prices, const SearchBudget& budget) {
    std::set<AccountId> contracts;
    for (const auto& c : state.contracts) contracts.insert(c.id);
    Rational bound = wealth(contracts, state, prices);
    if (contracts.empty() || bound == 0 || state.adversary.empty()) return trivial_zero(budget);
    const Rational before = wealth(state.adversary, state, prices);
    Objective f = [&](const BlockchainState& s) { return Score{wealth(s.adversary, s, prices) - before, 0}; };
    SearchOutcome o = search(state, Restriction::all(), budget, f, std::nullopt);
    return from_outcome(o, budget, bound);
}

Wallet rich_base_wallet(const BlockchainState& contracts, const PriceMap& prices, const SearchBudget& budget) {
    std::set<Token> tokens = contracts.tokens();
    for (const auto& [t, p] : prices) tokens.insert(t);
    Wallet w;
    for (const Token& t : tokens) {
        Amount held = 0;
        for (const auto& c : contracts.contracts) held += c.state.wallet.balance(t);
        w.credit(t, held + budget.grid);
    }
    return w;
}

RichResult rlmev_ladder(const BlockchainState& contracts, const std::set<AccountId>& observed,
                        const Restriction& restriction, const PriceMap& prices, const SearchBudget& budget) {
    RichResult out;
    BlockchainState base = contracts;
    std::set<AccountId> adv = base.adversary.empty() ? std::set<AccountId>{default_adversary()} : base.adversary;
    base.users.clear();
    base.adversary = adv;

    out.w0 = rich_base_wallet(base, prices, budget);

    const Amount cap = Amount(1) << rich_scale_cap_log2;
    Amount scale = 1;
    while (true) {
        BlockchainState s = with_adversary_wallet(base, out.w0.scaled(scale));
        MevResult r = lmev_impl(s, observed, restriction, prices, budget, true);
        bool plateau = !out.ladder.empty() && out.ladder.back().result.value == r.value;
        bool done = r.bound_attained || r.trivial || plateau;
        out.ladder.push_back(LadderRung{scale, r});
        if (done) break;
        if (scale >= cap) {
            out.ladder.back().result.complete = false;
            out.ladder.back().result.warning = "escalation cap reached before the ladder levelled off";
            break;
        }
        scale *= 2;
    }
    out.result = out.ladder.back().result;
    return out;
}

MevResult rlmev(const BlockchainState& contracts, const std::set<AccountId>& observed, const Restriction& restriction,
                const PriceMap& prices, const SearchBudget& budget) {
    return rlmev_ladder(contracts, observed, restriction, prices, budget).result;
}

std::vector<std::pair<Amount, Rational>> stability_probe(const BlockchainState& contracts,
                                                         const std::set<AccountId>& observed,
                                                         const Restriction& restriction, const PriceMap& prices,
                                                         const SearchBudget& budget) {
    std::vector<std::pair<Amount, Rational>> out;
    for (const auto& rung : rlmev_ladder(contracts, observed, restriction, prices, budget).ladder)
        out.emplace_back(rung.scale, rung.result.value);
    return out;
}

}  // namespace mevni
