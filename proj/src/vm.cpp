#include "mevni/vm.hpp"

#include <algorithm>
#include <deque>

namespace mevni {

namespace {

struct AbortSignal {
    std::string reason;
};

template <class T>
int cmp3(const T& a, const T& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

std::map<Token, Amount> wallet_delta(const Wallet& before, const Wallet& after) {
    std::map<Token, Amount> d;
    for (const auto& [t, a] : after.entries()) d[t] += a;
    for (const auto& [t, a] : before.entries()) d[t] -= a;
    for (auto it = d.begin(); it != d.end();) {
        if (it->second == 0)
            it = d.erase(it);
        else
            ++it;
    }
    return d;
}

}  // namespace

std::string Transaction::str() const {
    std::string out = origin.name + ":" + callee.name + "." + method + "(";
    bool first = true;
    for (const auto& [t, a] : attached.entries()) {
        if (!first) out += ",";
        out += "?" + a.str() + ":" + t.symbol;
        first = false;
    }
    for (const auto& v : args) {
        if (!first) out += ",";
        out += v.str();
        first = false;
    }
    return out + ")";
}

bool operator==(const Transaction& a, const Transaction& b) {
    return a.origin == b.origin && a.callee == b.callee && a.method == b.method && a.args == b.args &&
           a.attached == b.attached;
}

int compare(const Transaction& a, const Transaction& b) {
    if (int c = cmp3(a.callee.name, b.callee.name)) return c;
    if (int c = cmp3(a.method, b.method)) return c;
    const auto& ea = a.attached.entries();
    const auto& eb = b.attached.entries();
    for (std::size_t i = 0; i < ea.size() && i < eb.size(); ++i) {
        if (int c = cmp3(ea[i].first, eb[i].first)) return c;
        if (int c = cmp3(ea[i].second, eb[i].second)) return c;
    }
    if (int c = cmp3(ea.size(), eb.size())) return c;
    for (std::size_t i = 0; i < a.args.size() && i < b.args.size(); ++i)
        if (int c = compare(a.args[i], b.args[i])) return c;
    if (int c = cmp3(a.args.size(), b.args.size())) return c;
    return cmp3(a.origin, b.origin);
}

int compare(const std::vector<Transaction>& a, const std::vector<Transaction>& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        if (int c = compare(a[i], b[i])) return c;
    return cmp3(a.size(), b.size());
}

std::string to_string(const std::vector<Transaction>& trace) {
    std::string out;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (i) out += "; ";
        out += trace[i].str();
    }
    return out;
}

std::string Observation::str() const {
    std::string out = aborted ? "abort" : return_value.str();
    out += " {";
    bool first = true;
    for (const auto& [t, a] : token_delta) {
        if (!first) out += ",";
        out += a.str() + ":" + t.symbol;
        first = false;
    }
    return out + "}";
}

std::string ProbeCall::str() const {
    Transaction t{AccountId::user("*"), callee, method, args, attached};
    return t.str().substr(2);
}

const MethodSpec* ContractCode::method(const std::string& n) const {
    auto it = methods.find(n);
    return it == methods.end() ? nullptr : &it->second;
}

class Machine {
public:
    struct Frame {
        CallContext ctx;
        AccountId self;
        const std::vector<Value>* args;
        Wallet attached;
        std::size_t record;
    };
    struct Final {
        AccountId contract;
        std::function<bool(const Wallet&)> pred;
        std::string description;
    };

    Machine(BlockchainState& st, const VmConfig& cfg, std::vector<CallRecord>& log) : st(st), cfg(cfg), log(log) {}

    Value invoke(const AccountId& caller, const AccountId& origin, const AccountId& callee, const std::string& method,
                 const std::vector<Value>& args, const Wallet& attached, int depth, bool check_order,
                 const MethodSpec* forced = nullptr) {
        std::size_t rec = log.size();
        log.push_back(CallRecord{caller, callee, method, args, attached, depth, {}, {}});
        std::size_t level = frames.size();
        Wallet caller_before = st.wallet_of(caller);
        try {
            if (depth > cfg.max_depth) throw AbortSignal{"call depth limit exceeded"};
            const ContractInstance* target = st.contract(callee);
            if (!target) throw AbortSignal{"no contract " + callee.name};
            if (check_order && caller.is_contract()) {
                auto ci = st.index_of(caller);
                auto ti = st.index_of(callee);
                const ContractInstance* from = st.contract(caller);
                if (!ci || !ti || *ti >= *ci || !from->code->declared_deps.count(callee))
                    throw AbortSignal{"ill-formed call " + caller.name + " -> " + callee.name};
            }
            const MethodSpec* m = forced ? forced : target->code->method(method);
            if (!m) throw AbortSignal{"no method " + callee.name + "." + method};
            check_attachment(*m, attached);
            for (const auto& [t, a] : attached.entries()) {
                if (!st.wallet_mut(caller).debit(t, a)) throw AbortSignal{"insufficient " + t.symbol + " for call"};
                st.contract(callee)->state.wallet.credit(t, a);
            }
            frames.push_back(Frame{CallContext{origin, caller, depth}, callee, &args, attached, rec});
            MethodEnv env(*this, frames.size() - 1);
            Value ret = m->body(env);
            frames.pop_back();
            log[rec].effect.return_value = ret;
            log[rec].observation = Observation{ret, wallet_delta(caller_before, st.wallet_of(caller)), false};
            return ret;
        } catch (const AbortSignal& a) {
            mark_aborted(rec, level, a.reason);
            throw;
        } catch (const TypeError& e) {
            mark_aborted(rec, level, e.what());
            throw AbortSignal{e.what()};
        } catch (const std::domain_error& e) {
            mark_aborted(rec, level, e.what());
            throw AbortSignal{e.what()};
        } catch (const LedgerError& e) {
            mark_aborted(rec, level, e.what());
            throw AbortSignal{e.what()};
        }
    }

    void run_final_checks() {
        for (const auto& f : finals)
            if (!f.pred(st.wallet_of(f.contract))) throw AbortSignal{"final check failed: " + f.description};
    }

    BlockchainState& st;
    VmConfig cfg;
    std::vector<CallRecord>& log;
    std::vector<Frame> frames;
    std::vector<Final> finals;

private:
    void mark_aborted(std::size_t rec, std::size_t level, const std::string& why) {
        frames.resize(level);
        log[rec].effect.aborted = true;
        log[rec].effect.abort_reason = why;
        log[rec].observation.aborted = true;
    }

    static void check_attachment(const MethodSpec& m, const Wallet& attached) {
        using K = AttachSpec::Kind;
        const AttachSpec& s = m.attach;
        switch (s.kind) {
            case K::none:
                if (!attached.empty()) throw AbortSignal{m.name + " accepts no tokens"};
                return;
            case K::one_of:
                if (attached.entries().size() > 1) throw AbortSignal{m.name + " accepts one token type"};
                [[fallthrough]];
            case K::any_of:
                for (const auto& [t, a] : attached.entries())
                    if (std::find(s.tokens.begin(), s.tokens.end(), t) == s.tokens.end())
                        throw AbortSignal{m.name + " does not accept " + t.symbol};
                return;
            case K::exact:
                if (!(attached == s.exact)) throw AbortSignal{m.name + " expects " + s.exact.str()};
                return;
            case K::one_any:
                if (attached.entries().size() > 1) throw AbortSignal{m.name + " accepts one token type"};
                return;
        }
    }
};

const AccountId& MethodEnv::self() const { return m_.frames[frame_].self; }
const AccountId& MethodEnv::origin() const { return m_.frames[frame_].ctx.origin; }
const AccountId& MethodEnv::sender() const { return m_.frames[frame_].ctx.sender; }
int MethodEnv::depth() const { return m_.frames[frame_].ctx.depth; }
std::uint64_t MethodEnv::block_height() const { return m_.st.height; }
const std::vector<Value>& MethodEnv::args() const { return *m_.frames[frame_].args; }

const Value& MethodEnv::arg(std::size_t i) const {
    static const Value null_value;
    const auto& a = args();
    return i < a.size() ? a[i] : null_value;
}

const Wallet& MethodEnv::attached() const { return m_.frames[frame_].attached; }

Amount MethodEnv::balance(const Token& t) const { return m_.st.wallet_of(self()).balance(t); }

const Value& MethodEnv::get(const std::string& key) const { return m_.st.contract(self())->state.store.get(key); }

void MethodEnv::set(const std::string& key, Value v) {
    m_.log[m_.frames[frame_].record].effect.store_updates.emplace_back(key, v);
    m_.st.contract(self())->state.store.set(key, std::move(v));
}

void MethodEnv::send(const AccountId& to, const Token& t, const Amount& amount) {
    if (amount < 0) fail("negative transfer");
    if (to.is_contract() && !m_.st.contract(to)) fail("transfer to unknown contract " + to.name);
    if (amount == 0) return;
    if (!m_.st.wallet_mut(self()).debit(t, amount)) fail("insufficient " + t.symbol + " to send");
    m_.st.wallet_mut(to).credit(t, amount);
    m_.log[m_.frames[frame_].record].effect.transfers.push_back(Transfer{to, Wallet{{t, amount}}});
}

Value MethodEnv::call(const AccountId& callee, const std::string& method, std::vector<Value> args, Wallet attached) {
    m_.log[m_.frames[frame_].record].effect.inner_calls.push_back(InnerCall{callee, method, args, attached});
    return m_.invoke(self(), origin(), callee, method, args, attached, depth() + 1, true);
}

void MethodEnv::require(bool cond, const std::string& what) const {
    if (!cond) fail("require failed: " + what);
}

void MethodEnv::fail(const std::string& why) const { throw AbortSignal{why}; }

void MethodEnv::require_final(std::function<bool(const Wallet&)> pred, std::string description) {
    m_.log[m_.frames[frame_].record].effect.final_checks.push_back(description);
    m_.finals.push_back(Machine::Final{self(), std::move(pred), std::move(description)});
}

BlockchainState deploy(const BlockchainState& state, std::shared_ptr<const ContractCode> code, const AccountId& id,
                       const std::vector<Value>& constructor_args, const Wallet& attached, const AccountId& deployer,
                       const VmConfig& cfg) {
    if (!id.is_contract()) throw DeployError("contract id expected for " + id.name);
    if (!deployer.is_user()) throw DeployError("deployer must be a user");
    if (state.contract(id)) throw DeployError("duplicate contract " + id.name);
    for (const auto& d : code->declared_deps)
        if (!state.contract(d))
            throw WellFormednessError(id.name + " depends on " + d.name + ", which is not deployed before it");
    BlockchainState work = state;
    work.contracts.push_back(ContractInstance{id, code, {}});
    std::vector<CallRecord> log;
    Machine m(work, cfg, log);
    try {
        m.invoke(deployer, deployer, id, "<constructor>", constructor_args, attached, 1, false, &code->constructor);
        m.run_final_checks();
    } catch (const AbortSignal& a) {
        throw DeployError("constructor of " + id.name + " aborted: " + a.reason);
    }
    return work;
}

ExecResult execute(const BlockchainState& state, const Transaction& tx, const VmConfig& cfg) {
    ExecResult r;
    BlockchainState work = state;
    bool ok = false;
    if (!tx.origin.is_user()) {
        r.error = "origin must be a user";
    } else if (tx.is_tick()) {
        r.error = "tick";
    } else {
        Machine m(work, cfg, r.trace_log);
        try {
            m.invoke(tx.origin, tx.origin, tx.callee, tx.method, tx.args, tx.attached, 1, false);
            m.run_final_checks();
            ok = true;
        } catch (const AbortSignal& a) {
            r.error = a.reason;
        }
    }
    r.valid = ok;
    if (ok)
        r.state = std::move(work);
    else
        r.state = state;
    r.state.height = state.height + 1;
    return r;
}

ExecResult execute_trace(const BlockchainState& state, const std::vector<Transaction>& trace, const VmConfig& cfg) {
    ExecResult acc;
    acc.state = state;
    acc.valid = true;
    for (const auto& tx : trace) {
        ExecResult r = execute(acc.state, tx, cfg);
        acc.state = std::move(r.state);
        if (!r.valid) {
            acc.valid = false;
            if (acc.error.empty()) acc.error = r.error;
        }
        for (auto& rec : r.trace_log) acc.trace_log.push_back(std::move(rec));
    }
    return acc;
}

CallOutcome invoke_as(const BlockchainState& state, const AccountId& origin, const AccountId& sender,
                      const AccountId& callee, const std::string& method, const std::vector<Value>& args,
                      const Wallet& attached, const VmConfig& cfg) {
    CallOutcome out;
    BlockchainState funded = state;
    if (sender.is_contract() && !funded.contract(sender)) throw PreconditionError("unknown sender " + sender.name);
    funded.wallet_mut(sender) += attached;
    BlockchainState work = funded;
    Machine m(work, cfg, out.trace_log);
    try {
        m.invoke(sender, origin, callee, method, args, attached, 1, false);
        m.run_final_checks();
        out.state = std::move(work);
        out.observation = out.trace_log.front().observation;
    } catch (const AbortSignal&) {
        out.state = std::move(funded);
        out.observation = Observation{Value(), {}, true};
    }
    return out;
}

std::set<AccountId> deps(const std::set<AccountId>& targets, const BlockchainState& state) {
    std::set<AccountId> out;
    std::deque<AccountId> todo(targets.begin(), targets.end());
    while (!todo.empty()) {
        AccountId id = todo.front();
        todo.pop_front();
        if (out.count(id)) continue;
        const ContractInstance* c = state.contract(id);
        if (!c) throw WellFormednessError("deps: " + id.name + " is not deployed");
        out.insert(id);
        for (const auto& d : c->code->declared_deps) todo.push_back(d);
    }
    return out;
}

bool check_well_formed(const BlockchainState& state) {
    std::set<AccountId> seen;
    for (const auto& c : state.contracts) {
        if (!c.id.is_contract() || seen.count(c.id)) return false;
        for (const auto& d : c.code->declared_deps)
            if (!seen.count(d)) return false;
        seen.insert(c.id);
    }
    for (const auto& a : state.adversary)
        if (!a.is_user() || !state.users.count(a)) return false;
    return true;
}

bool check_wallet_monotonic(const BlockchainState& state, const Transaction& tx,
                            const std::map<AccountId, Wallet>& delta, const VmConfig& cfg) {
    ExecResult base = execute(state, tx, cfg);
    if (!base.valid) throw PreconditionError("check_wallet_monotonic: transaction is not valid in the base state");
    BlockchainState rich = state;
    BlockchainState expected = base.state;
    for (const auto& [id, w] : delta) {
        if (!id.is_user()) throw PreconditionError("delta may only enrich user wallets");
        rich.wallet_mut(id) += w;
        expected.wallet_mut(id) += w;
    }
    ExecResult r = execute(rich, tx, cfg);
    return r.valid && r.state == expected;
}

bool sender_agnostic_spot_check(const BlockchainState& state, const AccountId& contract, const std::string& method,
                                const std::vector<Value>& args, const Wallet& attached, const AccountId& origin,
                                const AccountId& sender_a, const AccountId& sender_b, const VmConfig& cfg) {
    CallOutcome a = invoke_as(state, origin, sender_a, contract, method, args, attached, cfg);
    CallOutcome b = invoke_as(state, origin, sender_b, contract, method, args, attached, cfg);
    if (a.observation.aborted != b.observation.aborted) return false;
    if (a.observation.aborted) return true;
    if (!(a.observation == b.observation)) return false;
    auto blank = [&](BlockchainState s) {
        for (const auto& id : {sender_a, sender_b}) {
            if (id.is_user())
                s.users.erase(id);
            else if (auto* c = s.contract(id))
                c->state.wallet = Wallet{};
        }
        return s;
    };
    return blank(a.state) == blank(b.state);
}

Rational gain(const std::set<AccountId>& accounts, const BlockchainState& state,
              const std::vector<Transaction>& trace, const PriceMap& prices) {
    return gain(accounts, state, execute_trace(state, trace).state, prices);
}

}  // namespace mevni
