#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mevni/ledger.hpp"

namespace mevni {

class WellFormednessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DeployError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Transaction {
    AccountId origin;
    AccountId callee;
    std::string method;
    std::vector<Value> args;
    Wallet attached;

    // Distinguished always-invalid call used to let the clock advance.
    static constexpr const char* tick_method = "<tick>";
    bool is_tick() const { return method == tick_method; }
    std::string str() const;
};

bool operator==(const Transaction& a, const Transaction& b);
int compare(const Transaction& a, const Transaction& b);
int compare(const std::vector<Transaction>& a, const std::vector<Transaction>& b);
std::string to_string(const std::vector<Transaction>& trace);

struct CallContext {
    AccountId origin;
    AccountId sender;
    int depth = 1;
};

struct Transfer {
    AccountId to;
    Wallet tokens;
};

struct InnerCall {
    AccountId callee;
    std::string method;
    std::vector<Value> args;
    Wallet attached;
};

struct Effect {
    std::vector<std::pair<std::string, Value>> store_updates;
    std::vector<Transfer> transfers;
    std::vector<InnerCall> inner_calls;
    Value return_value;
    std::vector<std::string> final_checks;
    bool aborted = false;
    std::string abort_reason;
};

// What a caller can see of a call: its result, its net effect on the
// caller's wallet (signed), and whether it aborted.
struct Observation {
    Value return_value;
    std::map<Token, Amount> token_delta;
    bool aborted = false;
    friend bool operator==(const Observation&, const Observation&) = default;
    std::string str() const;
};

struct CallRecord {
    AccountId caller;
    AccountId callee;
    std::string method;
    std::vector<Value> args;
    Wallet attached;
    int depth = 1;
    Effect effect;
    Observation observation;
};

struct ExecResult {
    BlockchainState state;
    bool valid = false;
    std::string error;
    std::vector<CallRecord> trace_log;
};

class Machine;

// The view a method body has of the world while it runs.
class MethodEnv {
public:
    MethodEnv(Machine& m, std::size_t frame) : m_(m), frame_(frame) {}

    const AccountId& self() const;
    const AccountId& origin() const;
    const AccountId& sender() const;
    int depth() const;
    std::uint64_t block_height() const;

    const std::vector<Value>& args() const;
    // Null when the argument was not supplied.
    const Value& arg(std::size_t i) const;
    const Wallet& attached() const;

    // #t: the contract's balance, including tokens attached to this call.
    Amount balance(const Token& t) const;
    const Value& get(const std::string& key) const;
    void set(const std::string& key, Value v);

    void send(const AccountId& to, const Token& t, const Amount& amount);
    Value call(const AccountId& callee, const std::string& method, std::vector<Value> args = {},
               Wallet attached = {});

    void require(bool cond, const std::string& what) const;
    [[noreturn]] void fail(const std::string& why) const;
    void require_final(std::function<bool(const Wallet&)> pred, std::string description);

private:
    Machine& m_;
    std::size_t frame_;
};

using MethodBody = std::function<Value(MethodEnv&)>;

enum class ParamKind { amount, scalar, token, account };

// Signature metadata used by exhaustive enumeration. `domain` lists the
// values tried for scalar/token params; `domain_complete` says whether
// that list exhausts every behaviourally distinct choice.
struct ParamSpec {
    std::string name;
    ParamKind kind = ParamKind::scalar;
    std::vector<Value> domain;
    bool domain_complete = false;
};

struct AttachSpec {
    enum class Kind { none, one_of, any_of, exact, one_any };
    Kind kind = Kind::none;
    std::vector<Token> tokens;  // one_of / any_of
    Wallet exact;

    static AttachSpec none() { return {}; }
    static AttachSpec one_any() { return {Kind::one_any, {}, {}}; }
    static AttachSpec one_of(std::vector<Token> ts) { return {Kind::one_of, std::move(ts), {}}; }
    static AttachSpec any_of(std::vector<Token> ts) { return {Kind::any_of, std::move(ts), {}}; }
    static AttachSpec exactly(Wallet w) { return {Kind::exact, {}, std::move(w)}; }
};

struct MethodSpec {
    std::string name;
    MethodBody body;
    std::vector<ParamSpec> params;
    AttachSpec attach;
    bool getter = false;  // never writes state or moves tokens
};

struct ProbeCall {
    AccountId callee;
    std::string method;
    std::vector<Value> args;
    Wallet attached;
    std::string str() const;
};

struct MoveOptions {
    int grid = 8;
};

struct MoveSet {
    std::vector<Transaction> txs;
    // True when every behaviourally distinct call to this contract is covered.
    bool complete = false;
};

using MoveGenerator =
    std::function<MoveSet(const BlockchainState&, const AccountId& self, const AccountId& adversary, const MoveOptions&)>;
using ProbeGenerator = std::function<std::vector<ProbeCall>(const BlockchainState&, const AccountId& self)>;

struct ContractCode {
    std::string name;  // catalog name
    std::map<std::string, MethodSpec> methods;
    MethodSpec constructor;
    std::set<AccountId> declared_deps;
    // (dependency, method) pairs the methods may call; probes must cover them.
    std::set<std::pair<AccountId, std::string>> call_sites;
    bool sender_agnostic = true;
    bool reads_height = false;
    // What the methods can tell apart about the block height, used in place
    // of the raw height when canonicalizing states. Null means the raw height.
    std::function<std::string(const ContractState&, std::uint64_t height)> height_view;
    std::set<Token> intok_decl;
    std::set<Token> outtok_decl;
    MoveGenerator move_generator;
    ProbeGenerator probes;

    const MethodSpec* method(const std::string& name) const;
};

struct VmConfig {
    int max_depth = 16;
};

BlockchainState deploy(const BlockchainState& state, std::shared_ptr<const ContractCode> code, const AccountId& id,
                       const std::vector<Value>& constructor_args, const Wallet& attached, const AccountId& deployer,
                       const VmConfig& cfg = {});

ExecResult execute(const BlockchainState& state, const Transaction& tx, const VmConfig& cfg = {});
ExecResult execute_trace(const BlockchainState& state, const std::vector<Transaction>& trace,
                         const VmConfig& cfg = {});

struct CallOutcome {
    BlockchainState state;  // post-state, or the funded pre-state when aborted
    Observation observation;
    std::vector<CallRecord> trace_log;
};

// Runs one call with an arbitrary (origin, sender) pair. The sender is
// funded with `attached` first. Used by probes and spot checks.
CallOutcome invoke_as(const BlockchainState& state, const AccountId& origin, const AccountId& sender,
                      const AccountId& callee, const std::string& method, const std::vector<Value>& args,
                      const Wallet& attached, const VmConfig& cfg = {});

std::set<AccountId> deps(const std::set<AccountId>& targets, const BlockchainState& state);
bool check_well_formed(const BlockchainState& state);

bool check_wallet_monotonic(const BlockchainState& state, const Transaction& tx,
                            const std::map<AccountId, Wallet>& delta, const VmConfig& cfg = {});

// Same method, origin and arguments from two different senders must have
// the same effect apart from what the sender itself receives.
bool sender_agnostic_spot_check(const BlockchainState& state, const AccountId& contract, const std::string& method,
                                const std::vector<Value>& args, const Wallet& attached, const AccountId& origin,
                                const AccountId& sender_a, const AccountId& sender_b, const VmConfig& cfg = {});

Rational gain(const std::set<AccountId>& accounts, const BlockchainState& state,
              const std::vector<Transaction>& trace, const PriceMap& prices);

}  // namespace mevni
