// Small contracts behind the counterexamples: the latch pair, fixed-payout
// contracts, registers and the contracts gated on them.

#include "detail.hpp"

namespace mevni::catalog {

using namespace detail;

namespace {

const std::vector<Value> register_domain = small_ints({0, 1, 2, 3});

ProbeGenerator no_probes() {
    return [](const BlockchainState&, const AccountId&) { return std::vector<ProbeCall>{}; };
}

MoveGenerator fixed_moves(std::vector<std::pair<std::string, Wallet>> calls) {
    return [calls](const BlockchainState&, const AccountId& self, const AccountId& adv, const MoveOptions&) {
        MoveSet ms;
        for (const auto& [m, w] : calls) ms.txs.push_back(tx(adv, self, m, {}, w));
        ms.complete = true;
        return ms;
    };
}

// y ∈ {0, 1, 2} ∪ {currently stored value}; the domain is unbounded so the set is incomplete.
std::vector<Value> register_candidates(const BlockchainState& s, const AccountId& reg) {
    std::vector<Value> ys = small_ints({0, 1, 2});
    if (const ContractInstance* c = s.contract(reg)) {
        const Value& x = c->state.store.get("x");
        if (x.is_int() && std::find(ys.begin(), ys.end(), x) == ys.end()) ys.push_back(x);
    }
    return ys;
}

MoveGenerator register_moves(const std::string& method, std::optional<AccountId> target) {
    return [method, target](const BlockchainState& s, const AccountId& self, const AccountId& adv, const MoveOptions&) {
        MoveSet ms;
        for (const Value& y : register_candidates(s, target.value_or(self)))
            ms.txs.push_back(tx(adv, self, method, {y}));
        return ms;
    };
}

CatalogEntry register_entry(std::string name, std::string summary, bool write_once) {
    CatalogEntry e;
    e.name = std::move(name);
    e.summary = std::move(summary);
    e.make = [write_once, n = e.name](const std::vector<Value>&, const BlockchainState&) {
        auto c = std::make_shared<ContractCode>();
        c->name = n;
        c->constructor = method("constructor", [](MethodEnv& env) {
            env.set("x", Value::integer(0));
            return Value();
        });
        add(*c, getter("get", [](MethodEnv& env) { return env.get("x"); }));
        add(*c, method(
                    "set",
                    [write_once](MethodEnv& env) {
                        if (!write_once || env.get("x") == Value::integer(0)) env.set("x", env.arg(0));
                        return Value();
                    },
                    AttachSpec::none(), {scalar_param("y", register_domain, false)}));
        c->move_generator = register_moves("set", std::nullopt);
        c->probes = no_probes();
        return c;
    };
    return e;
}

}  // namespace

std::vector<CatalogEntry> counterexample_contracts() {
    std::vector<CatalogEntry> out;

    {
        CatalogEntry e;
        e.name = "latch";
        e.summary = "one-shot choice: f1 pays 1 unit now, f2 unlocks the claim contract";
        e.constructor_schema = {{"token", ArgKind::token, false, "token paid by f1 (deploy with exactly 1 unit)"}};
        e.make = [](const std::vector<Value>& a, const BlockchainState&) {
            const Token t = arg_at(a, 0).as_token();
            auto c = std::make_shared<ContractCode>();
            c->name = "latch";
            c->outtok_decl = {t};
            c->constructor = method(
                "constructor",
                [t](MethodEnv& env) {
                    env.require(env.attached().balance(t) == 1, "x==1");
                    env.set("n", Value::integer(0));
                    return Value();
                },
                AttachSpec::one_of({t}));
            add(*c, method("f1", [t](MethodEnv& env) {
                    env.require(env.get("n") == Value::integer(0), "n==0");
                    env.set("n", Value::integer(1));
                    env.send(env.sender(), t, 1);
                    return Value();
                }));
            add(*c, method("f2", [](MethodEnv& env) {
                    env.require(env.get("n") == Value::integer(0), "n==0");
                    env.set("n", Value::integer(2));
                    return Value();
                }));
            add(*c, getter("f3", [](MethodEnv& env) { return env.get("n"); }));
            c->move_generator = fixed_moves({{"f1", {}}, {"f2", {}}});
            c->probes = no_probes();
            return c;
        };
        out.push_back(std::move(e));
    }

    {
        CatalogEntry e;
        e.name = "latch_claim";
        e.summary = "pays 1 unit once the latch has been set to 2";
        e.constructor_schema = {{"latch", ArgKind::contract, false, "latch instance"},
                                {"token", ArgKind::token, false, "token paid (deploy with exactly 1 unit)"}};
        e.make = [](const std::vector<Value>& a, const BlockchainState&) {
            const AccountId latch = arg_at(a, 0).as_account();
            const Token t = arg_at(a, 1).as_token();
            auto c = std::make_shared<ContractCode>();
            c->name = "latch_claim";
            c->declared_deps = {latch};
            c->call_sites = {{latch, "f3"}};
            c->outtok_decl = {t};
            c->constructor = method(
                "constructor",
                [t](MethodEnv& env) {
                    env.require(env.attached().balance(t) == 1, "x==1");
                    return Value();
                },
                AttachSpec::one_of({t}));
            add(*c, method("g", [latch, t](MethodEnv& env) {
                    env.require(env.call(latch, "f3") == Value::integer(2), "C1.f3()==2");
                    env.send(env.sender(), t, 1);
                    return Value();
                }));
            c->move_generator = fixed_moves({{"g", {}}});
            c->probes = [latch](const BlockchainState&, const AccountId&) {
                return std::vector<ProbeCall>{{latch, "f3", {}, {}}};
            };
            return c;
        };
        out.push_back(std::move(e));
    }

    {
        CatalogEntry e;
        e.name = "fixed_swap";
        e.summary = "f(?in) pays a fixed amount of one token, optionally only to one sender";
        e.constructor_schema = {{"out_token", ArgKind::token, false, "token paid by f"},
                                {"out_amount", ArgKind::integer, false, "amount paid by f"},
                                {"in_token", ArgKind::token, true, "token f must receive"},
                                {"in_amount", ArgKind::integer, true, "amount f must receive"},
                                {"only_sender", ArgKind::contract, true, "the only sender f pays"}};
        e.make = [](const std::vector<Value>& a, const BlockchainState&) {
            const Token tout = arg_at(a, 0).as_token();
            const Amount out_amount = arg_at(a, 1).as_int();
            Wallet in;
            if (!arg_at(a, 2).is_null()) in.credit(arg_at(a, 2).as_token(), arg_at(a, 3).is_null() ? Amount(1) : arg_at(a, 3).as_int());
            const Value only = arg_at(a, 4);
            auto c = std::make_shared<ContractCode>();
            c->name = "fixed_swap";
            c->outtok_decl = {tout};
            for (const auto& [t, x] : in.entries()) c->intok_decl.insert(t);
            c->sender_agnostic = only.is_null();
            c->constructor = method("constructor", [](MethodEnv&) { return Value(); }, AttachSpec::any_of({tout}));
            add(*c, method(
                        "f",
                        [tout, out_amount, only](MethodEnv& env) {
                            if (!only.is_null()) env.require(Value::account(env.sender()) == only, "sender==" + only.str());
                            env.send(env.sender(), tout, out_amount);
                            return Value();
                        },
                        in.empty() ? AttachSpec::none() : AttachSpec::exactly(in)));
            c->move_generator = fixed_moves({{"f", in}});
            c->probes = no_probes();
            return c;
        };
        out.push_back(std::move(e));
    }

    {
        CatalogEntry e;
        e.name = "relay";
        e.summary = "g() calls source.f() and then pays a fixed amount to its sender";
        e.constructor_schema = {{"source", ArgKind::contract, false, "contract whose f() is called"},
                                {"token", ArgKind::token, false, "token paid by g"},
                                {"amount", ArgKind::integer, false, "amount paid by g"}};
        e.make = [](const std::vector<Value>& a, const BlockchainState&) {
            const AccountId source = arg_at(a, 0).as_account();
            const Token t = arg_at(a, 1).as_token();
            const Amount amount = arg_at(a, 2).as_int();
            auto c = std::make_shared<ContractCode>();
            c->name = "relay";
            c->declared_deps = {source};
            c->call_sites = {{source, "f"}};
            c->intok_decl = c->outtok_decl = {t};
            c->constructor = method("constructor", [](MethodEnv&) { return Value(); }, AttachSpec::any_of({t}));
            add(*c, method("g", [source, t, amount](MethodEnv& env) {
                    env.call(source, "f");
                    env.send(env.sender(), t, amount);
                    return Value();
                }));
            c->move_generator = fixed_moves({{"g", {}}});
            c->probes = [source](const BlockchainState&, const AccountId&) {
                return std::vector<ProbeCall>{{source, "f", {}, {}}};
            };
            return c;
        };
        out.push_back(std::move(e));
    }

    out.push_back(register_entry("register", "integer register anyone can overwrite", false));
    out.push_back(register_entry("once_register", "integer register that can be set once while zero", true));

    {
        CatalogEntry e;
        e.name = "paid_flag";
        e.summary = "flag set to 1 by paying exactly 1 unit";
        e.constructor_schema = {{"token", ArgKind::token, false, "token set() must receive"}};
        e.make = [](const std::vector<Value>& a, const BlockchainState&) {
            const Token t = arg_at(a, 0).as_token();
            auto c = std::make_shared<ContractCode>();
            c->name = "paid_flag";
            c->intok_decl = {t};
            c->constructor = method("constructor", [](MethodEnv& env) {
                env.set("x", Value::integer(0));
                return Value();
            });
            add(*c, getter("get", [](MethodEnv& env) { return env.get("x"); }));
            add(*c, method(
                        "set",
                        [](MethodEnv& env) {
                            env.set("x", Value::integer(1));
                            return Value();
                        },
                        AttachSpec::exactly(Wallet{{t, 1}})));
            c->move_generator = fixed_moves({{"set", Wallet{{t, 1}}}});
            c->probes = no_probes();
            return c;
        };
        out.push_back(std::move(e));
    }

    {
        CatalogEntry e;
        e.name = "register_gate";
        e.summary = "pays out once a register reads the expected value";
        e.constructor_schema = {{"reg", ArgKind::contract, false, "register consulted through get()"},
                                {"token", ArgKind::token, false, "token paid by f"},
                                {"amount", ArgKind::integer, true, "amount paid (default: whole balance)"},
                                {"expected", ArgKind::integer, true, "value get() must return (default 1)"}};
        e.make = [](const std::vector<Value>& a, const BlockchainState&) {
            const AccountId reg = arg_at(a, 0).as_account();
            const Token t = arg_at(a, 1).as_token();
            const Value amount = arg_at(a, 2);
            const Value expected = arg_at(a, 3).is_null() ? Value::integer(1) : arg_at(a, 3);
            auto c = std::make_shared<ContractCode>();
            c->name = "register_gate";
            c->declared_deps = {reg};
            c->call_sites = {{reg, "get"}};
            c->outtok_decl = {t};
            c->constructor = method("constructor", [](MethodEnv&) { return Value(); }, AttachSpec::any_of({t}));
            add(*c, method("f", [reg, t, amount, expected](MethodEnv& env) {
                    env.require(env.call(reg, "get") == expected, "get()==" + expected.str());
                    env.send(env.sender(), t, amount.is_null() ? env.balance(t) : amount.as_int());
                    return Value();
                }));
            c->move_generator = fixed_moves({{"f", {}}});
            c->probes = [reg](const BlockchainState&, const AccountId&) {
                return std::vector<ProbeCall>{{reg, "get", {}, {}}};
            };
            return c;
        };
        out.push_back(std::move(e));
    }

    {
        CatalogEntry e;
        e.name = "register_forward";
        e.summary = "forwards get/set to a register";
        e.constructor_schema = {{"reg", ArgKind::contract, false, "register forwarded to"}};
        e.make = [](const std::vector<Value>& a, const BlockchainState&) {
            const AccountId reg = arg_at(a, 0).as_account();
            auto c = std::make_shared<ContractCode>();
            c->name = "register_forward";
            c->declared_deps = {reg};
            c->call_sites = {{reg, "get"}, {reg, "set"}};
            c->constructor = method("constructor", [](MethodEnv&) { return Value(); });
            add(*c, getter("get_x", [reg](MethodEnv& env) { return env.call(reg, "get"); }));
            add(*c, method(
                        "set_x",
                        [reg](MethodEnv& env) {
                            env.call(reg, "set", {env.arg(0)});
                            return Value();
                        },
                        AttachSpec::none(), {scalar_param("y", register_domain, false)}));
            c->move_generator = register_moves("set_x", reg);
            c->probes = [reg](const BlockchainState&, const AccountId&) {
                std::vector<ProbeCall> p{{reg, "get", {}, {}}};
                for (const Value& y : small_ints({0, 1, 2})) p.push_back({reg, "set", {y}, {}});
                return p;
            };
            return c;
        };
        out.push_back(std::move(e));
    }

    {
        CatalogEntry e;
        e.name = "drop";
        e.summary = "one-shot payout: 2 units if Var is 1, or 3 units if Var is 0 (then sets Var to 2)";
        e.constructor_schema = {{"var", ArgKind::contract, false, "once_register consulted and set"},
                                {"token", ArgKind::token, false, "token paid"}};
        e.make = [](const std::vector<Value>& a, const BlockchainState&) {
            const AccountId var = arg_at(a, 0).as_account();
            const Token t = arg_at(a, 1).as_token();
            auto c = std::make_shared<ContractCode>();
            c->name = "drop";
            c->declared_deps = {var};
            c->call_sites = {{var, "get"}, {var, "set"}};
            c->outtok_decl = {t};
            c->constructor = method(
                "constructor",
                [](MethodEnv& env) {
                    env.set("b", Value::integer(0));
                    return Value();
                },
                AttachSpec::any_of({t}));
            add(*c, method("drop2", [var, t](MethodEnv& env) {
                    env.require(env.get("b") == Value::integer(0) && env.call(var, "get") == Value::integer(1),
                                "b==0 && Var.get()==1");
                    env.set("b", Value::integer(1));
                    env.send(env.sender(), t, 2);
                    return Value();
                }));
            add(*c, method("drop3", [var, t](MethodEnv& env) {
                    env.require(env.get("b") == Value::integer(0) && env.call(var, "get") == Value::integer(0),
                                "b==0 && Var.get()==0");
                    env.set("b", Value::integer(1));
                    env.call(var, "set", {Value::integer(2)});
                    env.send(env.sender(), t, 3);
                    return Value();
                }));
            c->move_generator = fixed_moves({{"drop2", {}}, {"drop3", {}}});
            c->probes = [var](const BlockchainState&, const AccountId&) {
                return std::vector<ProbeCall>{{var, "get", {}, {}}, {var, "set", {Value::integer(2)}, {}}};
            };
            return c;
        };
        out.push_back(std::move(e));
    }

    return out;
}

}  // namespace mevni::catalog
