// AMM, Airdrop, Exchange and Bet.

#include "detail.hpp"

namespace mevni::catalog {

using namespace detail;

CatalogEntry amm() {
    CatalogEntry e;
    e.name = "amm";
    e.summary = "constant-product AMM over a token pair";
    e.constructor_schema = {{"t0", ArgKind::token, false, "first token"}, {"t1", ArgKind::token, false, "second token"}};
    e.make = [](const std::vector<Value>& a, const BlockchainState&) {
        const Token t0 = arg_at(a, 0).as_token();
        const Token t1 = arg_at(a, 1).as_token();
        auto c = std::make_shared<ContractCode>();
        c->name = "amm";
        c->intok_decl = c->outtok_decl = {t0, t1};

        c->constructor = method(
            "constructor",
            [t0, t1](MethodEnv& env) {
                env.require(t0 != t1, "distinct tokens");
                env.set("T0", tok(t0));
                env.set("T1", tok(t1));
                return Value();
            },
            AttachSpec::any_of({t0, t1}));

        add(*c, method(
                    "addLiq",
                    [t0, t1](MethodEnv& env) {
                        Amount x0 = env.attached().balance(t0), x1 = env.attached().balance(t1);
                        Amount r0 = env.balance(t0), r1 = env.balance(t1);
                        env.require(r0 * (r1 - x1) == (r0 - x0) * r1, "#T0*(#T1-x1)==(#T0-x0)*#T1");
                        return Value();
                    },
                    AttachSpec::any_of({t0, t1})));

        add(*c, getter("getTokens", [t0, t1](MethodEnv&) { return Value::tuple({tok(t0), tok(t1)}); }));

        add(*c, getter(
                    "getRate",
                    [t0, t1](MethodEnv& env) {
                        const Token& t = env.arg(0).as_token();
                        Amount r0 = env.balance(t0), r1 = env.balance(t1);
                        if (t == t0) {
                            env.require(r1 != 0, "#T1>0");
                            return Value::rational(make_rational(r0, r1));
                        }
                        if (t == t1) {
                            env.require(r0 != 0, "#T0>0");
                            return Value::rational(make_rational(r1, r0));
                        }
                        env.fail("getRate: unknown token " + t.symbol);
                    },
                    {token_param("t", {t0, t1})}));

        add(*c, method(
                    "swap",
                    [t0, t1](MethodEnv& env) {
                        auto [t, x] = single_attachment(env);
                        Amount ymin = int_arg_or(env, 0, 0);
                        const Token& tin = t == t0 ? t0 : t1;
                        const Token& tout = t == t0 ? t1 : t0;
                        Amount rin = env.balance(tin), rout = env.balance(tout);
                        Amount y = (x * rout) / rin;
                        env.require(ymin <= y && y < rout, "ymin<=y<#tout");
                        env.send(env.sender(), tout, y);
                        return Value();
                    },
                    AttachSpec::one_of({t0, t1}), {min_guard_param("ymin")}));

        c->move_generator = [t0, t1](const BlockchainState& s, const AccountId& self, const AccountId& adv,
                                     const MoveOptions& o) {
            MoveSet ms;
            for (const Token& t : {t0, t1})
                for (const Amount& x : grid_amounts(s.wallet_of(self).balance(t), o.grid))
                    ms.txs.push_back(tx(adv, self, "swap", {Value::integer(0)}, Wallet{{t, x}}));
            // Without either token every swap and addLiq is a no-op or aborts.
            const Wallet& w = s.wallet_of(adv);
            ms.complete = w.balance(t0) == 0 && w.balance(t1) == 0;
            return ms;
        };
        c->probes = [](const BlockchainState&, const AccountId&) { return std::vector<ProbeCall>{}; };
        return c;
    };
    return e;
}

CatalogEntry airdrop() {
    CatalogEntry e;
    e.name = "airdrop";
    e.summary = "gives its whole balance to whoever calls withdraw";
    e.constructor_schema = {{"token", ArgKind::token, false, "token handed out"}};
    e.make = [](const std::vector<Value>& a, const BlockchainState&) {
        const Token t = arg_at(a, 0).as_token();
        auto c = std::make_shared<ContractCode>();
        c->name = "airdrop";
        c->outtok_decl = {t};
        c->constructor = method(
            "constructor",
            [t](MethodEnv& env) {
                env.set("tout", tok(t));
                return Value();
            },
            AttachSpec::one_of({t}));
        add(*c, method("withdraw", [t](MethodEnv& env) {
                env.send(env.sender(), t, env.balance(t));
                return Value();
            }));
        c->move_generator = [](const BlockchainState&, const AccountId& self, const AccountId& adv,
                               const MoveOptions&) { return MoveSet{{tx(adv, self, "withdraw")}, true}; };
        c->probes = [](const BlockchainState&, const AccountId&) { return std::vector<ProbeCall>{}; };
        return c;
    };
    return e;
}

CatalogEntry exchange() {
    CatalogEntry e;
    e.name = "exchange";
    e.summary = "fixed-rate exchange paying rate units of tout per unit of tin";
    e.constructor_schema = {{"tout", ArgKind::token, false, "token paid out (funded at deployment)"},
                            {"tin", ArgKind::token, false, "token accepted"},
                            {"rate", ArgKind::integer, false, "units of tout per unit of tin"}};
    e.make = [](const std::vector<Value>& a, const BlockchainState&) {
        const Token tout = arg_at(a, 0).as_token();
        const Token tin = arg_at(a, 1).as_token();
        auto c = std::make_shared<ContractCode>();
        c->name = "exchange";
        c->intok_decl = {tin};
        c->outtok_decl = {tout};
        c->constructor = method(
            "constructor",
            [tout, tin](MethodEnv& env) {
                const Amount& r = env.arg(2).as_int();
                env.require(r > 0, "r>0");
                env.set("rate", Value::integer(r));
                env.set("tout", tok(tout));
                env.set("tin", tok(tin));
                env.set("owner", acct(env.origin()));
                return Value();
            },
            AttachSpec::one_of({tout}));
        add(*c, getter("getTokens", [tin, tout](MethodEnv&) { return Value::tuple({tok(tin), tok(tout)}); }));
        // Takes no argument in the listing; callers written against the AMM
        // interface pass a token, which is ignored.
        add(*c, getter("getRate", [](MethodEnv& env) { return env.get("rate"); }));
        add(*c, method(
                    "setRate",
                    [](MethodEnv& env) {
                        env.require(Value::account(env.origin()) == env.get("owner"), "origin==owner");
                        env.set("rate", Value::integer(env.arg(0).as_int()));
                        return Value();
                    },
                    AttachSpec::none(), {scalar_param("n", small_ints({1, 2, 3}), false)}));
        add(*c, method(
                    "swap",
                    [tin, tout](MethodEnv& env) {
                        auto [t, x] = single_attachment(env);
                        Amount out = x * env.get("rate").as_int();
                        env.require(t == tin && env.balance(tout) >= out, "t==tin && #tout>=x*rate");
                        env.send(env.sender(), tout, out);
                        return Value();
                    },
                    AttachSpec::one_of({tin})));
        c->move_generator = [tin, tout](const BlockchainState& s, const AccountId& self, const AccountId& adv,
                                        const MoveOptions& o) {
            MoveSet ms;
            const ContractInstance* me = s.contract(self);
            Amount rate = me->state.store.get("rate").as_int();
            Amount max_in = rate > 0 ? me->state.wallet.balance(tout) / rate : Amount(0);
            auto xs = grid_amounts(max_in, o.grid);
            for (const Amount& x : xs) ms.txs.push_back(tx(adv, self, "swap", {}, Wallet{{tin, x}}));
            ms.complete = Amount(xs.size()) == max_in;
            if (me->state.store.get("owner") == Value::account(adv)) {
                for (const Amount& n : std::vector<Amount>{1, Amount(rate + 1), Amount(rate * 2)})
                    ms.txs.push_back(tx(adv, self, "setRate", {Value::integer(n)}));
                ms.complete = false;
            }
            return ms;
        };
        c->probes = [](const BlockchainState&, const AccountId&) { return std::vector<ProbeCall>{}; };
        return c;
    };
    return e;
}

CatalogEntry bet() {
    CatalogEntry e;
    e.name = "bet";
    e.summary = "bet on an oracle rate exceeding a threshold before a deadline";
    e.constructor_schema = {{"oracle", ArgKind::contract, false, "price oracle exposing getTokens/getRate"},
                            {"token", ArgKind::token, false, "token the rate is quoted against"},
                            {"rate", ArgKind::rational, false, "threshold the oracle rate must exceed"},
                            {"deadline", ArgKind::integer, false, "last block height at which win succeeds"},
                            {"eth", ArgKind::token, true, "token of the pot (default ETH)"}};
    e.make = [](const std::vector<Value>& a, const BlockchainState&) {
        const AccountId oracle = arg_at(a, 0).as_account();
        const Token t = arg_at(a, 1).as_token();
        const Token eth = arg_at(a, 4).is_null() ? Token{"ETH"} : arg_at(a, 4).as_token();
        auto c = std::make_shared<ContractCode>();
        c->name = "bet";
        c->declared_deps = {oracle};
        c->call_sites = {{oracle, "getTokens"}, {oracle, "getRate"}};
        c->reads_height = true;
        c->height_view = [](const ContractState& st, std::uint64_t h) {
            return Amount(h) <= st.store.get("deadline").as_int() ? std::string("open") : std::string("closed");
        };
        c->intok_decl = c->outtok_decl = {eth};
        c->constructor = method(
            "constructor",
            [oracle, t, eth](MethodEnv& env) {
                env.require(t != eth, "t!=ETH");
                env.require(env.call(oracle, "getTokens") == Value::tuple({tok(eth), tok(t)}),
                            "oracle.getTokens()==(ETH,t)");
                env.set("tok", tok(t));
                env.set("rate", Value::rational(env.arg(2).as_rational()));
                env.set("owner", acct(env.origin()));
                env.set("deadline", Value::integer(env.arg(3).as_int()));
                env.set("player", Value());
                env.set("oracle", acct(oracle));
                return Value();
            },
            AttachSpec::one_of({eth}));
        add(*c, method(
                    "bet",
                    [eth](MethodEnv& env) {
                        Amount x = env.attached().balance(eth);
                        env.require(env.get("player").is_null(), "player==null");
                        // x must match the pot as it stood before this call.
                        env.require(x == env.balance(eth) - x, "x==pot");
                        env.set("player", acct(env.origin()));
                        return Value();
                    },
                    AttachSpec::one_of({eth})));
        add(*c, method("win", [oracle, eth](MethodEnv& env) {
                env.require(Amount(env.block_height()) <= env.get("deadline").as_int(), "block.num<=deadline");
                env.require(Value::account(env.origin()) == env.get("player"), "origin==player");
                Value r = env.call(oracle, "getRate", {tok(eth)});
                env.require(r.as_rational() > env.get("rate").as_rational(), "oracle.getRate(ETH)>rate");
                env.send(env.get("player").as_account(), eth, env.balance(eth));
                return Value();
            }));
        add(*c, method("close", [eth](MethodEnv& env) {
                env.require(Amount(env.block_height()) > env.get("deadline").as_int(), "block.num>deadline");
                env.require(Value::account(env.origin()) == env.get("owner"), "origin==owner");
                env.send(env.get("owner").as_account(), eth, env.balance(eth));
                return Value();
            }));
        c->move_generator = [eth](const BlockchainState& s, const AccountId& self, const AccountId& adv,
                                  const MoveOptions&) {
            MoveSet ms;
            const ContractInstance* me = s.contract(self);
            if (me->state.store.get("player").is_null()) {
                Wallet w;
                w.credit(eth, me->state.wallet.balance(eth));
                ms.txs.push_back(tx(adv, self, "bet", {}, w));
            }
            ms.txs.push_back(tx(adv, self, "win"));
            ms.txs.push_back(tx(adv, self, "close"));
            ms.complete = true;  // bet only accepts the pot amount
            return ms;
        };
        c->probes = [oracle, eth](const BlockchainState&, const AccountId&) {
            return std::vector<ProbeCall>{{oracle, "getTokens", {}, {}}, {oracle, "getRate", {tok(eth)}, {}}};
        };
        return c;
    };
    return e;
}

}  // namespace mevni::catalog
