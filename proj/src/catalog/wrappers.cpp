// BestSwap, SwapRouter, the lending pool and the two arbitrage wrappers.

#include "detail.hpp"

namespace mevni::catalog {

using namespace detail;

namespace {

std::vector<ProbeCall> pair_probes(const AccountId& c, const Token& a, const Token& b) {
    return {{c, "getTokens", {}, {}},
            {c, "getRate", {tok(a)}, {}},
            {c, "getRate", {tok(b)}, {}},
            {c, "swap", {Value::integer(0)}, Wallet{{a, 1}}},
            {c, "swap", {Value::integer(0)}, Wallet{{b, 1}}}};
}

MoveSet wrapper_swaps(const BlockchainState& s, const AccountId& self, const AccountId& adv, const MoveOptions& o,
                      const std::string& method, std::initializer_list<Token> inputs, bool with_ymin) {
    MoveSet ms;
    for (const Token& t : inputs)
        for (const Amount& x : grid_amounts(routed_liquidity(s, self, t), o.grid))
            ms.txs.push_back(tx(adv, self, method, with_ymin ? std::vector<Value>{Value::integer(0)} : std::vector<Value>{},
                                Wallet{{t, x}}));
    return ms;
}

Rational rate_of(MethodEnv& env, const AccountId& c, const Token& t) {
    return env.call(c, "getRate", {tok(t)}).as_rational();
}

}  // namespace

CatalogEntry best_swap() {
    CatalogEntry e;
    e.name = "best_swap";
    e.summary = "routes a swap to whichever of two pools quotes the better rate";
    e.constructor_schema = {{"c0", ArgKind::contract, false, "first pool"}, {"c1", ArgKind::contract, false, "second pool"}};
    e.make = [](const std::vector<Value>& a, const BlockchainState& pre) {
        const AccountId c0 = arg_at(a, 0).as_account();
        const AccountId c1 = arg_at(a, 1).as_account();
        const auto [t0, t1] = token_pair(pre, c0);
        auto c = std::make_shared<ContractCode>();
        c->name = "best_swap";
        c->declared_deps = {c0, c1};
        for (const auto& d : {c0, c1})
            for (const char* m : {"getTokens", "getRate", "swap"}) c->call_sites.insert({d, m});
        c->intok_decl = c->outtok_decl = {t0, t1};
        c->constructor = method("constructor", [c0, c1](MethodEnv& env) {
            Value p = env.call(c0, "getTokens");
            env.require(p == env.call(c1, "getTokens"), "c0.getTokens()==c1.getTokens()");
            env.set("t0", p.as_tuple().at(0));
            env.set("t1", p.as_tuple().at(1));
            return Value();
        });
        add(*c, getter("getTokens", [t0, t1](MethodEnv&) { return Value::tuple({tok(t0), tok(t1)}); }));
        add(*c, getter(
                    "getRate",
                    [c0, c1](MethodEnv& env) {
                        const Token& t = env.arg(0).as_token();
                        return Value::rational(std::min(rate_of(env, c0, t), rate_of(env, c1, t)));
                    },
                    {token_param("t", {t0, t1})}));
        add(*c, method(
                    "swap",
                    [c0, c1, t0, t1](MethodEnv& env) {
                        auto [t, x] = single_attachment(env);
                        Amount ymin = int_arg_or(env, 0, 0);
                        const Token& tout = t == t0 ? t1 : t0;
                        const AccountId& target = rate_of(env, c0, t) < rate_of(env, c1, t) ? c0 : c1;
                        env.call(target, "swap", {Value::integer(ymin)}, Wallet{{t, x}});
                        env.send(env.sender(), tout, env.balance(tout));
                        return Value();
                    },
                    AttachSpec::one_of({t0, t1}), {min_guard_param("ymin")}));
        c->move_generator = [t0, t1](const BlockchainState& s, const AccountId& self, const AccountId& adv,
                                     const MoveOptions& o) {
            return wrapper_swaps(s, self, adv, o, "swap", {t0, t1}, true);
        };
        c->probes = [c0, c1, t0, t1](const BlockchainState&, const AccountId&) {
            auto p = pair_probes(c0, t0, t1);
            auto q = pair_probes(c1, t0, t1);
            p.insert(p.end(), q.begin(), q.end());
            return p;
        };
        return c;
    };
    return e;
}

CatalogEntry swap_router() {
    CatalogEntry e;
    e.name = "swap_router";
    e.summary = "chains two pools sharing a middle token: t0 -> t1 -> t2 and back";
    e.constructor_schema = {{"c0", ArgKind::contract, false, "pool over (t0,t1)"},
                            {"c1", ArgKind::contract, false, "pool over (t1,t2)"}};
    e.make = [](const std::vector<Value>& a, const BlockchainState& pre) {
        const AccountId c0 = arg_at(a, 0).as_account();
        const AccountId c1 = arg_at(a, 1).as_account();
        const auto [t0, t1] = token_pair(pre, c0);
        const auto [t1b, t2] = token_pair(pre, c1);
        auto c = std::make_shared<ContractCode>();
        c->name = "swap_router";
        c->declared_deps = {c0, c1};
        for (const auto& d : {c0, c1})
            for (const char* m : {"getTokens", "getRate", "swap"}) c->call_sites.insert({d, m});
        c->intok_decl = c->outtok_decl = {t0, t1, t2};
        c->constructor = method("constructor", [c0, c1](MethodEnv& env) {
            Value p = env.call(c0, "getTokens");
            Value q = env.call(c1, "getTokens");
            env.require(p.as_tuple().at(1) == q.as_tuple().at(0), "t1==t1b");
            env.set("t0", p.as_tuple().at(0));
            env.set("t1", p.as_tuple().at(1));
            env.set("t2", q.as_tuple().at(1));
            return Value();
        });
        add(*c, getter("getTokens", [t0, t2](MethodEnv&) { return Value::tuple({tok(t0), tok(t2)}); }));
        // Composite quote: t0 per t2 (or t2 per t0), chaining through t1.
        add(*c, getter(
                    "getRate",
                    [c0, c1, t0, t1, t2](MethodEnv& env) {
                        const Token& t = env.arg(0).as_token();
                        if (t == t0) return Value::rational(rate_of(env, c0, t0) * rate_of(env, c1, t1));
                        if (t == t2) return Value::rational(rate_of(env, c1, t2) * rate_of(env, c0, t1));
                        env.fail("getRate: unknown token " + t.symbol);
                    },
                    {token_param("t", {t0, t2})}));
        add(*c, method(
                    "swap",
                    [c0, c1, t0, t1, t2](MethodEnv& env) {
                        auto [t, x] = single_attachment(env);
                        Amount ymin = int_arg_or(env, 0, 0);
                        bool forward = t == t0;
                        const AccountId& first = forward ? c0 : c1;
                        const AccountId& second = forward ? c1 : c0;
                        const Token& tout = forward ? t2 : t0;
                        env.call(first, "swap", {Value::integer(0)}, Wallet{{t, x}});
                        env.call(second, "swap", {Value::integer(0)}, Wallet{{t1, env.balance(t1)}});
                        env.require(env.balance(tout) >= ymin, "#tout>=ymin");
                        env.send(env.sender(), tout, env.balance(tout));
                        return Value();
                    },
                    AttachSpec::one_of({t0, t2}), {min_guard_param("ymin")}));
        c->move_generator = [t0, t2](const BlockchainState& s, const AccountId& self, const AccountId& adv,
                                     const MoveOptions& o) {
            return wrapper_swaps(s, self, adv, o, "swap", {t0, t2}, true);
        };
        c->probes = [c0, c1, t0, t1, t2](const BlockchainState&, const AccountId&) {
            auto p = pair_probes(c0, t0, t1);
            auto q = pair_probes(c1, t1, t2);
            p.insert(p.end(), q.begin(), q.end());
            return p;
        };
        return c;
    };
    return e;
}

namespace {

std::string mint_key(const AccountId& a) { return "mint[" + a.name + "]"; }
std::string debt_key(const AccountId& a) { return "debt[" + a.name + "]"; }

Rational store_num(const MethodEnv& env, const std::string& key) {
    const Value& v = env.get(key);
    return v.is_null() ? Rational(0) : v.as_rational();
}

Rational lp_exchange_rate(const MethodEnv& env, const Amount& n) {
    Rational m = store_num(env, "M");
    if (m == 0) return Rational(1);
    return (Rational(n) + store_num(env, "D") * store_num(env, "Ir")) / m;
}

// Collateralization; an account without debt is treated as infinitely safe.
struct Collateral {
    bool infinite = false;
    Rational value;
};

Collateral lp_collateral(const MethodEnv& env, const AccountId& a, const Amount& n) {
    Rational debt = store_num(env, debt_key(a));
    if (debt == 0) return {true, 0};
    return {false, (store_num(env, mint_key(a)) * lp_exchange_rate(env, n)) / (debt * store_num(env, "Ir"))};
}

bool at_least(const Collateral& c, const Rational& bound) { return c.infinite || c.value >= bound; }
bool below(const Collateral& c, const Rational& bound) { return !c.infinite && c.value < bound; }
bool at_most(const Collateral& c, const Rational& bound) { return !c.infinite && c.value <= bound; }

Amount floor_of(const Rational& r) {
    return boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r);
}

}  // namespace

CatalogEntry lending_pool() {
    CatalogEntry e;
    e.name = "lending_pool";
    e.summary = "single-token lending pool with mint bookkeeping and a flash loan";
    e.constructor_schema = {{"cmin", ArgKind::rational, false, "minimum collateralization"},
                            {"rliq", ArgKind::rational, false, "liquidation bonus (> 1)"},
                            {"imul", ArgKind::rational, false, "interest multiplier per accrue (> 1)"},
                            {"token", ArgKind::token, false, "handled token"},
                            {"oracle", ArgKind::user, false, "user allowed to call accrue"},
                            {"fee", ArgKind::integer, true, "flash loan fee (default 0)"}};
    e.make = [](const std::vector<Value>& a, const BlockchainState&) {
        const Token t = arg_at(a, 3).as_token();
        const AccountId oracle = arg_at(a, 4).as_account();
        const Amount fee = arg_at(a, 5).is_null() ? Amount(0) : arg_at(a, 5).as_int();
        auto c = std::make_shared<ContractCode>();
        c->name = "lending_pool";
        c->intok_decl = c->outtok_decl = {t};
        c->constructor = method(
            "constructor",
            [t, oracle, fee](MethodEnv& env) {
                Rational r = env.arg(1).as_rational(), m = env.arg(2).as_rational();
                env.require(r > 1 && m > 1, "r>1 && m>1");
                env.set("Cmin", Value::rational(env.arg(0).as_rational()));
                env.set("Rliq", Value::rational(r));
                env.set("Ir", Value::integer(1));
                env.set("Imul", Value::rational(m));
                env.set("D", Value::integer(0));
                env.set("M", Value::integer(0));
                env.set("t", tok(t));
                env.set("Oracle", acct(oracle));
                env.set("fee", Value::integer(fee));
                return Value();
            },
            AttachSpec::one_of({t}));
        add(*c, getter("getToken", [t](MethodEnv&) { return tok(t); }));
        add(*c, method(
                    "deposit",
                    [t](MethodEnv& env) {
                        Amount x = env.attached().balance(t);
                        Rational y = Rational(x) / lp_exchange_rate(env, env.balance(t) - x);
                        const std::string k = mint_key(env.origin());
                        env.set(k, Value::rational(store_num(env, k) + y));
                        env.set("M", Value::rational(store_num(env, "M") + y));
                        return Value();
                    },
                    AttachSpec::one_of({t})));
        add(*c, method(
                    "borrow",
                    [t](MethodEnv& env) {
                        const Amount& x = env.arg(0).as_int();
                        env.require(x >= 0 && env.balance(t) > x, "#t>x");
                        env.send(env.sender(), t, x);
                        Rational dx = Rational(x) / store_num(env, "Ir");
                        const std::string k = debt_key(env.origin());
                        env.set(k, Value::rational(store_num(env, k) + dx));
                        env.set("D", Value::rational(store_num(env, "D") + dx));
                        env.require(at_least(lp_collateral(env, env.origin(), env.balance(t)), store_num(env, "Cmin")),
                                    "C(origin,#t)>=Cmin");
                        return Value();
                    },
                    AttachSpec::none(), {amount_param("x")}));
        add(*c, method("accrue", [](MethodEnv& env) {
                env.require(Value::account(env.origin()) == env.get("Oracle"), "origin==Oracle");
                env.set("Ir", Value::rational(store_num(env, "Ir") * store_num(env, "Imul")));
                return Value();
            }));
        add(*c, method(
                    "repay",
                    [t](MethodEnv& env) {
                        Amount x = env.attached().balance(t);
                        const std::string k = debt_key(env.origin());
                        Rational ir = store_num(env, "Ir");
                        env.require(store_num(env, k) * ir >= x, "debt[origin]*Ir>=x");
                        env.set(k, Value::rational(store_num(env, k) - Rational(x) / ir));
                        env.set("D", Value::rational(store_num(env, "D") - Rational(x) / ir));
                        return Value();
                    },
                    AttachSpec::one_of({t})));
        add(*c, method(
                    "redeem",
                    [t](MethodEnv& env) {
                        const Amount& x = env.arg(0).as_int();
                        env.require(x >= 0, "x>=0");
                        Amount y = floor_of(Rational(x) * lp_exchange_rate(env, env.balance(t)));
                        const std::string k = mint_key(env.origin());
                        env.require(store_num(env, k) >= x && env.balance(t) >= y, "mint[origin]>=x && #t>=y");
                        env.send(env.sender(), t, y);
                        env.set(k, Value::rational(store_num(env, k) - x));
                        env.set("M", Value::rational(store_num(env, "M") - x));
                        env.require(at_least(lp_collateral(env, env.origin(), env.balance(t)), store_num(env, "Cmin")),
                                    "C(origin,#t)>=Cmin");
                        return Value();
                    },
                    AttachSpec::none(), {amount_param("x")}));
        add(*c, method(
                    "liquidate",
                    [t](MethodEnv& env) {
                        Amount x = env.attached().balance(t);
                        const AccountId b = env.arg(0).as_account();
                        Amount before = env.balance(t) - x;
                        Rational y = (Rational(x) / lp_exchange_rate(env, before)) * store_num(env, "Rliq");
                        Rational ir = store_num(env, "Ir");
                        Rational cmin = store_num(env, "Cmin");
                        env.require(store_num(env, debt_key(b)) * ir > x && below(lp_collateral(env, b, before), cmin) &&
                                        store_num(env, mint_key(b)) >= y,
                                    "liquidation guard");
                        const std::string mo = mint_key(env.origin()), mb = mint_key(b), db = debt_key(b);
                        env.set(mo, Value::rational(store_num(env, mo) + y));
                        env.set(mb, Value::rational(store_num(env, mb) - y));
                        env.set(db, Value::rational(store_num(env, db) - Rational(x) / ir));
                        env.set("D", Value::rational(store_num(env, "D") - Rational(x) / ir));
                        env.require(at_most(lp_collateral(env, b, env.balance(t)), cmin), "C(b,#t)<=Cmin");
                        return Value();
                    },
                    AttachSpec::one_of({t}), {ParamSpec{"b", ParamKind::account, {}, false}}));
        add(*c, method(
                    "flashLoan",
                    [t, fee](MethodEnv& env) {
                        const Amount& amt = env.arg(0).as_int();
                        if (!env.arg(1).is_null()) env.require(env.arg(1).as_token() == t, "t matches pool token");
                        Amount old_bal = env.balance(t);
                        env.send(env.sender(), t, amt);
                        Amount need = old_bal + fee;
                        env.require_final([t, need](const Wallet& w) { return w.balance(t) >= need; },
                                          "#t>=oldBal+fee");
                        return Value();
                    },
                    AttachSpec::none(), {amount_param("amt")}));
        c->move_generator = [t, oracle](const BlockchainState& s, const AccountId& self, const AccountId& adv,
                                        const MoveOptions& o) {
            MoveSet ms;
            const ContractInstance* me = s.contract(self);
            const Store& st = me->state.store;
            auto num = [&](const std::string& k) {
                const Value& v = st.get(k);
                return v.is_null() ? Rational(0) : v.as_rational();
            };
            Amount reserve = me->state.wallet.balance(t);
            Rational ir = num("Ir");
            for (const Amount& x : grid_amounts(reserve, o.grid)) {
                ms.txs.push_back(tx(adv, self, "deposit", {}, Wallet{{t, x}}));
                ms.txs.push_back(tx(adv, self, "borrow", {Value::integer(x)}));
            }
            for (const Amount& x : grid_amounts(floor_of(num(debt_key(adv)) * ir), o.grid))
                ms.txs.push_back(tx(adv, self, "repay", {}, Wallet{{t, x}}));
            for (const Amount& x : grid_amounts(floor_of(num(mint_key(adv))), o.grid))
                ms.txs.push_back(tx(adv, self, "redeem", {Value::integer(x)}));
            for (const auto& [k, v] : st.entries()) {
                if (k.rfind("debt[", 0) != 0 || v.as_rational() == 0) continue;
                AccountId b = AccountId::user(k.substr(5, k.size() - 6));
                for (const Amount& x : grid_amounts(floor_of(v.as_rational() * ir), o.grid))
                    ms.txs.push_back(tx(adv, self, "liquidate", {acct(b)}, Wallet{{t, x}}));
            }
            if (adv == oracle) ms.txs.push_back(tx(adv, self, "accrue"));
            return ms;
        };
        c->probes = [](const BlockchainState&, const AccountId&) { return std::vector<ProbeCall>{}; };
        return c;
    };
    return e;
}

namespace {

struct ArbitrageParts {
    AccountId c0, c1, lp;
    Token t0, t1;
};

ArbitrageParts arbitrage_parts(const std::vector<Value>& a, const BlockchainState& pre) {
    ArbitrageParts p{arg_at(a, 0).as_account(), arg_at(a, 1).as_account(), arg_at(a, 2).as_account(), {}, {}};
    auto [t0, t1] = token_pair(pre, p.c0);
    p.t0 = t0;
    p.t1 = t1;
    return p;
}

// The listing reads the pair from lp.getTokens(), but the pool only exposes
// getToken(); the pair comes from c0 and is checked against lp and c1.
MethodSpec arbitrage_constructor(const ArbitrageParts& p) {
    return method("constructor", [p](MethodEnv& env) {
        Value pair = env.call(p.c0, "getTokens");
        env.require(env.call(p.lp, "getToken") == pair.as_tuple().at(0) && env.call(p.c1, "getTokens") == pair,
                    "lp.getToken()==t0 && c1.getTokens()==(t0,t1)");
        env.set("t0", pair.as_tuple().at(0));
        env.set("t1", pair.as_tuple().at(1));
        return Value();
    });
}

void arbitrage_metadata(ContractCode& c, const ArbitrageParts& p, std::initializer_list<const char*> lp_methods) {
    c.declared_deps = {p.c0, p.c1, p.lp};
    for (const auto& d : {p.c0, p.c1})
        for (const char* m : {"getTokens", "swap"}) c.call_sites.insert({d, m});
    c.call_sites.insert({p.lp, "getToken"});
    for (const char* m : lp_methods) c.call_sites.insert({p.lp, m});
    c.intok_decl = c.outtok_decl = {p.t0, p.t1};
    c.probes = [p](const BlockchainState&, const AccountId&) {
        auto out = pair_probes(p.c0, p.t0, p.t1);
        auto more = pair_probes(p.c1, p.t0, p.t1);
        out.insert(out.end(), more.begin(), more.end());
        out.push_back({p.lp, "getToken", {}, {}});
        return out;
    };
    c.move_generator = [p](const BlockchainState& s, const AccountId& self, const AccountId& adv, const MoveOptions& o) {
        MoveSet ms;
        for (const Amount& x : grid_amounts(s.wallet_of(p.lp).balance(p.t0), o.grid))
            ms.txs.push_back(tx(adv, self, "arbitrage", {Value::integer(x)}));
        return ms;
    };
}

}  // namespace

CatalogEntry lp_arbitrage() {
    CatalogEntry e;
    e.name = "lp_arbitrage";
    e.summary = "borrow, swap round-trip across two pools, repay, keep the profit";
    e.constructor_schema = {{"c0", ArgKind::contract, false, "pool sold into first"},
                            {"c1", ArgKind::contract, false, "pool sold into second"},
                            {"lp", ArgKind::contract, false, "lending pool over t0"}};
    e.make = [](const std::vector<Value>& a, const BlockchainState& pre) {
        ArbitrageParts p = arbitrage_parts(a, pre);
        auto c = std::make_shared<ContractCode>();
        c->name = "lp_arbitrage";
        c->constructor = arbitrage_constructor(p);
        arbitrage_metadata(*c, p, {"borrow", "repay"});
        add(*c, method(
                    "arbitrage",
                    [p](MethodEnv& env) {
                        const Amount& x = env.arg(0).as_int();
                        env.call(p.lp, "borrow", {Value::integer(x)});
                        env.call(p.c0, "swap", {Value::integer(0)}, Wallet{{p.t0, x}});
                        env.call(p.c1, "swap", {Value::integer(0)}, Wallet{{p.t1, env.balance(p.t1)}});
                        env.call(p.lp, "repay", {}, Wallet{{p.t0, x}});
                        env.require(env.balance(p.t0) > 0, "#t0>0");
                        env.send(env.sender(), p.t0, env.balance(p.t0));
                        return Value();
                    },
                    AttachSpec::none(), {amount_param("x")}));
        return c;
    };
    return e;
}

CatalogEntry flash_loan_arbitrage() {
    CatalogEntry e;
    e.name = "flash_loan_arbitrage";
    e.summary = "flash-borrow, swap round-trip across two pools, repay loan plus fee";
    e.constructor_schema = {{"c0", ArgKind::contract, false, "pool sold into first"},
                            {"c1", ArgKind::contract, false, "pool sold into second"},
                            {"lp", ArgKind::contract, false, "lending pool over t0"},
                            {"fee", ArgKind::integer, true, "fee the pool charges per flash loan (default 0)"}};
    e.make = [](const std::vector<Value>& a, const BlockchainState& pre) {
        ArbitrageParts p = arbitrage_parts(a, pre);
        const Amount fee = arg_at(a, 3).is_null() ? Amount(0) : arg_at(a, 3).as_int();
        auto c = std::make_shared<ContractCode>();
        c->name = "flash_loan_arbitrage";
        c->constructor = arbitrage_constructor(p);
        arbitrage_metadata(*c, p, {"flashLoan"});
        add(*c, method(
                    "arbitrage",
                    [p, fee](MethodEnv& env) {
                        const Amount& x = env.arg(0).as_int();
                        if (!env.arg(1).is_null()) env.require(env.arg(1).as_token() == p.t0, "t0 matches");
                        env.call(p.lp, "flashLoan", {Value::integer(x)});
                        env.call(p.c0, "swap", {Value::integer(0)}, Wallet{{p.t0, x}});
                        env.call(p.c1, "swap", {Value::integer(0)}, Wallet{{p.t1, env.balance(p.t1)}});
                        env.send(p.lp, p.t0, x + fee);
                        env.send(env.sender(), p.t0, env.balance(p.t0));
                        return Value();
                    },
                    AttachSpec::none(), {amount_param("x")}));
        return c;
    };
    return e;
}

}  // namespace mevni::catalog
