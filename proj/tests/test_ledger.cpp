#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mevni/ledger.hpp"
#include "mevni/vm.hpp"
#include "support/common.hpp"

using namespace mevni;
using namespace fixtures;

TEST_SUITE("value") {
    TEST_CASE("rationals with unit denominator become integers") {
        Value v = Value::rational(Rational(6) / 3);
        CHECK(v.is_int());
        CHECK(v == Value::integer(2));
        CHECK(Value::rational(Rational(9) / 4).is_rational());
    }

    TEST_CASE("rational text round trip") {
        CHECK(parse_rational("7") == 7);
        CHECK(parse_rational("-3") == -3);
        CHECK(parse_rational("9/4") == Rational(9) / 4);
        CHECK(to_string(Rational(9) / 4) == "9/4");
        CHECK(to_string(Rational(18) / 2) == "9");
        CHECK_THROWS(parse_rational("nine"));
        CHECK_THROWS(parse_rational("1/0"));
    }

    TEST_CASE("value order is total and by alternative first") {
        CHECK(compare(Value::integer(1), Value::integer(2)) < 0);
        CHECK(compare(Value::integer(2), Value::rational(Rational(5) / 2)) < 0);
        CHECK(compare(Value::null(), Value::boolean(false)) < 0);
        CHECK(compare(Value::token({"A"}), Value::token({"A"})) == 0);
    }

    TEST_CASE("typed accessors reject the wrong alternative") {
        CHECK_THROWS_AS(Value::integer(1).as_token(), TypeError);
        CHECK(Value::integer(3).as_rational() == 3);
    }
}

TEST_SUITE("wallet") {
    TEST_CASE("zero balances are pruned so equality is canonical") {
        Wallet a{{T("X"), 2}, {T("Y"), 0}};
        Wallet b{{T("X"), 2}};
        CHECK(a == b);
        CHECK(a.debit(T("X"), 2));
        CHECK(a.empty());
        CHECK(a == Wallet{});
        CHECK_THROWS_AS(a.credit(T("X"), -1), LedgerError);
    }

    TEST_CASE("debit leaves the wallet alone when short") {
        Wallet w{{T("X"), 2}};
        CHECK_FALSE(w.debit(T("X"), 3));
        CHECK(w.balance(T("X")) == 2);
        CHECK(w.debit(T("X"), 2));
        CHECK(w.empty());
    }

    TEST_CASE("covers and scaled") {
        Wallet w{{T("X"), 2}, {T("Y"), 1}};
        CHECK(w.scaled(3) == Wallet{{T("X"), 6}, {T("Y"), 3}});
        CHECK(w.scaled(3).covers(w));
        CHECK_FALSE(w.covers(w.scaled(3)));
        CHECK(w.covers(Wallet{}));
    }
}

TEST_SUITE("wealth") {
    TEST_CASE("wealth on ex1") {
        Scenario s = load("ex1");
        CHECK(wealth({C("AMM2")}, s.state, s.prices) == 13);
        CHECK(wealth({U("M")}, s.state, s.prices) == 3);
        CHECK(wealth({}, s.state, s.prices) == 0);
        CHECK(wealth({U("nobody")}, s.state, s.prices) == 0);
    }

    TEST_CASE("wealth is additive over disjoint sets") {
        Scenario s = load("ex1");
        Rational parts = wealth({C("AMM1")}, s.state, s.prices) + wealth({C("AMM2"), U("M")}, s.state, s.prices);
        CHECK(parts == wealth({C("AMM1"), C("AMM2"), U("M")}, s.state, s.prices));
    }

    TEST_CASE("prices weigh tokens") {
        PriceMap p{{T("X"), Rational(3) / 2}, {T("Y"), 2}};
        CHECK(wealth_of_wallet(Wallet{{T("X"), 4}, {T("Y"), 1}}, p) == 8);
        CHECK_THROWS_AS(wealth_of_wallet(Wallet{{T("Z"), 1}}, p), LedgerError);
    }

    TEST_CASE("gain along the ex1 and ex3 attacks") {
        Scenario e1 = load("ex1");
        CHECK(gain({C("AMM2")}, e1.state, ex1_attack(), e1.prices) == -1);
        CHECK(gain({C("AMM2")}, e1.state, std::vector<Transaction>{}, e1.prices) == 0);
        Scenario e3 = load("ex3");
        CHECK(gain({C("Bet")}, e3.state, bet_attack(), e3.prices) == -10);
    }

    TEST_CASE("gains over all accounts sum to zero") {
        Scenario s = load("ex3");
        std::set<AccountId> everyone;
        for (const auto& [id, w] : s.state.users) everyone.insert(id);
        for (const auto& id : s.state.contract_ids()) everyone.insert(id);
        CHECK(gain(everyone, s.state, bet_attack(), s.prices) == 0);
    }

    TEST_CASE("token totals survive a valid trace") {
        Scenario s = load("ex3");
        ExecResult r = execute_trace(s.state, bet_attack());
        REQUIRE(r.valid);
        for (const auto& t : s.state.tokens()) CHECK(r.state.total_supply(t) == s.state.total_supply(t));
    }
}

TEST_SUITE("richer") {
    TEST_CASE("pointwise order on user wallets") {
        Scenario s = load("ex1");
        BlockchainState more = s.state;
        more.wallet_mut(U("M")).credit(T("T0"), 1);
        CHECK(richer_than(s.state, s.state));
        CHECK(richer_than(more, s.state));
        CHECK_FALSE(richer_than(s.state, more));

        BlockchainState traded = s.state;
        traded.wallet_mut(U("M")).set(T("T0"), 2);
        traded.wallet_mut(U("M")).credit(T("T1"), 1);
        CHECK_FALSE(richer_than(traded, s.state));
        CHECK_FALSE(richer_than(s.state, traded));
    }

    TEST_CASE("transitive and antisymmetric") {
        Scenario s = load("ex1");
        BlockchainState a = s.state, b = s.state, c = s.state;
        b.wallet_mut(U("M")).credit(T("T1"), 1);
        c.wallet_mut(U("M")).credit(T("T1"), 2);
        CHECK((richer_than(c, b) && richer_than(b, a)));
        CHECK(richer_than(c, a));
        CHECK((richer_than(a, s.state) && richer_than(s.state, a)));
        CHECK(a == s.state);
    }

    TEST_CASE("undefined across different contract parts") {
        Scenario s = load("ex1");
        BlockchainState other = s.state;
        other.contract(C("AMM1"))->state.wallet.credit(T("T0"), 1);
        CHECK_THROWS_AS(richer_than(other, s.state), LedgerError);
    }
}

TEST_SUITE("state") {
    TEST_CASE("contracts_only drops user wallets but keeps the height") {
        Scenario s = load("ex3");
        BlockchainState c = s.state.contracts_only();
        CHECK(c.users.empty());
        CHECK(c.height == s.state.height);
        CHECK(c.same_contracts(s.state));
        CHECK(c.contract_ids() == s.state.contract_ids());
    }

    TEST_CASE("total units count everyone") {
        Scenario s = load("ex1");
        CHECK(s.state.total_units() == 3 + 12 + 13);
    }
}
