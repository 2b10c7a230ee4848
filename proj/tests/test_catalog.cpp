#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "mevni/catalog.hpp"
#include "mevni/engine.hpp"
#include "support/common.hpp"

using namespace mevni;
using namespace fixtures;

namespace {

Value zero() { return Value::integer(0); }

// Constant-product output as the pool computes it: the input already sits in
// the reserve when the price is taken.
Amount amm_out(const Amount& x, const Amount& rin, const Amount& rout) { return x * rout / (rin + x); }

const char* bet_text = R"(
{"token": "ETH", "price": 1}
{"token": "T", "price": 1}
{"user": "M", "wallet": {"ETH": 5}, "adversary": true}
{"user": "A"}
{"deploy": "amm", "name": "AMM", "args": {"t0": "ETH", "t1": "T"}, "fund": {"ETH": 6, "T": 6}}
{"deploy": "bet", "name": "Bet", "args": {"oracle": "AMM", "token": "T", "rate": "3", "deadline": 1}, "fund": {"ETH": 5}, "by": "A"}
)";

}  // namespace

TEST_SUITE("registry") {
    TEST_CASE("lookup by name") {
        REQUIRE(catalog::find("amm"));
        CHECK(catalog::find("amm")->name == "amm");
        CHECK(catalog::find("no_such_contract") == nullptr);
        std::vector<std::string> names;
        for (const auto& e : catalog::all()) names.push_back(e.name);
        std::sort(names.begin(), names.end());
        CHECK(std::adjacent_find(names.begin(), names.end()) == names.end());
        CHECK(names.size() >= 19);
    }

    TEST_CASE("named arguments map to positions") {
        const catalog::CatalogEntry* e = catalog::find("exchange");
        auto args = catalog::positional_args(*e, {{"rate", Value::integer(2)}, {"tout", Value::token(T("A"))},
                                                  {"tin", Value::token(T("B"))}});
        CHECK(args == std::vector<Value>{Value::token(T("A")), Value::token(T("B")), Value::integer(2)});
        CHECK_THROWS_AS(catalog::positional_args(*e, {{"tout", Value::token(T("A"))}}), std::invalid_argument);
        CHECK_THROWS_AS(catalog::positional_args(*e, {{"bogus", Value::integer(1)}}), std::invalid_argument);
    }

    TEST_CASE("grid amounts") {
        CHECK(catalog::grid_amounts(10, 4) == std::vector<Amount>{1, 2, 5, 7, 10});
        CHECK(catalog::grid_amounts(1, 8) == std::vector<Amount>{1});
        CHECK(catalog::grid_amounts(0, 8).empty());
    }
}

TEST_SUITE("amm") {
    TEST_CASE("swaps follow the constant-product rule") {
        Scenario s = load("ex3");
        ExecResult r = execute(s.state, call("M", "AMM", "swap", {zero()}, pay("ETH", 300)));
        REQUIRE(r.valid);
        CHECK(balance(r.state, U("M"), "T") == 200);
        CHECK(r.state.contract(C("AMM"))->state.wallet == Wallet{{T("ETH"), 900}, {T("T"), 400}});
        CHECK(amm_out(300, 600, 600) == 200);
        CHECK(amm_out(3, 6, 6) == 2);
    }

    TEST_CASE("ex1 keeps both products at 36") {
        Scenario s = load("ex1");
        auto product = [](const BlockchainState& st, const char* c, const char* a, const char* b) {
            return balance(st, C(c), a) * balance(st, C(c), b);
        };
        CHECK(product(s.state, "AMM1", "T0", "T1") == 36);
        ExecResult one = execute(s.state, ex1_attack()[0]);
        CHECK(product(one.state, "AMM1", "T0", "T1") == 36);
        ExecResult two = execute_trace(s.state, ex1_attack());
        CHECK(product(two.state, "AMM2", "T1", "T2") == 36);
    }

    TEST_CASE("a minimum above the output aborts") {
        Scenario s = load("ex1");
        CHECK_FALSE(execute(s.state, call("M", "AMM1", "swap", {Value::integer(3)}, pay("T0", 3))).valid);
        CHECK(execute(s.state, call("M", "AMM1", "swap", {Value::integer(2)}, pay("T0", 3))).valid);
    }

    TEST_CASE("a token outside the pair aborts") {
        Scenario s = load("ex1");
        BlockchainState st = s.state;
        st.wallet_mut(U("M")).credit(T("T2"), 3);
        CHECK_FALSE(execute(st, call("M", "AMM1", "swap", {zero()}, pay("T2", 3))).valid);
    }

    TEST_CASE("draining the whole output reserve is refused") {
        Scenario s = load("ex1");
        BlockchainState st = s.state;
        st.wallet_mut(U("M")).credit(T("T0"), 1000);
        // 1000*6/1006 rounds down to 5, so this one is fine; the pool can never pay out all 6.
        CHECK(execute(st, call("M", "AMM1", "swap", {zero()}, pay("T0", 1000))).valid);
        CHECK(amm_out(1000, 6, 6) < 6);
    }

    TEST_CASE("liquidity must keep the ratio") {
        Scenario s = load("ex1");
        BlockchainState st = s.state;
        st.wallet_mut(U("M")).credit(T("T1"), 5);
        CHECK(execute(st, call("M", "AMM1", "addLiq", {}, Wallet{{T("T0"), 2}, {T("T1"), 2}})).valid);
        CHECK_FALSE(execute(st, call("M", "AMM1", "addLiq", {}, Wallet{{T("T0"), 2}, {T("T1"), 1}})).valid);
    }

    TEST_CASE("getRate is an exact ratio of reserves") {
        Scenario s = load("ex3");
        ExecResult r = execute(s.state, call("M", "AMM", "swap", {zero()}, pay("ETH", 300)));
        CallOutcome q = invoke_as(r.state, U("M"), U("M"), C("AMM"), "getRate", {Value::token(T("ETH"))}, {});
        CHECK(q.observation.return_value == Value::rational(Rational(900) / 400));
    }
}

TEST_SUITE("airdrop and exchange") {
    TEST_CASE("withdraw hands over everything") {
        Scenario s = load("ex2");
        ExecResult r = execute(s.state, call("M", "Airdrop", "withdraw"));
        REQUIRE(r.valid);
        CHECK(balance(r.state, U("M"), "T") == 5);
        CHECK(r.state.contract(C("Airdrop"))->state.wallet.empty());
    }

    TEST_CASE("exchange pays rate units per unit") {
        Scenario s = load("ex4");
        std::vector<Transaction> trace = {call("M", "Airdrop", "withdraw"), call("M", "Exchange", "swap", {}, pay("T", 1))};
        ExecResult r = execute_trace(s.state, trace);
        REQUIRE(r.valid);
        CHECK(balance(r.state, U("M"), "ETH") == 10);
        CHECK(r.state.contract(C("Exchange"))->state.wallet == Wallet{{T("T"), 1}});
    }

    TEST_CASE("exchange refuses the wrong token and short reserves") {
        Scenario s = load("ex4");
        BlockchainState st = s.state;
        st.wallet_mut(U("M")).credit(T("ETH"), 1);
        st.wallet_mut(U("M")).credit(T("T"), 2);
        CHECK_FALSE(execute(st, call("M", "Exchange", "swap", {}, pay("ETH", 1))).valid);
        CHECK_FALSE(execute(st, call("M", "Exchange", "swap", {}, pay("T", 2))).valid);
    }

    TEST_CASE("only the owner sets the rate") {
        Scenario s = load("ex4");
        CHECK_FALSE(execute(s.state, call("M", "Exchange", "setRate", {Value::integer(1)})).valid);
        ExecResult r = execute(s.state, call("B", "Exchange", "setRate", {Value::integer(1)}));
        CHECK(r.valid);
        CHECK(r.state.contract(C("Exchange"))->state.store.get("rate") == Value::integer(1));
    }
}

TEST_SUITE("bet") {
    TEST_CASE("the ex3 attack empties the pot") {
        Scenario s = load("ex3");
        ExecResult r = execute_trace(s.state, bet_attack());
        REQUIRE(r.valid);
        CHECK(r.state.contract(C("Bet"))->state.wallet.empty());
    }

    TEST_CASE("one player, then the owner closes after the deadline") {
        Scenario s = parse_scenario(bet_text, "bet");
        BlockchainState st = s.state;
        ExecResult placed = execute(st, call("M", "Bet", "bet", {}, pay("ETH", 5)));
        REQUIRE(placed.valid);
        BlockchainState rich = placed.state;
        rich.wallet_mut(U("A")).credit(T("ETH"), 10);
        CHECK_FALSE(execute(rich, call("A", "Bet", "bet", {}, pay("ETH", 10))).valid);
        // Rate 1 is below the threshold of 3.
        CHECK_FALSE(execute(placed.state, call("M", "Bet", "win")).valid);
        // Height 1 is still within the deadline.
        CHECK_FALSE(execute(placed.state, call("A", "Bet", "close")).valid);
        ExecResult later = execute(placed.state, call("M", "Bet", "win"));
        REQUIRE(later.state.height == 2);
        CHECK_FALSE(execute(later.state, call("M", "Bet", "close")).valid);
        ExecResult closed = execute(later.state, call("A", "Bet", "close"));
        REQUIRE(closed.valid);
        CHECK(balance(closed.state, U("A"), "ETH") == 10);
    }

    TEST_CASE("the pot must be matched exactly") {
        Scenario s = parse_scenario(bet_text, "bet");
        CHECK_FALSE(execute(s.state, call("M", "Bet", "bet", {}, pay("ETH", 4))).valid);
    }
}

TEST_SUITE("wrappers") {
    TEST_CASE("BestSwap picks the better pool and keeps nothing") {
        Scenario s = load("table2_row4");
        BlockchainState st = s.state;
        st.wallet_mut(U("M")).credit(T("T0"), 3);
        Amount via1 = amm_out(3, 6, 6), via2 = amm_out(3, 4, 9);
        CHECK(via2 > via1);
        ExecResult r = execute(st, call("M", "BestSwap", "swap", {zero()}, pay("T0", 3)));
        REQUIRE(r.valid);
        CHECK(balance(r.state, U("M"), "T1") == std::max(via1, via2));
        CHECK(r.state.contract(C("BestSwap"))->state.wallet.empty());
        CHECK(balance(r.state, C("AMM1"), "T0") == 6);
    }

    TEST_CASE("SwapRouter chains both pools") {
        Scenario s = load("table2_row5");
        BlockchainState st = s.state;
        st.wallet_mut(U("M")).credit(T("T0"), 3);
        Amount mid = amm_out(3, 6, 6);
        Amount out = amm_out(mid, 4, 9);
        ExecResult r = execute(st, call("M", "SwapRouter", "swap", {zero()}, pay("T0", 3)));
        REQUIRE(r.valid);
        CHECK(balance(r.state, U("M"), "T2") == out);
        CHECK(r.state.contract(C("SwapRouter"))->state.wallet.empty());

        ExecResult back = execute(r.state, call("M", "SwapRouter", "swap", {zero()}, pay("T2", out.convert_to<long long>())));
        REQUIRE(back.valid);
        CHECK(balance(back.state, U("M"), "T0") > 0);
        CHECK(back.state.contract(C("SwapRouter"))->state.wallet.empty());
    }

    TEST_CASE("flash-loan arbitrage matches a hand-computed best trade") {
        Scenario s = load("table2_row8");
        Amount best = 0;
        for (long long x = 1; x <= 10; ++x) {
            Amount y = amm_out(x, 6, 12);
            Amount z = amm_out(y, 6, 12);
            bool expect_valid = y > 0 && z >= x;
            ExecResult r = execute(s.state, call("M", "FlashLoanArbitrage", "arbitrage", {Value::integer(x)}));
            CAPTURE(x);
            CHECK(r.valid == expect_valid);
            if (!expect_valid) continue;
            CHECK(balance(r.state, U("M"), "T0") == z - x);
            CHECK(r.state.contract(C("FlashLoanArbitrage"))->state.wallet.empty());
            CHECK(balance(r.state, C("LP"), "T0") == 10);
            best = std::max(best, Amount(z - x));
        }
        CHECK(best == 2);
        SearchBudget b;
        b.max_depth = 1;
        b.exhaustive = true;
        b.ceiling = 10;
        CHECK(global_mev(s.state, s.prices, b).value == Rational(best));
    }

    TEST_CASE("no gap between the pools, nothing to arbitrage") {
        const char* text = R"(
{"token": "T0", "price": 1}
{"token": "T1", "price": 1}
{"user": "M", "adversary": true}
{"user": "O"}
{"oracle": "O"}
{"deploy": "amm", "name": "AMM1", "args": {"t0": "T0", "t1": "T1"}, "fund": {"T0": 6, "T1": 6}}
{"deploy": "amm", "name": "AMM2", "args": {"t0": "T0", "t1": "T1"}, "fund": {"T0": 6, "T1": 6}}
{"deploy": "lending_pool", "name": "LP", "args": {"cmin": "3/2", "rliq": "11/10", "imul": "11/10", "token": "T0"}, "fund": {"T0": 10}}
{"deploy": "flash_loan_arbitrage", "name": "FLA", "args": {"c0": "AMM1", "c1": "AMM2", "lp": "LP"}}
)";
        Scenario s = parse_scenario(text, "flat");
        for (long long x = 1; x <= 10; ++x) {
            CAPTURE(x);
            ExecResult r = execute(s.state, call("M", "FLA", "arbitrage", {Value::integer(x)}));
            if (r.valid) CHECK(balance(r.state, U("M"), "T0") == 0);
        }
    }

    TEST_CASE("borrowing without collateral is refused") {
        Scenario s = load("table2_row7");
        CHECK_FALSE(execute(s.state, call("M", "LP", "borrow", {Value::integer(1)})).valid);
        CHECK_FALSE(execute(s.state, call("M", "LPArbitrage", "arbitrage", {Value::integer(2)})).valid);
    }

    TEST_CASE("collateral unlocks a loan and repayment clears it") {
        Scenario s = load("table2_row7");
        BlockchainState st = s.state;
        st.wallet_mut(U("M")).credit(T("T0"), 6);
        std::vector<Transaction> trace = {call("M", "LP", "deposit", {}, pay("T0", 6)),
                                          call("M", "LP", "borrow", {Value::integer(2)}),
                                          call("M", "LP", "repay", {}, pay("T0", 2))};
        ExecResult r = execute_trace(st, trace);
        REQUIRE(r.valid);
        CHECK(balance(r.state, U("M"), "T0") == 0);
        CHECK(balance(r.state, C("LP"), "T0") == 16);
        ExecResult accrued = execute(st, call("O", "LP", "accrue"));
        REQUIRE(accrued.valid);
        CHECK(accrued.state.contract(C("LP"))->state.store.get("Ir") == Value::rational(Rational(11) / 10));
        CHECK_FALSE(execute(st, call("M", "LP", "accrue")).valid);
    }
}

TEST_SUITE("small contracts") {
    TEST_CASE("latch: f1 and f2 exclude each other") {
        Scenario s = load("ex6");
        ExecResult a = execute_trace(s.state, {call("M", "C1", "f1"), call("M", "C1", "f2")});
        CHECK_FALSE(a.valid);
        ExecResult b = execute_trace(s.state, {call("M", "C1", "f2"), call("M", "C2", "g")});
        REQUIRE(b.valid);
        CHECK(balance(b.state, U("M"), "T") == 1);
        CHECK_FALSE(execute(s.state, call("M", "C2", "g")).valid);
    }

    TEST_CASE("no trace takes from both latch contracts") {
        Scenario s = load("ex6");
        SearchBudget b;
        b.exhaustive = true;
        b.ceiling = 2;
        MevResult r = lmev(s.state, contracts({"C1", "C2"}), Restriction::all(), s.prices, b);
        CHECK(r.value == 1);
        CHECK(r.complete);
    }

    TEST_CASE("drop3 pays 3 once and locks the register") {
        Scenario s = load("exB8");
        ExecResult r = execute(s.state, call("M", "Drop1", "drop3"));
        REQUIRE(r.valid);
        CHECK(balance(r.state, U("M"), "T") == 3);
        CHECK(r.state.contract(C("Var"))->state.store.get("x") == Value::integer(2));
        CHECK_FALSE(execute(r.state, call("M", "Drop1", "drop3")).valid);
        CHECK_FALSE(execute(r.state, call("M", "Drop2", "drop3")).valid);
        CHECK_FALSE(execute(r.state, call("M", "Drop2", "drop2")).valid);
    }

    TEST_CASE("a once_register keeps its first nonzero value") {
        Scenario s = load("exB8");
        ExecResult r = execute_trace(s.state, {call("M", "Var", "set", {Value::integer(1)}),
                                               call("M", "Var", "set", {Value::integer(2)})});
        REQUIRE(r.valid);
        CHECK(r.state.contract(C("Var"))->state.store.get("x") == Value::integer(1));
    }

    TEST_CASE("the exB1 chain turns nothing into 100 T2") {
        Scenario s = load("exB1");
        ExecResult r = execute_trace(s.state, {call("M", "C0", "f"), call("M", "C1", "f", {}, pay("T0", 5)),
                                               call("M", "C2", "f", {}, pay("T1", 1))});
        REQUIRE(r.valid);
        CHECK(r.state.wallet_of(U("M")) == Wallet{{T("T2"), 100}});
    }

    TEST_CASE("register gate pays once the register holds the expected value") {
        Scenario s = load("exB6");
        CHECK_FALSE(execute(s.state, call("M", "C", "f")).valid);
        ExecResult r = execute_trace(s.state, {call("M", "X", "set", {Value::integer(1)}), call("M", "C", "f")});
        REQUIRE(r.valid);
        CHECK(balance(r.state, U("M"), "T") == 1);
    }

    TEST_CASE("paid flag needs exactly one unit") {
        Scenario s = load("exB5");
        BlockchainState st = s.state;
        st.wallet_mut(U("M")).credit(T("T"), 2);
        CHECK_FALSE(execute(st, call("M", "C", "set", {}, pay("T", 2))).valid);
        ExecResult r = execute_trace(st, {call("M", "C", "set", {}, pay("T", 1)), call("M", "D", "f")});
        REQUIRE(r.valid);
        CHECK(balance(r.state, U("M"), "ETH") == 100);
    }
}

TEST_SUITE("generators") {
    TEST_CASE("every move targets its own contract from the adversary") {
        for (const char* name : {"ex1", "ex3", "exB5", "exB8", "table2_row6", "table2_row7", "table2_row8"}) {
            Scenario s = load(name);
            for (const auto& c : s.state.contracts) {
                if (!c.code->move_generator) continue;
                MoveSet ms = c.code->move_generator(s.state, c.id, U("M"), MoveOptions{8});
                for (const auto& tx : ms.txs) {
                    CHECK(tx.callee == c.id);
                    CHECK(tx.origin == U("M"));
                }
            }
        }
    }

    TEST_CASE("ex1 witness moves are generated") {
        Scenario s = load("ex1");
        MoveSet m = adversary_moves(s.state, Restriction::all(), SearchBudget{});
        auto has = [&](const Transaction& t) { return std::find(m.txs.begin(), m.txs.end(), t) != m.txs.end(); };
        CHECK(has(ex1_attack()[0]));
        ExecResult one = execute(s.state, ex1_attack()[0]);
        MoveSet m2 = adversary_moves(one.state, Restriction::all(), SearchBudget{});
        CHECK(std::find(m2.txs.begin(), m2.txs.end(), ex1_attack()[1]) != m2.txs.end());
    }

    TEST_CASE("ex3 attack moves are generated") {
        Scenario s = load("ex3");
        BlockchainState st = s.state;
        for (const auto& tx : bet_attack()) {
            MoveSet m = adversary_moves(st, Restriction::all(), SearchBudget{});
            CHECK(std::find(m.txs.begin(), m.txs.end(), tx) != m.txs.end());
            st = execute(st, tx).state;
        }
    }
}
