#include "mevni/golden.hpp"

#include <algorithm>

#include "mevni/scenario.hpp"

namespace mevni {

bool GoldenReport::all_ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const GoldenCheck& c) { return c.ok; });
}

namespace {

std::set<AccountId> ids(std::initializer_list<const char*> ns) {
    std::set<AccountId> out;
    for (const char* n : ns) out.insert(AccountId::contract(n));
    return out;
}

class Checker {
public:
    explicit Checker(GoldenReport& r) : r_(r) {}

    void value(const std::string& sc, const std::string& what, const Rational& expected, const Rational& actual) {
        r_.checks.push_back({sc, what, to_string(expected), to_string(actual), expected == actual});
    }
    void text(const std::string& sc, const std::string& what, const std::string& expected, const std::string& actual) {
        r_.checks.push_back({sc, what, expected, actual, expected == actual});
    }
    void verdict(const std::string& sc, const std::string& what, Holds expected, const Verdict& v) {
        std::string actual = to_string(v.holds);
        if (v.lhs && v.rhs) actual += " (" + to_string(v.lhs->value) + " vs " + to_string(v.rhs->value) + ")";
        r_.checks.push_back({sc, what, to_string(expected), actual, v.holds == expected});
    }

private:
    GoldenReport& r_;
};

}  // namespace

GoldenReport run_examples(const std::string& dir, const SearchBudget& budget) {
    GoldenReport report;
    Checker check(report);
    auto load = [&](const std::string& n) { return load_scenario(resolve_scenario(n, dir)); };
    AnalysisOptions values;
    values.compute_values = true;

    {
        Scenario s = load("ex1");
        MevResult u = lmev(s.state, ids({"AMM2"}), Restriction::all(), s.prices, budget);
        MevResult r = lmev(s.state, ids({"AMM2"}), Restriction::only(ids({"AMM2"})), s.prices, budget);
        check.value("ex1", "lmev {AMM2}, any contract", 1, u.value);
        check.value("ex1", "lmev {AMM2}, only AMM2", 0, r.value);
        check.text("ex1", "witness", "M:AMM1.swap(?3:T0,0); M:AMM2.swap(?2:T1,0)", to_string(u.witness));
    }
    {
        Scenario s = load("ex2");
        Verdict v = nonint(s.state, s.delta(), s.prices, budget, values);
        check.verdict("ex2", "nonint", Holds::holds, v);
        check.value("ex2", "lmev of the airdrop, any contract", 5, v.lhs->value);
        check.value("ex2", "lmev of the airdrop, only the airdrop", 5, v.rhs->value);
        EpsilonResult e = epsilon_composable(s.context, s.state, 0, s.prices, budget);
        check.text("ex2", "0-composable", "violated", to_string(e.holds));
    }
    {
        Scenario s = load("ex3");
        Verdict v = nonint(s.state, s.delta(), s.prices, budget);
        check.verdict("ex3", "nonint", Holds::violated, v);
        check.value("ex3", "unrestricted lmev of Bet", 10, v.lhs_value().value_or(-1));
        check.value("ex3", "restricted lmev of Bet", 0, v.rhs_value().value_or(-1));
        ExecResult replay = execute_trace(s.state, v.witness);
        check.value("ex3", "ETH held by M after the witness", 320,
                    Rational(replay.state.wallet_of(AccountId::user("M")).balance(Token{"ETH"})));
    }
    {
        // 10 ETH leave the exchange and 1 T arrives, so the loss is 10 p(ETH) - p(T).
        Scenario s = load("ex4");
        Verdict v = nonint(s.state, s.delta(), s.prices, budget);
        check.verdict("ex4", "nonint", Holds::violated, v);
        check.value("ex4", "unrestricted lmev of Exchange", 9, v.lhs_value().value_or(-1));
        check.value("ex4", "restricted lmev of Exchange", 0, v.rhs_value().value_or(-1));
    }
    {
        Scenario s = load("ex6");
        check.value("ex6", "global MEV of S", 1, global_mev(s.context, s.prices, budget).value);
        check.value("ex6", "global MEV of S|D", 1, global_mev(s.state, s.prices, budget).value);
        check.text("ex6", "0-composable", "holds", to_string(epsilon_composable(s.context, s.state, 0, s.prices, budget).holds));
        Verdict v = nonint(s.state, s.delta(), s.prices, budget);
        check.verdict("ex6", "nonint", Holds::violated, v);
        check.value("ex6", "unrestricted lmev of C2", 1, v.lhs_value().value_or(-1));
        check.value("ex6", "restricted lmev of C2", 0, v.rhs_value().value_or(-1));
    }
    {
        Scenario s = load("exB1");
        check.value("exB1", "lmev {C2}", 99, lmev(s.state, ids({"C2"}), Restriction::all(), s.prices, budget).value);
        check.value("exB1", "lmev {C1,C2}", 95, lmev(s.state, ids({"C1", "C2"}), Restriction::all(), s.prices, budget).value);
    }
    {
        Scenario s = load("exB4");
        check.value("exB4", "global MEV of S", 0, global_mev(s.context, s.prices, budget).value);
        check.value("exB4", "global MEV of S|D", 1, global_mev(s.state, s.prices, budget).value);
        check.value("exB4", "lmev of Exchange2", 0, lmev(s.state, s.delta(), Restriction::all(), s.prices, budget).value);
        Verdict v = nonint(s.state, s.delta(), s.prices, budget);
        check.verdict("exB4", "nonint", Holds::holds, v);
        check.text("exB4", "nonint justification", "zero-mev", to_string(v.justification));
    }
    {
        Scenario s = load("exB5");
        check.verdict("exB5", "nonint at the empty wallet", Holds::holds, nonint(s.state, s.delta(), s.prices, budget));
        Verdict r = richnonint(s.state, s.delta(), s.prices, budget);
        check.verdict("exB5", "richnonint", Holds::violated, r);
        check.value("exB5", "unrestricted rlmev of D", 100, r.lhs_value().value_or(-1));
        check.value("exB5", "restricted rlmev of D", 0, r.rhs_value().value_or(-1));
    }
    {
        Scenario s = load("exB8");
        Verdict both = richnonint(s.state, s.delta(), s.prices, budget);
        check.verdict("exB8", "richnonint(Var, Drop1|Drop2)", Holds::violated, both);
        check.value("exB8", "unrestricted rlmev of Drop1|Drop2", 4, both.lhs_value().value_or(-1));
        check.value("exB8", "restricted rlmev of Drop1|Drop2", 3, both.rhs_value().value_or(-1));
        for (const char* drop : {"Drop1", "Drop2"}) {
            std::vector<Deployment> ds;
            for (const auto& d : s.deployments)
                if (d.id.name == "Var" || d.id.name == drop) ds.push_back(d);
            Verdict one = richnonint(build_state(s, ds), ids({drop}), s.prices, budget, values);
            check.verdict("exB8", std::string("richnonint(Var, ") + drop + ")", Holds::holds, one);
            check.value("exB8", std::string("rlmev of ") + drop, 3, one.lhs_value().value_or(-1));
        }
    }
    return report;
}

std::vector<Table2Row> run_table2(const std::string& dir, const SearchBudget& budget) {
    struct Expect {
        const char* context;
        const char* fresh;
        bool holds;
        int cond;
    };
    const Expect expect[] = {
        {"AMM", "AMM", true, 2},
        {"AMM", "Bet over AMM", false, 0},
        {"Exchange", "Bet over Exchange", true, 3},
        {"AMM1 | AMM2", "BestSwap", true, 1},
        {"AMM1 | AMM2", "SwapRouter", true, 1},
        {"AMM1 | AMM2 | SwapRouter1 | AMM3 | AMM4 | SwapRouter2", "BestSwap over the routers", true, 1},
        {"AMM1 | AMM2 | LP", "LPArbitrage", true, 1},
        {"AMM1 | AMM2 | LP", "FlashLoanArbitrage", true, 1},
    };
    std::vector<Table2Row> rows;
    for (int i = 0; i < 8; ++i) {
        Table2Row row;
        row.row = i + 1;
        row.scenario = "table2_row" + std::to_string(i + 1);
        row.context = expect[i].context;
        row.fresh = expect[i].fresh;
        row.expect_holds = expect[i].holds;
        row.expect_condition = expect[i].cond;
        Scenario s = load_scenario(resolve_scenario(row.scenario, dir));
        row.verdict = richnonint(s.state, s.delta(), s.prices, budget);
        if (row.expect_holds)
            row.ok = row.verdict.holds == Holds::holds && condition_number(row.verdict.justification) == row.expect_condition;
        else
            row.ok = row.verdict.holds == Holds::violated;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace mevni
