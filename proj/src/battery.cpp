#include <algorithm>
#include <functional>

#include "mevni/analysis.hpp"
#include "mevni/scenario.hpp"

namespace mevni {

namespace {

// Rebuilds states from one scenario's deployments in any order, plus extras.
class Family {
public:
    Family(const std::string& dir, const std::string& name) : sc_(load_scenario(resolve_scenario(name, dir))) {}

    const Deployment& dep(const std::string& name) const {
        for (const auto& d : sc_.deployments)
            if (d.id.name == name) return d;
        throw std::invalid_argument(sc_.name + " has no contract " + name);
    }

    BlockchainState build(const std::vector<Deployment>& ds) const { return build_state(sc_, ds); }
    BlockchainState build(const std::vector<std::string>& names) const {
        std::vector<Deployment> ds;
        for (const auto& n : names) ds.push_back(dep(n));
        return build(ds);
    }

    const PriceMap& prices() const { return sc_.prices; }

private:
    Scenario sc_;
};

Deployment extra(std::string catalog, std::string name, std::vector<std::pair<std::string, Value>> args,
                 Wallet fund = {}, AccountId by = default_adversary()) {
    Deployment d;
    d.catalog = std::move(catalog);
    d.id = AccountId::contract(std::move(name));
    d.args = std::move(args);
    d.fund = std::move(fund);
    d.deployer = std::move(by);
    return d;
}

Value tok(const std::string& s) { return Value::token(Token{s}); }
Value ref(const std::string& s) { return Value::account(AccountId::contract(s)); }
std::set<AccountId> ids(std::initializer_list<const char*> ns) {
    std::set<AccountId> out;
    for (const char* n : ns) out.insert(AccountId::contract(n));
    return out;
}

std::string show(const Verdict& v) {
    std::string s = to_string(v.holds);
    if (v.lhs && v.rhs) s += " (" + to_string(v.lhs->value) + " vs " + to_string(v.rhs->value) + ")";
    return s;
}

bool agnostic(const BlockchainState& s, const std::set<AccountId>& cs) {
    for (const auto& c : cs)
        if (!s.contract(c)->code->sender_agnostic) return false;
    return true;
}

}  // namespace

BatteryReport structural_battery(const std::string& dir, const SearchBudget& budget) {
    BatteryReport report;
    AnalysisOptions values;
    values.compute_values = true;

    auto rich = [&](const BlockchainState& s, const std::set<AccountId>& d, const PriceMap& p) {
        return richnonint(s, d, p, budget, values);
    };

    // Positive rows: whenever the hypothesis is established, the thesis must be too.
    auto implication = [&](std::string property, std::string instance, const Verdict& hyp, bool side_condition,
                           const std::function<Verdict()>& thesis) {
        BatteryRow row{std::move(property), std::move(instance), true, false, ""};
        if (hyp.holds != Holds::holds || !side_condition) {
            row.detail = "hypothesis not established: " + show(hyp);
        } else {
            Verdict t = thesis();
            row.ok = t.holds == Holds::holds;
            row.detail = "hypothesis " + show(hyp) + ", thesis " + show(t);
        }
        report.rows.push_back(std::move(row));
    };

    // Negative rows: the hypotheses hold and the thesis is refuted with a certified gap.
    auto refutation = [&](std::string property, std::string instance, const std::vector<Verdict>& hyps,
                          const Verdict& thesis) {
        BatteryRow row{std::move(property), std::move(instance), false, false, ""};
        bool hyps_hold = std::all_of(hyps.begin(), hyps.end(), [](const Verdict& v) { return v.holds == Holds::holds; });
        row.ok = hyps_hold && thesis.holds == Holds::violated && thesis.certified;
        for (const auto& h : hyps) row.detail += "hypothesis " + show(h) + ", ";
        row.detail += "thesis " + show(thesis);
        report.rows.push_back(std::move(row));
    };

    Family row1(dir, "table2_row1");
    Family row3(dir, "table2_row3");
    Family b6(dir, "exB6");
    Family b7(dir, "exB7");
    Family b8(dir, "exB8");

    const auto amm2 = ids({"AMM2"});
    const auto bet = ids({"Bet"});
    const auto c_fwd = ids({"C", "ForwardX"});
    const auto drop1 = ids({"Drop1"});

    // Context extended on the right by contracts the adversary deploys.
    {
        const std::string p = "context extended by adversary contracts";
        auto adv_amm = extra("amm", "AMM3", {{"t0", tok("T0")}, {"t1", tok("T1")}}, Wallet{{Token{"T0"}, 5}, {Token{"T1"}, 5}});
        auto adv_best = extra("best_swap", "BestSwapA", {{"c0", ref("AMM1")}, {"c1", ref("AMM3")}});
        BlockchainState base = row1.build(std::vector<std::string>{"AMM1", "AMM2"});
        implication(p, "table2_row1 + AMM3, BestSwapA", rich(base, amm2, row1.prices()), agnostic(base, deps(amm2, base)), [&] {
            return rich(row1.build({row1.dep("AMM1"), adv_amm, adv_best, row1.dep("AMM2")}), amm2, row1.prices());
        });

        auto adv_pool = extra("amm", "AMMA", {{"t0", tok("ETH")}, {"t1", tok("T")}}, Wallet{{Token{"ETH"}, 50}, {Token{"T"}, 50}});
        BlockchainState base3 = row3.build(std::vector<std::string>{"Exchange", "Bet"});
        implication(p, "table2_row3 + AMMA", rich(base3, bet, row3.prices()), agnostic(base3, deps(bet, base3)), [&] {
            return rich(row3.build({row3.dep("Exchange"), adv_pool, row3.dep("Bet")}), bet, row3.prices());
        });

        auto fwd2 = extra("register_forward", "ForwardX2", {{"reg", ref("X")}});
        BlockchainState base7 = b7.build(std::vector<std::string>{"X", "C", "ForwardX"});
        implication(p, "exB7 + ForwardX2", rich(base7, c_fwd, b7.prices()), agnostic(base7, deps(c_fwd, base7)), [&] {
            return rich(b7.build({b7.dep("X"), fwd2, b7.dep("C"), b7.dep("ForwardX")}), c_fwd, b7.prices());
        });
    }

    // Context extended on the left.
    const auto amm0 = extra("amm", "AMM0", {{"t0", tok("T0")}, {"t1", tok("T1")}}, Wallet{{Token{"T0"}, 3}, {Token{"T1"}, 7}}, AccountId::user("deployer"));
    const auto pool0 = extra("amm", "AMM0", {{"t0", tok("ETH")}, {"t1", tok("T")}}, Wallet{{Token{"ETH"}, 50}, {Token{"T"}, 50}}, AccountId::user("deployer"));
    const auto reg_y = extra("register", "Y", {}, {}, AccountId::user("deployer"));
    {
        const std::string p = "context extended on the left";
        implication(p, "table2_row1 with AMM0 first", rich(row1.build(std::vector<std::string>{"AMM1", "AMM2"}), amm2, row1.prices()), true,
                    [&] { return rich(row1.build({amm0, row1.dep("AMM1"), row1.dep("AMM2")}), amm2, row1.prices()); });
        implication(p, "table2_row3 with AMM0 first", rich(row3.build(std::vector<std::string>{"Exchange", "Bet"}), bet, row3.prices()), true,
                    [&] { return rich(row3.build({pool0, row3.dep("Exchange"), row3.dep("Bet")}), bet, row3.prices()); });
        implication(p, "exB7 with Y first", rich(b7.build(std::vector<std::string>{"X", "C", "ForwardX"}), c_fwd, b7.prices()), true,
                    [&] { return rich(b7.build({reg_y, b7.dep("X"), b7.dep("C"), b7.dep("ForwardX")}), c_fwd, b7.prices()); });
        implication(p, "exB8 (Var, Drop1) with Y first", rich(b8.build(std::vector<std::string>{"Var", "Drop1"}), drop1, b8.prices()), true,
                    [&] { return rich(b8.build({reg_y, b8.dep("Var"), b8.dep("Drop1")}), drop1, b8.prices()); });
    }

    // Context contracts outside the dependencies erased again.
    {
        const std::string right = "context contracts after it erased";
        const std::string left = "context contracts before it erased";
        auto appended = extra("amm", "AMM9", {{"t0", tok("T0")}, {"t1", tok("T1")}}, Wallet{{Token{"T0"}, 3}, {Token{"T1"}, 7}}, AccountId::user("deployer"));
        BlockchainState with9 = row1.build({row1.dep("AMM1"), appended, row1.dep("AMM2")});
        implication(right, "table2_row1 without AMM9", rich(with9, amm2, row1.prices()), !deps(amm2, with9).count(AccountId::contract("AMM9")),
                    [&] { return rich(row1.build(std::vector<std::string>{"AMM1", "AMM2"}), amm2, row1.prices()); });
        auto y_after = reg_y;
        BlockchainState with_y = b8.build({b8.dep("Var"), y_after, b8.dep("Drop1")});
        implication(right, "exB8 (Var, Drop1) without Y", rich(with_y, drop1, b8.prices()), !deps(drop1, with_y).count(AccountId::contract("Y")),
                    [&] { return rich(b8.build(std::vector<std::string>{"Var", "Drop1"}), drop1, b8.prices()); });

        BlockchainState first0 = row3.build({pool0, row3.dep("Exchange"), row3.dep("Bet")});
        implication(left, "table2_row3 without AMM0", rich(first0, bet, row3.prices()),
                    !deps(ids({"Exchange", "Bet"}), first0).count(AccountId::contract("AMM0")),
                    [&] { return rich(row3.build(std::vector<std::string>{"Exchange", "Bet"}), bet, row3.prices()); });
        BlockchainState first_y = b7.build({reg_y, b7.dep("X"), b7.dep("C"), b7.dep("ForwardX")});
        implication(left, "exB7 without Y", rich(first_y, c_fwd, b7.prices()),
                    !deps(ids({"X", "C", "ForwardX"}), first_y).count(AccountId::contract("Y")),
                    [&] { return rich(b7.build(std::vector<std::string>{"X", "C", "ForwardX"}), c_fwd, b7.prices()); });
    }

    // A fragment with nothing to lose appended to a non-interfering one.
    {
        const std::string p = "zero-MEV fragment appended to the new contracts";
        auto fwd_var = extra("register_forward", "ForwardVar", {{"reg", ref("Var")}}, {}, AccountId::user("deployer"));
        BlockchainState s = b8.build({b8.dep("Var"), b8.dep("Drop1"), fwd_var});
        MevResult z = rlmev(s, ids({"ForwardVar"}), Restriction::all(), b8.prices(), budget);
        implication(p, "exB8 (Var, Drop1) + ForwardVar", rich(b8.build(std::vector<std::string>{"Var", "Drop1"}), drop1, b8.prices()),
                    z.value == 0 && z.exact() && agnostic(s, ids({"Var"})), [&] { return rich(s, ids({"Drop1", "ForwardVar"}), b8.prices()); });

        auto fwd2 = extra("register_forward", "ForwardX2", {{"reg", ref("X")}}, {}, AccountId::user("deployer"));
        BlockchainState s7 = b7.build({b7.dep("X"), b7.dep("C"), b7.dep("ForwardX"), fwd2});
        MevResult z7 = rlmev(s7, ids({"ForwardX2"}), Restriction::all(), b7.prices(), budget);
        implication(p, "exB7 + ForwardX2", rich(b7.build(std::vector<std::string>{"X", "C", "ForwardX"}), c_fwd, b7.prices()),
                    z7.value == 0 && z7.exact() && agnostic(s7, ids({"X"})),
                    [&] { return rich(s7, ids({"C", "ForwardX", "ForwardX2"}), b7.prices()); });
    }

    // Counterexamples.
    {
        BlockchainState x = b6.build(std::vector<std::string>{"X"});
        BlockchainState xc = b6.build(std::vector<std::string>{"X", "C"});
        Verdict empty = rich(x, {}, b6.prices());
        Verdict with_c = rich(xc, ids({"C"}), b6.prices());
        refutation("new contracts extended on the right", "exB6: X vs {} then X vs C", {empty}, with_c);
        refutation("new contracts extended on the left", "exB6: X vs {} then X vs C", {empty}, with_c);

        Verdict c_only = rich(b7.build(std::vector<std::string>{"X", "C"}), ids({"C"}), b7.prices());
        refutation("new contracts shrunk on the right", "exB7: X vs C|ForwardX then X vs C",
                   {rich(b7.build(std::vector<std::string>{"X", "C", "ForwardX"}), c_fwd, b7.prices())}, c_only);
        refutation("new contracts shrunk on the left", "exB7: X vs ForwardX|C then X vs C",
                   {rich(b7.build(std::vector<std::string>{"X", "ForwardX", "C"}), c_fwd, b7.prices())}, c_only);

        Verdict d1 = rich(b8.build(std::vector<std::string>{"Var", "Drop1"}), drop1, b8.prices());
        Verdict d2 = rich(b8.build(std::vector<std::string>{"Var", "Drop2"}), ids({"Drop2"}), b8.prices());
        Verdict d2_after = rich(b8.build(std::vector<std::string>{"Var", "Drop1", "Drop2"}), ids({"Drop2"}), b8.prices());
        Verdict both = rich(b8.build(std::vector<std::string>{"Var", "Drop1", "Drop2"}), ids({"Drop1", "Drop2"}), b8.prices());
        refutation("union of non-interfering fragments", "exB8: Drop1, Drop2 then Drop1|Drop2", {d1, d2}, both);
        refutation("fragments added one at a time", "exB8: Drop1, then Drop2 after Var|Drop1", {d1, d2_after}, both);
    }
    return report;
}

}  // namespace mevni
