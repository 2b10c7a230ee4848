// mevni: MEV search and non-interference checks over scenario files.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mevni/analysis.hpp"
#include "mevni/golden.hpp"
#include "mevni/report.hpp"
#include "mevni/scenario.hpp"

using namespace mevni;

namespace {

enum Exit { exit_holds = 0, exit_violated = 1, exit_unknown = 2, exit_budget = 3, exit_usage = 10, exit_parse = 11, exit_invalid = 12 };

struct Flags {
    int depth = 4;
    int grid = 8;
    bool exhaustive = false;
    std::string ceiling = "10";
    std::size_t state_cap = 2'000'000;
    int threads = 1;
    std::uint64_t seed = 1;
    std::string format = "text";
    std::string scenarios = default_scenario_dir();
    std::string scenario;
    std::vector<std::string> observed;
    std::vector<std::string> restrict_to;
    std::string eps = "0";
    bool values = false;
    bool context = false;
    bool rich = false;
};

struct Options {
    CLI::Option* depth = nullptr;
    CLI::Option* grid = nullptr;
    CLI::Option* ceiling = nullptr;
    CLI::Option* state_cap = nullptr;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

SearchBudget budget_for(const Flags& f, const Options& o, const std::optional<SearchBudget>& from_scenario) {
    SearchBudget b = from_scenario.value_or(SearchBudget{});
    if (!from_scenario || o.depth->count()) b.max_depth = f.depth;
    if (!from_scenario || o.grid->count()) b.grid = f.grid;
    if (f.exhaustive) b.exhaustive = true;
    if (!from_scenario || o.ceiling->count()) b.ceiling = Amount(f.ceiling);
    if (!from_scenario || o.state_cap->count()) b.state_cap = f.state_cap;
    b.threads = f.threads;
    if (b.max_depth < 1 || b.grid < 1) throw UsageError("--depth and --grid must be at least 1");
    return b;
}

std::set<AccountId> contract_names(const std::vector<std::string>& names, const Scenario& sc, const std::string& flag) {
    std::set<AccountId> out;
    for (const auto& n : names) {
        AccountId id = AccountId::contract(n);
        if (!sc.state.contract(id)) throw UsageError(flag + ": no contract named " + n + " in " + sc.name);
        out.insert(id);
    }
    return out;
}

// Observed contracts default to the new fragment, or to everything when the
// scenario has no split.
std::set<AccountId> observed_of(const Flags& f, const Scenario& sc) {
    if (!f.observed.empty()) return contract_names(f.observed, sc, "--observed");
    std::set<AccountId> d = sc.delta();
    return d.empty() ? sc.all_contracts() : d;
}

Restriction restriction_of(const Flags& f, const Scenario& sc) {
    if (f.restrict_to.empty() || (f.restrict_to.size() == 1 && f.restrict_to[0] == "*")) return Restriction::all();
    return Restriction::only(contract_names(f.restrict_to, sc, "--restrict"));
}

Rational parse_eps(const std::string& s) {
    try {
        Rational r = parse_rational(s);
        if (r < 0) throw UsageError("--eps must be non-negative");
        return r;
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("--eps: not a rational: " + s);
    }
}

void emit(const Flags& f, const std::string& command, const json& inputs, const json& result, const std::string& text) {
    if (f.format == "json") {
        json j;
        j["command"] = command;
        j["inputs"] = inputs;
        j["result"] = result;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text;
    }
}

int exit_for(Holds h) { return h == Holds::holds ? exit_holds : h == Holds::violated ? exit_violated : exit_unknown; }
int exit_for(const MevResult& r) { return r.cap_hit || !r.warning.empty() ? exit_budget : 0; }

int run(const std::string& command, const Flags& f, const Options& o) {
    if (command == "table2" || command == "battery" || command == "examples") {
        SearchBudget b = budget_for(f, o, std::nullopt);
        json inputs = {{"scenarios", f.scenarios}, {"seed", f.seed}, {"budget", to_json(b)}};
        if (command == "table2") {
            auto rows = run_table2(f.scenarios, b);
            json j = to_json(rows);
            emit(f, command, inputs, j, render_text(rows));
            return j["ok"].get<bool>() ? 0 : 1;
        }
        if (command == "battery") {
            auto r = structural_battery(f.scenarios, b);
            emit(f, command, inputs, to_json(r), render_text(r));
            return r.all_ok() ? 0 : 1;
        }
        auto r = run_examples(f.scenarios, b);
        emit(f, command, inputs, to_json(r), render_text(r));
        return r.all_ok() ? 0 : 1;
    }

    if (f.scenario.empty()) throw UsageError(command + " needs a scenario");
    Scenario sc = load_scenario(resolve_scenario(f.scenario, f.scenarios));
    SearchBudget b = budget_for(f, o, sc.budget);
    json inputs = {{"scenario", sc.name}, {"seed", f.seed}, {"budget", to_json(b)}};

    if (command == "lmev" || command == "rlmev") {
        std::set<AccountId> obs = observed_of(f, sc);
        Restriction r = restriction_of(f, sc);
        inputs["observed"] = to_json(obs);
        inputs["restriction"] = r.universe ? json("*") : to_json(r.contracts);
        if (command == "lmev") {
            MevResult m = lmev(sc.state, obs, r, sc.prices, b);
            emit(f, command, inputs, to_json(m), render_text(m));
            return exit_for(m);
        }
        RichResult m = rlmev_ladder(sc.state, obs, r, sc.prices, b);
        emit(f, command, inputs, to_json(m), render_text(m));
        return exit_for(m.result);
    }
    if (command == "mev") {
        const BlockchainState& s = f.context ? sc.context : sc.state;
        inputs["state"] = f.context ? "context" : "full";
        MevResult m = global_mev(s, sc.prices, b);
        emit(f, command, inputs, to_json(m), render_text(m));
        return exit_for(m);
    }
    if (command == "nonint" || command == "richnonint") {
        std::set<AccountId> d = sc.delta();
        if (d.empty()) throw UsageError(sc.name + " has no split, so there are no new contracts to check");
        inputs["new"] = to_json(d);
        AnalysisOptions opts;
        opts.compute_values = f.values;
        Verdict v = command == "nonint" ? nonint(sc.state, d, sc.prices, b, opts) : richnonint(sc.state, d, sc.prices, b, opts);
        emit(f, command, inputs, to_json(v), render_text(v));
        return exit_for(v.holds);
    }
    if (command == "epsilon") {
        Rational eps = parse_eps(f.eps);
        inputs["epsilon"] = to_string(eps);
        EpsilonResult e = epsilon_composable(sc.context, sc.state, eps, sc.prices, b);
        emit(f, command, inputs, to_json(e), render_text(e));
        return exit_for(e.holds);
    }
    if (command == "strip-check") {
        StripCheck c;
        if (f.rich) {
            std::set<AccountId> d = sc.delta();
            if (d.empty()) throw UsageError(sc.name + " has no split, so there are no new contracts to check");
            inputs["new"] = to_json(d);
            c = verify_stripping_nonint(sc.state, d, sc.prices, b);
        } else {
            std::set<AccountId> obs = observed_of(f, sc);
            Restriction r = restriction_of(f, sc);
            inputs["observed"] = to_json(obs);
            inputs["restriction"] = r.universe ? json("*") : to_json(r.contracts);
            c = verify_stripping(sc.state, obs, r, sc.prices, b);
        }
        emit(f, command, inputs, to_json(c), render_text(c));
        if (!c.passes) return exit_unknown;
        return *c.passes ? exit_holds : exit_violated;
    }
    throw UsageError("unknown command " + command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MEV search and MEV non-interference checks over DeFi scenarios"};
    app.require_subcommand(1);
    Flags f;
    Options o;

    auto common = [&](CLI::App* sub, bool needs_scenario) {
        if (needs_scenario) sub->add_option("scenario", f.scenario, "scenario file, or a bundled scenario name")->required();
        o.depth = sub->add_option("--depth", f.depth, "longest adversary trace (K)");
        o.grid = sub->add_option("--grid", f.grid, "amount grid resolution (G)");
        sub->add_flag("--exhaustive", f.exhaustive, "enumerate every argument tuple up to the ceiling");
        o.ceiling = sub->add_option("--ceiling", f.ceiling, "largest amount tried in exhaustive mode");
        o.state_cap = sub->add_option("--state-cap", f.state_cap, "bound on distinct states per search");
        sub->add_option("--threads", f.threads, "worker threads for the search")->check(CLI::PositiveNumber);
        sub->add_option("--seed", f.seed, "seed recorded in the report");
        sub->add_option("--format", f.format, "text or json")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--scenarios", f.scenarios, "directory searched for scenario names");
    };
    auto targets = [&](CLI::App* sub) {
        sub->add_option("--observed", f.observed, "observed contracts (default: the new fragment)")->delimiter(',');
        sub->add_option("--restrict", f.restrict_to, "contracts the adversary may call (default: all)")->delimiter(',');
    };

    struct Cmd {
        const char* name;
        const char* help;
        bool scenario;
    };
    const Cmd cmds[] = {
        {"lmev", "local MEV of the observed contracts", true},
        {"mev", "global MEV of the scenario state", true},
        {"rlmev", "local MEV against a wealthy adversary", true},
        {"nonint", "MEV non-interference of the new fragment", true},
        {"richnonint", "MEV non-interference against wealthy adversaries", true},
        {"epsilon", "epsilon-composability of the new fragment", true},
        {"strip-check", "check that state stripping preserves the result", true},
        {"table2", "non-interference of the common DeFi compositions", false},
        {"battery", "structural properties of non-interference", false},
        {"examples", "all worked examples against their known values", false},
    };
    for (const auto& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        common(sub, c.scenario);
        std::string n = c.name;
        if (n == "lmev" || n == "rlmev" || n == "strip-check") targets(sub);
        if (n == "mev") sub->add_flag("--context", f.context, "use the context only (state before the split)");
        if (n == "nonint" || n == "richnonint") sub->add_flag("--values", f.values, "compute both MEV values even when a condition fires");
        if (n == "epsilon") sub->add_option("--eps", f.eps, "non-negative rational")->required();
        if (n == "strip-check") sub->add_flag("--rich", f.rich, "compare richnonint verdicts instead of rlmev values");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        return run(app.get_subcommands().front()->get_name(), f, o);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ScenarioError& e) {
        std::cerr << e.what() << "\n";
        return e.kind == ScenarioError::Kind::validation ? exit_invalid : exit_parse;
    } catch (const WellFormednessError& e) {
        std::cerr << "invalid scenario: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    }
}
