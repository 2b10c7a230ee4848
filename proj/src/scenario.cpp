#include "mevni/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mevni/catalog.hpp"

namespace mevni {

using json = nlohmann::json;

namespace {

std::string render(ScenarioError::Kind kind, const std::string& file, int line, int column, const std::string& msg) {
    const char* what = kind == ScenarioError::Kind::parse ? "parse error" : kind == ScenarioError::Kind::io ? "error" : "invalid scenario";
    std::string loc = file;
    if (line > 0) loc += ":" + std::to_string(line);
    if (column > 0) loc += ":" + std::to_string(column);
    return loc + ": " + what + ": " + msg;
}

}  // namespace

ScenarioError::ScenarioError(Kind kind, std::string file, int line, int column, const std::string& message)
    : std::runtime_error(render(kind, file, line, column, message)),
      kind(kind),
      file(std::move(file)),
      line(line),
      column(column),
      message(message) {}

std::set<AccountId> Scenario::gamma() const {
    std::set<AccountId> out;
    for (std::size_t i = 0; i < split && i < deployments.size(); ++i) out.insert(deployments[i].id);
    return out;
}

std::set<AccountId> Scenario::delta() const {
    std::set<AccountId> out;
    for (std::size_t i = split; i < deployments.size(); ++i) out.insert(deployments[i].id);
    return out;
}

std::set<AccountId> Scenario::all_contracts() const {
    std::set<AccountId> out;
    for (const auto& d : deployments) out.insert(d.id);
    return out;
}

namespace {

class Parser {
public:
    Parser(std::string name) : name_(std::move(name)) { sc_.name = name_; }

    Scenario run(const std::string& text) {
        std::istringstream in(text);
        std::string raw;
        int lineno = 0;
        bool any = false;
        while (std::getline(in, raw)) {
            ++lineno;
            line_ = lineno;
            std::size_t first = raw.find_first_not_of(" \t\r");
            if (first == std::string::npos || raw[first] == '#') continue;
            json j;
            try {
                j = json::parse(raw);
            } catch (const json::parse_error& e) {
                int col = static_cast<int>(e.byte);
                throw ScenarioError(ScenarioError::Kind::parse, name_, lineno, col > 0 ? col : 1, strip_prefix(e.what()));
            }
            if (!j.is_object() || j.empty()) fail_parse(static_cast<int>(first) + 1, "expected a JSON object");
            any = true;
            directive(j);
        }
        if (!any) throw ScenarioError(ScenarioError::Kind::parse, name_, lineno > 0 ? lineno : 1, 1, "empty scenario");
        if (!sc_.has_split) sc_.split = sc_.deployments.size();
        build();
        return std::move(sc_);
    }

private:
    static std::string strip_prefix(const std::string& what) {
        auto p = what.find("] ");
        return p == std::string::npos ? what : what.substr(p + 2);
    }

    [[noreturn]] void fail_parse(int col, const std::string& msg) const {
        throw ScenarioError(ScenarioError::Kind::parse, name_, line_, col, msg);
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ScenarioError(ScenarioError::Kind::validation, name_, line_, 0, msg);
    }

    void directive(const json& j) {
        if (j.contains("token")) return token(j);
        if (j.contains("user")) return user(j);
        if (j.contains("deploy")) return deploy(j);
        if (j.contains("split")) {
            if (sc_.has_split) fail("split: only one split marker is allowed");
            sc_.has_split = true;
            sc_.split = sc_.deployments.size();
            return;
        }
        if (j.contains("height")) {
            sc_.height = as_amount(j["height"], "height").convert_to<std::uint64_t>();
            return;
        }
        if (j.contains("oracle")) {
            sc_.oracle = user_ref(j["oracle"], "oracle");
            return;
        }
        if (j.contains("budget")) return budget(j["budget"]);
        fail("unknown directive " + j.begin().key());
    }

    void token(const json& j) {
        std::string sym = str(j["token"], "token");
        if (!j.contains("price")) fail("token " + sym + ": missing price");
        Rational p = as_rational(j["price"], "price");
        if (p <= 0) fail("token " + sym + ": price must be > 0");
        Token t{sym};
        if (sc_.prices.count(t)) fail("token " + sym + ": duplicate symbol");
        sc_.tokens.push_back(t);
        sc_.prices[t] = p;
    }

    void user(const json& j) {
        AccountId id = AccountId::user(str(j["user"], "user"));
        if (names_.count(id.name)) fail("user " + id.name + ": name already used");
        names_.insert(id.name);
        UserDecl u{id, j.contains("wallet") ? wallet(j["wallet"], "wallet") : Wallet{}, false};
        if (j.contains("adversary")) {
            if (!j["adversary"].is_boolean()) fail("adversary: expected true or false");
            u.adversary = j["adversary"].get<bool>();
        }
        sc_.users.push_back(std::move(u));
    }

    void deploy(const json& j) {
        std::string cat = str(j["deploy"], "deploy");
        const catalog::CatalogEntry* entry = catalog::find(cat);
        if (!entry) fail("unknown catalog contract '" + cat + "'");
        if (!j.contains("name")) fail("deploy " + cat + ": missing name");
        AccountId id = AccountId::contract(str(j["name"], "name"));
        if (names_.count(id.name)) fail("contract " + id.name + ": name already used");
        names_.insert(id.name);

        Deployment d;
        d.catalog = cat;
        d.id = id;
        d.line = line_;
        d.fund = j.contains("fund") ? wallet(j["fund"], "fund") : Wallet{};
        d.deployer = j.contains("by") ? user_ref(j["by"], "by") : AccountId::user("deployer");

        json args = j.contains("args") ? j["args"] : json::object();
        if (!args.is_object()) fail("args: expected an object of named constructor arguments");
        for (const auto& p : entry->constructor_schema) {
            if (!args.contains(p.name)) {
                if (p.kind == catalog::ArgKind::user && p.name == "oracle" && sc_.oracle)
                    d.args.emplace_back(p.name, Value::account(*sc_.oracle));
                continue;
            }
            d.args.emplace_back(p.name, arg_value(p, args[p.name]));
        }
        for (auto it = args.begin(); it != args.end(); ++it) {
            bool known = false;
            for (const auto& p : entry->constructor_schema) known = known || p.name == it.key();
            if (!known) fail(cat + " has no constructor parameter '" + it.key() + "'");
        }
        try {
            catalog::positional_args(*entry, d.args);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        sc_.deployments.push_back(std::move(d));
    }

    void budget(const json& j) {
        if (!j.is_object()) fail("budget: expected an object");
        SearchBudget b = sc_.budget.value_or(SearchBudget{});
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            if (k == "depth")
                b.max_depth = positive_int(*it, k);
            else if (k == "grid")
                b.grid = positive_int(*it, k);
            else if (k == "exhaustive")
                b.exhaustive = it->is_boolean() ? it->get<bool>() : (fail("exhaustive: expected a boolean"), false);
            else if (k == "ceiling")
                b.ceiling = as_amount(*it, k);
            else if (k == "state_cap")
                b.state_cap = static_cast<std::size_t>(positive_int(*it, k));
            else
                fail("budget: unknown field " + k);
        }
        sc_.budget = b;
    }

    Value arg_value(const catalog::ConstructorParam& p, const json& v) {
        using catalog::ArgKind;
        switch (p.kind) {
            case ArgKind::token: {
                Token t{str(v, p.name)};
                if (!sc_.prices.count(t)) fail(p.name + ": undeclared token " + t.symbol);
                return Value::token(t);
            }
            case ArgKind::contract:
                return Value::account(AccountId::contract(str(v, p.name)));
            case ArgKind::user:
                return Value::account(user_ref(v, p.name));
            case ArgKind::integer:
                return Value::integer(as_amount(v, p.name));
            case ArgKind::rational:
                return Value::rational(as_rational(v, p.name));
        }
        fail("unsupported argument kind");
    }

    AccountId user_ref(const json& v, const std::string& field) {
        std::string n = str(v, field);
        for (const auto& u : sc_.users)
            if (u.id.name == n) return u.id;
        fail(field + ": undeclared user " + n);
    }

    Wallet wallet(const json& v, const std::string& field) {
        if (!v.is_object()) fail(field + ": expected an object mapping token symbols to amounts");
        Wallet w;
        for (auto it = v.begin(); it != v.end(); ++it) {
            Token t{it.key()};
            if (!sc_.prices.count(t)) fail(field + ": undeclared token " + t.symbol);
            w.credit(t, as_amount(*it, field + "." + t.symbol));
        }
        return w;
    }

    std::string str(const json& v, const std::string& field) {
        if (!v.is_string() || v.get<std::string>().empty()) fail(field + ": expected a non-empty string");
        return v.get<std::string>();
    }

    Amount as_amount(const json& v, const std::string& field) {
        Amount a;
        if (v.is_number_integer())
            a = Amount(v.get<long long>());
        else if (v.is_number_unsigned())
            a = Amount(v.get<unsigned long long>());
        else if (v.is_string()) {
            const std::string s = v.get<std::string>();
            if (s.empty() || s.find_first_not_of("-0123456789") != std::string::npos) fail(field + ": not an integer: " + s);
            a = Amount(s);
        } else
            fail(field + ": expected an integer");
        if (a < 0) fail(field + ": negative amount");
        return a;
    }

    int positive_int(const json& v, const std::string& field) {
        Amount a = as_amount(v, field);
        if (a < 1 || a > 1'000'000'000) fail(field + ": must be a positive integer");
        return a.convert_to<int>();
    }

    Rational as_rational(const json& v, const std::string& field) {
        if (v.is_number_integer() || v.is_number_unsigned()) return Rational(as_amount(v, field));
        if (v.is_string()) {
            try {
                return parse_rational(v.get<std::string>());
            } catch (const std::exception&) {
                fail(field + ": not a rational: " + v.get<std::string>());
            }
        }
        fail(field + ": expected an integer or a \"num/den\" string");
    }

    void build() {
        if (sc_.split > sc_.deployments.size()) sc_.split = sc_.deployments.size();
        std::vector<Deployment> gamma(sc_.deployments.begin(), sc_.deployments.begin() + sc_.split);
        sc_.context = build_state(sc_, gamma);
        sc_.state = build_state(sc_, sc_.deployments);
    }

    std::string name_;
    Scenario sc_;
    int line_ = 0;
    std::set<std::string> names_;
};

}  // namespace

BlockchainState build_state(const Scenario& sc, const std::vector<Deployment>& deployments) {
    auto fail = [&](int line, const std::string& msg) {
        throw ScenarioError(ScenarioError::Kind::validation, sc.name, line, 0, msg);
    };
    BlockchainState s;
    for (const auto& u : sc.users) {
        s.users[u.id] = u.wallet;
        if (u.adversary) s.adversary.insert(u.id);
    }
    if (s.adversary.empty()) {
        s.adversary.insert(default_adversary());
        s.wallet_mut(default_adversary());
    }
    for (const auto& d : deployments) {
        const catalog::CatalogEntry* entry = catalog::find(d.catalog);
        if (!entry) fail(d.line, "unknown catalog contract '" + d.catalog + "'");
        try {
            std::vector<Value> args = catalog::positional_args(*entry, d.args);
            auto code = entry->make(args, s);
            s.wallet_mut(d.deployer) += d.fund;
            s = deploy(s, code, d.id, args, d.fund, d.deployer);
        } catch (const WellFormednessError& e) {
            fail(d.line, std::string("well-formedness: ") + e.what());
        } catch (const DeployError& e) {
            fail(d.line, e.what());
        } catch (const TypeError& e) {
            fail(d.line, d.id.name + ": " + e.what());
        } catch (const std::invalid_argument& e) {
            fail(d.line, e.what());
        }
    }
    s.height = sc.height;
    if (!check_well_formed(s)) fail(0, "state is not well-formed");
    return s;
}

Scenario parse_scenario(const std::string& text, const std::string& name) { return Parser(name).run(text); }

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(ScenarioError::Kind::io, path, 0, 0, "cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), std::filesystem::path(path).stem().string());
}

std::string default_scenario_dir() {
#ifdef MEVNI_SCENARIO_DIR
    return MEVNI_SCENARIO_DIR;
#else
    return "scenarios";
#endif
}

std::string resolve_scenario(const std::string& name, const std::string& dir) {
    namespace fs = std::filesystem;
    if (fs::is_regular_file(name)) return name;
    fs::path p = fs::path(dir) / name;
    if (fs::is_regular_file(p)) return p.string();
    return (fs::path(dir) / (name + ".scn")).string();
}

}  // namespace mevni
