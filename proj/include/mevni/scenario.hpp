#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mevni/engine.hpp"

namespace mevni {

class ScenarioError : public std::runtime_error {
public:
    enum class Kind { io, parse, validation };
    ScenarioError(Kind kind, std::string file, int line, int column, const std::string& message);

    Kind kind;
    std::string file;
    int line;
    int column;
    std::string message;
};

struct UserDecl {
    AccountId id;
    Wallet wallet;
    bool adversary = false;
};

struct Deployment {
    std::string catalog;
    AccountId id;
    std::vector<std::pair<std::string, Value>> args;
    Wallet fund;
    AccountId deployer;
    int line = 0;
};

struct Scenario {
    std::string name;
    std::vector<Token> tokens;
    PriceMap prices;
    std::vector<UserDecl> users;
    std::vector<Deployment> deployments;
    std::size_t split = 0;  // deployments[split..] form the new fragment Δ
    bool has_split = false;
    std::uint64_t height = 0;
    std::optional<AccountId> oracle;
    std::optional<SearchBudget> budget;

    BlockchainState state;    // users | Γ | Δ
    BlockchainState context;  // users | Γ

    std::set<AccountId> gamma() const;
    std::set<AccountId> delta() const;
    std::set<AccountId> all_contracts() const;
};

// Users of `sc` plus the given deployments, in order, at the scenario height.
BlockchainState build_state(const Scenario& sc, const std::vector<Deployment>& deployments);

Scenario parse_scenario(const std::string& text, const std::string& name = "<input>");
Scenario load_scenario(const std::string& path);

// Scenario directory baked in at build time.
std::string default_scenario_dir();
// `name` as given if it is a readable path, else <dir>/<name>.scn.
std::string resolve_scenario(const std::string& name, const std::string& dir);

}  // namespace mevni
