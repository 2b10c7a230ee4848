#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mevni/vm.hpp"

namespace mevni::catalog {

enum class ArgKind { token, contract, user, integer, rational };

struct ConstructorParam {
    std::string name;
    ArgKind kind = ArgKind::integer;
    bool optional = false;
    std::string doc;
};

// Builds the code of one instance. The pre-deployment state is passed so
// wrappers can learn their token pair from the contracts they wrap.
using Factory = std::function<std::shared_ptr<const ContractCode>(const std::vector<Value>& args,
                                                                  const BlockchainState& state)>;

struct CatalogEntry {
    std::string name;
    std::string summary;
    std::vector<ConstructorParam> constructor_schema;
    Factory make;
};

// Core DeFi contracts.
CatalogEntry amm();
CatalogEntry airdrop();
CatalogEntry exchange();
CatalogEntry bet();
// Wrappers composing the core contracts.
CatalogEntry best_swap();
CatalogEntry swap_router();
CatalogEntry lending_pool();
CatalogEntry lp_arbitrage();
CatalogEntry flash_loan_arbitrage();
// Small contracts used by the counterexamples.
std::vector<CatalogEntry> counterexample_contracts();

const std::vector<CatalogEntry>& all();
const CatalogEntry* find(const std::string& name);

// Positions of the named params, or throws std::invalid_argument.
std::vector<Value> positional_args(const CatalogEntry& entry, const std::vector<std::pair<std::string, Value>>& named);

// {1} ∪ {⌊k·base/G⌋ : 1 ≤ k ≤ G}, positive values only, ascending.
std::vector<Amount> grid_amounts(const Amount& base, int grid);

}  // namespace mevni::catalog
