#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "mevni/scenario.hpp"

namespace mevni {

struct MicroOptions {
    int max_units = 10;  // tokens held by everyone together
    int max_contracts = 3;
    bool allow_height = true;  // may draw Bet, whose outcome depends on the clock
};

// A small random scenario over the catalog: up to three tokens, one
// adversary, a few funded contracts and a split before the last one or two.
// The budget line asks for exhaustive search with the ceiling at the total
// token count. `text` is the scenario source, handy for reproducing a sample.
struct MicroSample {
    std::string text;
    Scenario scenario;
};

MicroSample random_micro_scenario(std::mt19937_64& rng, const MicroOptions& opts = {});

}  // namespace mevni
