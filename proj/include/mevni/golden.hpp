#pragma once

#include <string>
#include <vector>

#include "mevni/analysis.hpp"

namespace mevni {

struct GoldenCheck {
    std::string scenario;
    std::string what;
    std::string expected;
    std::string actual;
    bool ok = false;
};

struct GoldenReport {
    std::vector<GoldenCheck> checks;
    bool all_ok() const;
};

// Every bundled worked example against its known values.
GoldenReport run_examples(const std::string& scenario_dir, const SearchBudget& budget = {});

struct Table2Row {
    int row = 0;
    std::string scenario;
    std::string context;
    std::string fresh;
    bool expect_holds = true;
    int expect_condition = 0;  // sufficient condition expected to justify a holds
    Verdict verdict;
    bool ok = false;
};

std::vector<Table2Row> run_table2(const std::string& scenario_dir, const SearchBudget& budget = {});

}  // namespace mevni
