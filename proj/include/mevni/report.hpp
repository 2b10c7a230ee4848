#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mevni/analysis.hpp"
#include "mevni/golden.hpp"

namespace mevni {

using json = nlohmann::ordered_json;

json to_json(const SearchBudget& b);
json to_json(const MevResult& r);
json to_json(const RichResult& r);
json to_json(const Verdict& v);
json to_json(const EpsilonResult& e);
json to_json(const StripCheck& s);
json to_json(const BatteryReport& b);
json to_json(const GoldenReport& g);
json to_json(const std::vector<Table2Row>& rows);
json to_json(const std::set<AccountId>& ids);

std::string render_text(const MevResult& r);
std::string render_text(const RichResult& r);
std::string render_text(const Verdict& v);
std::string render_text(const EpsilonResult& e);
std::string render_text(const StripCheck& s);
std::string render_text(const BatteryReport& b);
std::string render_text(const GoldenReport& g);
std::string render_text(const std::vector<Table2Row>& rows);

}  // namespace mevni
