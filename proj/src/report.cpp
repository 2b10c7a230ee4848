#include "mevni/report.hpp"

#include <sstream>

namespace mevni {

namespace {

json trace_json(const std::vector<Transaction>& trace) {
    json out = json::array();
    for (const auto& tx : trace) out.push_back(tx.str());
    return out;
}

std::string flags(const MevResult& r) {
    if (r.trivial) return "exact: trivial";
    if (r.bound_attained) return "exact: wealth bound reached";
    if (r.complete) return "exact: search complete";
    return r.cap_hit ? "lower bound: state cap hit" : "lower bound";
}

std::string indent_trace(const std::vector<Transaction>& trace, const std::string& pad) {
    std::string s;
    for (const auto& tx : trace) s += pad + tx.str() + "\n";
    return s;
}

}  // namespace

json to_json(const std::set<AccountId>& ids) {
    json out = json::array();
    for (const auto& id : ids) out.push_back(id.name);
    return out;
}

json to_json(const SearchBudget& b) {
    json j;
    j["depth"] = b.max_depth;
    j["grid"] = b.grid;
    j["exhaustive"] = b.exhaustive;
    j["ceiling"] = to_string(b.ceiling);
    j["state_cap"] = b.state_cap ? json(*b.state_cap) : json(nullptr);
    return j;
}

json to_json(const MevResult& r) {
    json j;
    j["value"] = to_string(r.value);
    j["exact"] = r.exact();
    j["complete"] = r.complete;
    j["bound_attained"] = r.bound_attained;
    j["trivial"] = r.trivial;
    j["cap_hit"] = r.cap_hit;
    j["states"] = r.states;
    j["witness"] = trace_json(r.witness);
    if (!r.warning.empty()) j["warning"] = r.warning;
    return j;
}

json to_json(const RichResult& r) {
    json j = to_json(r.result);
    j["base_wallet"] = r.w0.str();
    json ladder = json::array();
    for (const auto& rung : r.ladder) ladder.push_back({{"scale", to_string(rung.scale)}, {"value", to_string(rung.result.value)}});
    j["ladder"] = ladder;
    return j;
}

json to_json(const Verdict& v) {
    json j;
    j["holds"] = to_string(v.holds);
    j["justification"] = to_string(v.justification);
    j["condition"] = condition_number(v.justification) ? json(condition_number(v.justification)) : json(nullptr);
    j["certified"] = v.certified;
    j["lhs"] = v.lhs ? to_json(*v.lhs) : json(nullptr);
    j["rhs"] = v.rhs ? to_json(*v.rhs) : json(nullptr);
    j["witness"] = trace_json(v.witness);
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

json to_json(const EpsilonResult& e) {
    json j;
    j["holds"] = to_string(e.holds);
    j["epsilon"] = to_string(e.epsilon);
    j["certified"] = e.certified;
    j["before"] = to_json(e.before);
    j["after"] = to_json(e.after);
    return j;
}

json to_json(const StripCheck& s) {
    json j;
    j["hypothesis_met"] = s.hypothesis_met;
    j["shared"] = to_json(s.shared);
    j["not_sender_agnostic"] = to_json(s.not_agnostic);
    j["passes"] = s.passes ? json(*s.passes) : json(nullptr);
    j["equal"] = s.equal;
    j["lhs"] = {{"label", s.lhs_label}, {"value", s.lhs_value}};
    j["rhs"] = {{"label", s.rhs_label}, {"value", s.rhs_value}};
    if (!s.note.empty()) j["note"] = s.note;
    return j;
}

json to_json(const BatteryReport& b) {
    json rows = json::array();
    for (const auto& r : b.rows)
        rows.push_back({{"property", r.property},
                        {"instance", r.instance},
                        {"valid", r.expect_valid},
                        {"ok", r.ok},
                        {"detail", r.detail}});
    return {{"ok", b.all_ok()}, {"rows", rows}};
}

json to_json(const GoldenReport& g) {
    json rows = json::array();
    for (const auto& c : g.checks)
        rows.push_back({{"scenario", c.scenario}, {"check", c.what}, {"expected", c.expected}, {"actual", c.actual}, {"ok", c.ok}});
    return {{"ok", g.all_ok()}, {"checks", rows}};
}

json to_json(const std::vector<Table2Row>& rows) {
    json out = json::array();
    bool all = true;
    for (const auto& r : rows) {
        all = all && r.ok;
        out.push_back({{"row", r.row},
                       {"scenario", r.scenario},
                       {"context", r.context},
                       {"new", r.fresh},
                       {"expected", r.expect_holds ? "holds" : "violated"},
                       {"expected_condition", r.expect_condition ? json(r.expect_condition) : json(nullptr)},
                       {"verdict", to_json(r.verdict)},
                       {"ok", r.ok}});
    }
    return {{"ok", all}, {"rows", out}};
}

std::string render_text(const MevResult& r) {
    std::ostringstream o;
    o << "value: " << to_string(r.value) << " (" << flags(r) << ", " << r.states << " states)\n";
    if (!r.witness.empty()) o << "witness:\n" << indent_trace(r.witness, "  ");
    if (!r.warning.empty()) o << "warning: " << r.warning << "\n";
    return o.str();
}

std::string render_text(const RichResult& r) {
    std::ostringstream o;
    o << render_text(r.result);
    o << "base wallet: " << r.w0.str() << "\nladder:";
    for (const auto& rung : r.ladder) o << " " << to_string(rung.scale) << "x=" << to_string(rung.result.value);
    o << "\n";
    return o.str();
}

std::string render_text(const Verdict& v) {
    std::ostringstream o;
    o << "verdict: " << to_string(v.holds);
    if (int c = condition_number(v.justification)) o << " (condition " << c << ", " << to_string(v.justification) << ")";
    else if (v.justification != Justification::none) o << " (" << to_string(v.justification) << ")";
    if (v.holds == Holds::violated) o << (v.certified ? " [certified]" : " [uncertified]");
    o << "\n";
    if (v.lhs) o << "unrestricted: " << to_string(v.lhs->value) << " (" << flags(*v.lhs) << ")\n";
    if (v.rhs) o << "restricted:   " << to_string(v.rhs->value) << " (" << flags(*v.rhs) << ")\n";
    if (!v.witness.empty()) o << "witness:\n" << indent_trace(v.witness, "  ");
    if (!v.note.empty()) o << "note: " << v.note << "\n";
    return o.str();
}

std::string render_text(const EpsilonResult& e) {
    std::ostringstream o;
    o << "epsilon " << to_string(e.epsilon) << ": " << to_string(e.holds) << (e.certified ? "" : " (budget-relative)") << "\n";
    o << "global MEV before: " << to_string(e.before.value) << " (" << flags(e.before) << ")\n";
    o << "global MEV after:  " << to_string(e.after.value) << " (" << flags(e.after) << ")\n";
    if (!e.after.witness.empty()) o << "witness:\n" << indent_trace(e.after.witness, "  ");
    return o.str();
}

std::string render_text(const StripCheck& s) {
    std::ostringstream o;
    if (s.passes) o << "stripping: " << (*s.passes ? "passes" : "FAILS") << "\n";
    else o << "stripping: " << s.note << "\n";
    o << s.lhs_label << ": " << s.lhs_value << "\n" << s.rhs_label << ": " << s.rhs_value << "\n";
    return o.str();
}

std::string render_text(const BatteryReport& b) {
    std::ostringstream o;
    for (const auto& r : b.rows)
        o << (r.ok ? "ok   " : "FAIL ") << (r.expect_valid ? "[valid]   " : "[invalid] ") << r.property << " | " << r.instance
          << " | " << r.detail << "\n";
    return o.str();
}

std::string render_text(const GoldenReport& g) {
    std::ostringstream o;
    for (const auto& c : g.checks)
        o << (c.ok ? "ok   " : "FAIL ") << c.scenario << ": " << c.what << " = " << c.actual
          << (c.ok ? "" : " (expected " + c.expected + ")") << "\n";
    return o.str();
}

std::string render_text(const std::vector<Table2Row>& rows) {
    std::ostringstream o;
    for (const auto& r : rows) {
        std::string got = to_string(r.verdict.holds);
        if (int c = condition_number(r.verdict.justification)) got += " (" + std::to_string(c) + ")";
        std::string want = r.expect_holds ? "holds (" + std::to_string(r.expect_condition) + ")" : "violated";
        o << (r.ok ? "ok   " : "FAIL ") << r.row << ". " << r.context << "  <-  " << r.fresh << ": " << got;
        if (!r.ok) o << " (expected " << want << ")";
        o << "\n";
    }
    return o.str();
}

}  // namespace mevni
