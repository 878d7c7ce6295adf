// Copyright 2026 The seqauto Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "seqauto/dsl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace seqauto::dsl {

namespace {

using hfsm::is_token;

constexpr std::size_t kMaxDiagnostics = 200;

struct Entry {
  int line = 0;
  int value_col = 0;
  std::string key;
  std::string value;
};

struct Section {
  int line = 0;
  std::string kind;
  std::vector<std::string> args;
  std::vector<int> arg_cols;
  std::vector<Entry> entries;
};

struct RawDoc {
  std::vector<Entry> top;
  std::vector<Section> sections;
};

class Diags {
 public:
  void error(int line, int col, std::string message) { add(line, col, Severity::Error, std::move(message)); }
  void warning(int line, int col, std::string message) {
    add(line, col, Severity::Warning, std::move(message));
  }
  bool has_errors() const {
    for (const auto& d : list)
      if (d.severity == Severity::Error) return true;
    return false;
  }

  std::vector<ParseDiagnostic> list;

 private:
  void add(int line, int col, Severity sev, std::string message) {
    if (list.size() < kMaxDiagnostics) list.push_back({line, col, sev, std::move(message)});
  }
};

bool is_blank(char c) { return c == ' ' || c == '\t'; }

struct Word {
  std::string text;
  int col;
};

std::vector<Word> split_words(std::string_view s, int base_col) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_blank(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_blank(s[i])) ++i;
    if (i > start) out.push_back({std::string(s.substr(start, i - start)), base_col + static_cast<int>(start)});
  }
  return out;
}

RawDoc lex(std::string_view text, Diags& d) {
  RawDoc doc;
  Section* current = nullptr;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || is_blank(line.back()))) line.remove_suffix(1);
    if (line.empty()) continue;
    if (is_blank(line.front())) {
      d.error(line_no, 1, "indentation is not allowed");
      continue;
    }
    if (line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        d.error(line_no, static_cast<int>(line.size()), "unterminated section header");
        current = nullptr;
        continue;
      }
      auto words = split_words(line.substr(1, line.size() - 2), 2);
      if (words.empty()) {
        d.error(line_no, 1, "empty section header");
        current = nullptr;
        continue;
      }
      Section s;
      s.line = line_no;
      s.kind = words[0].text;
      for (std::size_t i = 1; i < words.size(); ++i) {
        s.args.push_back(words[i].text);
        s.arg_cols.push_back(words[i].col);
      }
      doc.sections.push_back(std::move(s));
      current = &doc.sections.back();
      continue;
    }
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      d.error(line_no, 1, "expected 'key: value'");
      continue;
    }
    std::string_view key = line.substr(0, colon);
    if (!is_token(key)) {
      d.error(line_no, 1, "invalid field name");
      continue;
    }
    std::size_t vstart = colon + 1;
    while (vstart < line.size() && is_blank(line[vstart])) ++vstart;
    Entry e{line_no, static_cast<int>(vstart) + 1, std::string(key), std::string(line.substr(vstart))};
    if (current)
      current->entries.push_back(std::move(e));
    else
      doc.top.push_back(std::move(e));
  }
  return doc;
}

struct Fields {
  std::map<std::string, const Entry*> single;
  std::map<std::string, std::vector<const Entry*>> multi;

  const Entry* get(const std::string& key) const {
    auto it = single.find(key);
    return it == single.end() ? nullptr : it->second;
  }
  std::vector<const Entry*> all(const std::string& key) const {
    auto it = multi.find(key);
    return it == multi.end() ? std::vector<const Entry*>{} : it->second;
  }
};

bool contains(std::initializer_list<std::string_view> names, std::string_view key) {
  for (auto n : names)
    if (n == key) return true;
  return false;
}

Fields collect(const std::vector<Entry>& entries, std::initializer_list<std::string_view> singles,
               std::initializer_list<std::string_view> repeats, Diags& d) {
  Fields f;
  for (const auto& e : entries) {
    if (contains(singles, e.key)) {
      if (!f.single.emplace(e.key, &e).second) d.error(e.line, 1, "duplicate field: " + e.key);
    } else if (contains(repeats, e.key)) {
      f.multi[e.key].push_back(&e);
    } else {
      d.error(e.line, 1, "unknown field: " + e.key);
    }
  }
  return f;
}

const Entry* require(const Fields& f, const std::string& key, int line, Diags& d) {
  const Entry* e = f.get(key);
  if (!e) d.error(line, 1, "missing required field: " + key);
  return e;
}

template <class Int>
std::optional<Int> parse_integer(std::string_view s) {
  Int v{};
  if (s.empty()) return std::nullopt;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_number(std::string_view s) {
  double v = 0;
  if (s.empty()) return std::nullopt;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::string> token_value(const Entry& e, Diags& d) {
  if (!is_token(e.value)) {
    d.error(e.line, e.value_col, "expected a name for " + e.key);
    return std::nullopt;
  }
  return e.value;
}

std::optional<std::set<std::string>> token_set(const Entry& e, Diags& d) {
  std::set<std::string> out;
  bool ok = true;
  auto words = split_words(e.value, e.value_col);
  if (words.empty()) {
    d.error(e.line, e.value_col, "expected at least one name for " + e.key);
    return std::nullopt;
  }
  for (const auto& w : words) {
    if (!is_token(w.text)) {
      d.error(e.line, w.col, "invalid name: " + w.text);
      ok = false;
    } else if (!out.insert(w.text).second) {
      d.error(e.line, w.col, "duplicate name: " + w.text);
      ok = false;
    }
  }
  if (!ok) return std::nullopt;
  return out;
}

/// "a -> b"
std::optional<std::pair<std::string, std::string>> arrow_pair(const Entry& e, Diags& d) {
  auto words = split_words(e.value, e.value_col);
  if (words.size() != 3 || words[1].text != "->") {
    d.error(e.line, e.value_col, "expected '<name> -> <name>' for " + e.key);
    return std::nullopt;
  }
  for (int i : {0, 2}) {
    if (!is_token(words[i].text)) {
      d.error(e.line, words[i].col, "invalid name: " + words[i].text);
      return std::nullopt;
    }
  }
  return std::pair{words[0].text, words[2].text};
}

std::optional<TimeMs> time_value(const std::string& text, int line, int col, Diags& d) {
  auto v = parse_integer<TimeMs>(text);
  if (!v) {
    d.error(line, col, "expected integer milliseconds: " + text);
    return std::nullopt;
  }
  if (*v < 0) {
    d.error(line, col, "negative time: " + text);
    return std::nullopt;
  }
  return v;
}

void check_version(const Fields& top, Diags& d) {
  const Entry* v = top.get("version");
  if (!v) {
    d.error(1, 1, "missing required field: version");
    return;
  }
  if (v->value != "1") d.error(v->line, v->value_col, "unsupported version: " + v->value);
}

// --- machine documents ---------------------------------------------------

struct MachineDraft {
  int line = 0;
  hfsm::MachineDef def;
  std::map<std::string, std::pair<std::string, int>> child_refs;  // state -> (machine, line)
  std::map<std::string, int> state_lines;
  std::map<std::pair<std::string, std::string>, int> transition_lines;
};

void parse_state_section(const Section& sec, std::map<std::string, MachineDraft>& machines, Diags& d) {
  const int arg_col = sec.arg_cols.empty() ? 2 : sec.arg_cols[0];
  if (sec.args.size() != 1) {
    d.error(sec.line, 1, "state section expects [state <machine>/<state>]");
    return;
  }
  const std::string& qualified = sec.args[0];
  const auto slash = qualified.find('/');
  if (slash == std::string::npos || qualified.find('/', slash + 1) != std::string::npos ||
      !is_token(qualified.substr(0, slash)) || !is_token(qualified.substr(slash + 1))) {
    d.error(sec.line, arg_col, "state section expects [state <machine>/<state>]");
    return;
  }
  const std::string machine_name = qualified.substr(0, slash);
  const std::string state_name = qualified.substr(slash + 1);
  auto mit = machines.find(machine_name);
  if (mit == machines.end()) {
    d.error(sec.line, arg_col, "unknown machine: " + machine_name);
    return;
  }
  MachineDraft& draft = mit->second;
  if (draft.def.states.count(state_name)) {
    d.error(sec.line, arg_col, "duplicate state: " + qualified);
    return;
  }

  Fields f = collect(sec.entries, {"kind", "outcomes", "action", "on_success", "on_abort", "child"},
                     {"map", "transition"}, d);
  hfsm::StateDef s;
  s.name = state_name;
  if (const Entry* e = require(f, "kind", sec.line, d)) {
    if (e->value == "atomic")
      s.kind = hfsm::StateKind::Atomic;
    else if (e->value == "composite")
      s.kind = hfsm::StateKind::Composite;
    else
      d.error(e->line, e->value_col, "invalid value for kind: " + e->value + " (expected atomic or composite)");
  }
  if (const Entry* e = require(f, "outcomes", sec.line, d))
    if (auto set = token_set(*e, d)) s.outcomes = std::move(*set);
  if (const Entry* e = f.get("action")) {
    auto words = split_words(e->value, e->value_col);
    if (words.size() != 3 || !is_token(words[0].text) || !is_token(words[1].text)) {
      d.error(e->line, e->value_col, "expected 'action: <server> <actuator> <target>'");
    } else {
      hfsm::ActionRef action{words[0].text, words[1].text, 0.0};
      const std::string& target = words[2].text;
      if (target.size() > 1 && target.front() == '$' && is_token(target.substr(1))) {
        action.target = hfsm::ContextRef{target.substr(1)};
        s.action = action;
      } else if (auto num = parse_number(target)) {
        action.target = *num;
        s.action = action;
      } else {
        d.error(e->line, words[2].col, "invalid goal target: " + target);
      }
    }
  }
  if (const Entry* e = f.get("on_success"))
    if (auto v = token_value(*e, d)) s.on_success = *v;
  if (const Entry* e = f.get("on_abort"))
    if (auto v = token_value(*e, d)) s.on_abort = *v;
  if (const Entry* e = f.get("child"))
    if (auto v = token_value(*e, d)) draft.child_refs[state_name] = {*v, e->line};
  for (const Entry* e : f.all("map")) {
    if (auto p = arrow_pair(*e, d))
      if (!s.outcome_map.emplace(p->first, p->second).second)
        d.error(e->line, e->value_col, "duplicate outcome map entry: " + p->first);
  }
  for (const Entry* e : f.all("transition")) {
    if (auto p = arrow_pair(*e, d)) {
      if (!draft.def.transitions.emplace(std::pair{state_name, p->first}, p->second).second)
        d.error(e->line, e->value_col, "duplicate transition for outcome: " + p->first);
      else
        draft.transition_lines[{state_name, p->first}] = e->line;
    }
  }
  draft.state_lines[state_name] = sec.line;
  draft.def.states.emplace(state_name, std::move(s));
}

std::shared_ptr<const hfsm::MachineDef> assemble(const std::string& name,
                                                 std::map<std::string, MachineDraft>& machines,
                                                 std::set<std::string>& used,
                                                 std::vector<std::string>& stack, Diags& d) {
  MachineDraft& draft = machines.at(name);
  used.insert(name);
  stack.push_back(name);
  hfsm::MachineDef def = draft.def;
  for (const auto& [state, ref] : draft.child_refs) {
    const auto& [child, line] = ref;
    if (!machines.count(child)) {
      d.error(line, 1, "unknown child machine: " + child);
    } else if (std::find(stack.begin(), stack.end(), child) != stack.end()) {
      d.error(line, 1, "machine nesting cycle through: " + child);
    } else if (used.count(child)) {
      d.error(line, 1, "machine used by more than one composite: " + child);
    } else {
      def.states[state].child = assemble(child, machines, used, stack, d);
    }
  }
  stack.pop_back();
  return std::make_shared<const hfsm::MachineDef>(std::move(def));
}

std::string last_component(const std::string& path) {
  auto slash = path.rfind('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

void emit_machine(std::ostringstream& out, const hfsm::MachineDef& m) {
  auto join = [](const std::set<std::string>& items) {
    std::string s;
    for (const auto& i : items) s += (s.empty() ? "" : " ") + i;
    return s;
  };
  out << "\n[machine " << m.name << "]\n";
  out << "initial: " << m.initial << "\n";
  out << "terminals: " << join(m.terminal_outcomes) << "\n";
  for (const auto& [name, s] : m.states) {
    out << "\n[state " << m.name << "/" << name << "]\n";
    out << "kind: " << (s.kind == hfsm::StateKind::Atomic ? "atomic" : "composite") << "\n";
    out << "outcomes: " << join(s.outcomes) << "\n";
    if (s.action) {
      out << "action: " << s.action->server << " " << s.action->actuator << " ";
      if (const auto* ref = std::get_if<hfsm::ContextRef>(&s.action->target))
        out << "$" << ref->key << "\n";
      else
        out << format_number(std::get<double>(s.action->target)) << "\n";
    }
    if (!s.on_success.empty()) out << "on_success: " << s.on_success << "\n";
    if (!s.on_abort.empty()) out << "on_abort: " << s.on_abort << "\n";
    if (s.child) out << "child: " << s.child->name << "\n";
    for (const auto& [from, to] : s.outcome_map) out << "map: " << from << " -> " << to << "\n";
    for (auto it = m.transitions.lower_bound({name, ""});
         it != m.transitions.end() && it->first.first == name; ++it)
      out << "transition: " << it->first.second << " -> " << it->second << "\n";
  }
  for (const auto& [name, s] : m.states)
    if (s.child) emit_machine(out, *s.child);
}

}  // namespace

std::string format_diagnostic(std::string_view source, const ParseDiagnostic& d) {
  std::string out(source);
  out += ":" + std::to_string(d.line) + ":" + std::to_string(d.column) + ": ";
  out += d.severity == Severity::Error ? "error: " : "warning: ";
  out += d.message;
  return out;
}

ParseResult<hfsm::MachineDef> parse_machine(std::string_view text) {
  Diags d;
  RawDoc doc = lex(text, d);
  Fields top = collect(doc.top, {"version", "root"}, {}, d);
  check_version(top, d);
  std::string root;
  if (const Entry* e = require(top, "root", 1, d))
    if (auto v = token_value(*e, d)) root = *v;

  std::map<std::string, MachineDraft> machines;
  for (const auto& sec : doc.sections) {
    if (sec.kind == "state") continue;
    if (sec.kind != "machine") {
      d.error(sec.line, 2, "unknown section: " + sec.kind);
      continue;
    }
    if (sec.args.size() != 1 || !is_token(sec.args[0])) {
      d.error(sec.line, 1, "machine section expects [machine <name>]");
      continue;
    }
    const std::string& name = sec.args[0];
    if (machines.count(name)) {
      d.error(sec.line, sec.arg_cols[0], "duplicate machine: " + name);
      continue;
    }
    MachineDraft draft;
    draft.line = sec.line;
    draft.def.name = name;
    Fields f = collect(sec.entries, {"initial", "terminals"}, {}, d);
    if (const Entry* e = require(f, "initial", sec.line, d))
      if (auto v = token_value(*e, d)) draft.def.initial = *v;
    if (const Entry* e = require(f, "terminals", sec.line, d))
      if (auto set = token_set(*e, d)) draft.def.terminal_outcomes = std::move(*set);
    machines.emplace(name, std::move(draft));
  }
  for (const auto& sec : doc.sections)
    if (sec.kind == "state") parse_state_section(sec, machines, d);

  ParseResult<hfsm::MachineDef> result;
  if (!root.empty() && !machines.count(root)) d.error(top.get("root")->line, top.get("root")->value_col, "unknown root machine: " + root);
  if (d.has_errors() || root.empty()) {
    if (!d.has_errors()) d.error(1, 1, "missing root machine");
    result.diagnostics = std::move(d.list);
    return result;
  }

  std::set<std::string> used;
  std::vector<std::string> stack;
  auto def = assemble(root, machines, used, stack, d);
  for (const auto& [name, draft] : machines)
    if (!used.count(name)) d.error(draft.line, 1, "machine not reachable from root: " + name);
  if (!d.has_errors()) {
    auto report = hfsm::validate_machine(*def);
    for (const auto& diag : report.diagnostics) {
      auto mit = machines.find(last_component(diag.machine));
      int line = 1;
      if (mit != machines.end()) {
        const MachineDraft& draft = mit->second;
        line = draft.line;
        if (auto t = draft.transition_lines.find({diag.state, diag.outcome}); t != draft.transition_lines.end())
          line = t->second;
        else if (auto s = draft.state_lines.find(diag.state); s != draft.state_lines.end())
          line = s->second;
      }
      std::string message = diag.message;
      if (!diag.state.empty() && !diag.outcome.empty())
        message += " at (" + diag.state + ", " + diag.outcome + ")";
      else if (!diag.state.empty())
        message += " at state " + diag.state;
      else if (!diag.outcome.empty())
        message += " (" + diag.outcome + ")";
      d.error(line, 1, message);
    }
  }
  if (!d.has_errors()) result.value = *def;
  result.diagnostics = std::move(d.list);
  return result;
}

std::string serialize_machine(const hfsm::MachineDef& def) {
  std::ostringstream out;
  out << "version: 1\n";
  out << "root: " << def.name << "\n";
  emit_machine(out, def);
  return out.str();
}

// --- scenario documents ------------------------------------------------------

FileLoader directory_loader(std::string base_dir) {
  return [base = std::move(base_dir)](const std::string& path) -> std::optional<std::string> {
    std::filesystem::path full = std::filesystem::path(path).is_absolute()
                                     ? std::filesystem::path(path)
                                     : std::filesystem::path(base) / path;
    std::ifstream in(full, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
}

ParseResult<Scenario> parse_scenario(std::string_view text, const FileLoader& loader) {
  Diags d;
  RawDoc doc = lex(text, d);
  Scenario sc;

  Fields top = collect(doc.top,
                       {"version", "scenario", "mission", "head", "epochs", "horizon", "seed",
                        "ping_interval", "latency", "feedback_interval"},
                       {}, d);
  check_version(top, d);
  if (const Entry* e = require(top, "scenario", 1, d))
    if (auto v = token_value(*e, d)) sc.name = *v;
  if (const Entry* e = require(top, "mission", 1, d))
    if (auto v = token_value(*e, d)) sc.mission_id = *v;
  if (const Entry* e = top.get("head"))
    if (auto v = token_value(*e, d)) sc.head = *v;
  if (const Entry* e = top.get("epochs")) {
    auto v = parse_integer<int>(e->value);
    if (!v || *v < 1)
      d.error(e->line, e->value_col, "epochs must be a positive integer");
    else
      sc.epochs = *v;
  }
  if (const Entry* e = require(top, "horizon", 1, d))
    if (auto v = time_value(e->value, e->line, e->value_col, d)) sc.horizon = *v;
  if (const Entry* e = top.get("seed")) {
    if (auto v = parse_integer<std::uint64_t>(e->value))
      sc.seed = *v;
    else
      d.error(e->line, e->value_col, "seed must be an unsigned 64-bit integer");
  }
  if (const Entry* e = top.get("ping_interval"))
    if (auto v = time_value(e->value, e->line, e->value_col, d)) sc.ping_interval = *v;
  if (const Entry* e = top.get("feedback_interval"))
    if (auto v = time_value(e->value, e->line, e->value_col, d)) sc.feedback_interval = *v;
  if (const Entry* e = top.get("latency")) {
    auto words = split_words(e->value, e->value_col);
    std::vector<TimeMs> nums;
    for (std::size_t i = 1; i < words.size(); ++i)
      if (auto v = time_value(words[i].text, e->line, words[i].col, d)) nums.push_back(*v);
    if (!words.empty() && words[0].text == "fixed" && words.size() == 2 && nums.size() == 1) {
      sc.latency = bus::LatencyModel::fixed(nums[0]);
    } else if (!words.empty() && words[0].text == "uniform" && words.size() == 3 && nums.size() == 2) {
      if (nums[0] > nums[1])
        d.error(e->line, e->value_col, "uniform latency requires lo <= hi");
      else
        sc.latency = bus::LatencyModel::uniform(nums[0], nums[1]);
    } else if (words.empty() || nums.size() + 1 == words.size()) {
      d.error(e->line, e->value_col, "expected 'fixed <ms>' or 'uniform <lo_ms> <hi_ms>'");
    }
  }

  std::map<AgentId, int> robot_lines;
  std::map<AgentId, int> successor_lines;
  std::map<std::string, ParseResult<hfsm::MachineDef>> behavior_cache;

  for (const auto& sec : doc.sections) {
    if (sec.kind != "robot") continue;
    if (sec.args.size() != 1 || !is_token(sec.args[0])) {
      d.error(sec.line, 1, "robot section expects [robot <id>]");
      continue;
    }
    RobotSpec r;
    r.id = sec.args[0];
    if (robot_lines.count(r.id)) {
      d.error(sec.line, sec.arg_cols[0], "duplicate robot id: " + r.id);
      continue;
    }
    robot_lines[r.id] = sec.line;
    r.trigger_topic = "trigger_" + r.id;
    Fields f = collect(sec.entries,
                       {"domain", "behavior", "successor", "trigger_topic", "probe_peer",
                        "ping_interval", "address", "success_outcome"},
                       {}, d);
    if (const Entry* e = require(f, "domain", sec.line, d)) {
      if (auto v = parse_integer<std::uint32_t>(e->value))
        r.domain = DomainId{*v};
      else
        d.error(e->line, e->value_col, "domain must be a non-negative integer");
    }
    if (const Entry* e = f.get("successor")) {
      successor_lines[r.id] = e->line;
      if (e->value != "none")
        if (auto v = token_value(*e, d)) r.successor = *v;
    }
    if (const Entry* e = f.get("trigger_topic"))
      if (auto v = token_value(*e, d)) r.trigger_topic = *v;
    if (const Entry* e = f.get("probe_peer"))
      if (auto v = token_value(*e, d)) r.probe_peer = *v;
    if (const Entry* e = f.get("ping_interval"))
      if (auto v = time_value(e->value, e->line, e->value_col, d)) r.ping_interval = *v;
    if (const Entry* e = f.get("address")) r.address = e->value;
    if (const Entry* e = f.get("success_outcome"))
      if (auto v = token_value(*e, d)) r.success_outcome = *v;
    if (const Entry* e = require(f, "behavior", sec.line, d)) {
      r.behavior_path = e->value;
      if (e->value.empty()) {
        d.error(e->line, e->value_col, "empty behavior path");
      } else {
        auto cached = behavior_cache.find(e->value);
        if (cached == behavior_cache.end()) {
          ParseResult<hfsm::MachineDef> parsed;
          if (auto content = loader ? loader(e->value) : std::nullopt)
            parsed = parse_machine(*content);
          else
            parsed.diagnostics.push_back({1, 1, Severity::Error, "cannot read file"});
          cached = behavior_cache.emplace(e->value, std::move(parsed)).first;
        }
        for (const auto& bd : cached->second.diagnostics)
          if (bd.severity == Severity::Error)
            d.error(e->line, e->value_col,
                    "behavior " + format_diagnostic(e->value, bd));
        if (cached->second.value) r.behavior = *cached->second.value;
      }
    }
    sc.robots.push_back(std::move(r));
  }

  auto robot_named = [&](const std::string& id) -> RobotSpec* {
    for (auto& r : sc.robots)
      if (r.id == id) return &r;
    return nullptr;
  };

  std::set<bus::LinkKey> seen_links;
  for (const auto& sec : doc.sections) {
    if (sec.kind == "robot") continue;
    if (sec.kind == "params") {
      RobotSpec* r = sec.args.size() == 1 ? robot_named(sec.args[0]) : nullptr;
      if (!r) {
        d.error(sec.line, 1, "params section expects [params <robot id>] of a declared robot");
        continue;
      }
      for (const auto& e : sec.entries) {
        auto v = parse_number(e.value);
        if (!v)
          d.error(e.line, e.value_col, "parameter value must be a number: " + e.key);
        else if (!r->params.emplace(e.key, *v).second)
          d.error(e.line, 1, "duplicate field: " + e.key);
      }
    } else if (sec.kind == "server") {
      const std::string arg = sec.args.size() == 1 ? sec.args[0] : std::string{};
      const auto slash = arg.find('/');
      RobotSpec* r = slash == std::string::npos ? nullptr : robot_named(arg.substr(0, slash));
      if (!r || !is_token(arg.substr(slash + 1))) {
        d.error(sec.line, 1, "server section expects [server <robot id>/<server>] of a declared robot");
        continue;
      }
      ServerSpec server{arg.substr(slash + 1), {}};
      Fields f = collect(sec.entries, {}, {"actuator"}, d);
      for (const Entry* e : f.all("actuator")) {
        auto words = split_words(e->value, e->value_col);
        std::vector<double> nums;
        for (std::size_t i = 1; i < words.size(); ++i)
          if (auto v = parse_number(words[i].text)) nums.push_back(*v);
        if ((words.size() != 4 && words.size() != 5) || !is_token(words[0].text) ||
            nums.size() + 1 != words.size()) {
          d.error(e->line, e->value_col, "expected 'actuator: <id> <min> <max> <speed> [<initial>]'");
          continue;
        }
        agents::ActuatorModel m{words[0].text, nums.size() == 4 ? nums[3] : nums[0], nums[0], nums[1], nums[2]};
        server.actuators.push_back(std::move(m));
      }
      r->servers.push_back(std::move(server));
    } else if (sec.kind == "bridge") {
      Fields f = collect(sec.entries, {}, {"rule"}, d);
      for (const Entry* e : f.all("rule")) {
        auto words = split_words(e->value, e->value_col);
        auto from = words.size() == 4 ? parse_integer<std::uint32_t>(words[0].text) : std::nullopt;
        auto to = words.size() == 4 ? parse_integer<std::uint32_t>(words[2].text) : std::nullopt;
        if (!from || !to || words[1].text != "->" || !is_token(words[3].text)) {
          d.error(e->line, e->value_col, "expected 'rule: <from domain> -> <to domain> <topic>'");
          continue;
        }
        bus::BridgeRule rule{DomainId{*from}, DomainId{*to}, words[3].text};
        if (std::find(sc.bridges.begin(), sc.bridges.end(), rule) == sc.bridges.end())
          sc.bridges.push_back(rule);
      }
    } else if (sec.kind == "link") {
      if (sec.args.size() != 2 || !robot_named(sec.args[0]) || !robot_named(sec.args[1]) ||
          sec.args[0] == sec.args[1]) {
        d.error(sec.line, 1, "link section expects [link <robot id> <robot id>] of two declared robots");
        continue;
      }
      auto key = bus::make_link_key(sec.args[0], sec.args[1]);
      if (!seen_links.insert(key).second) {
        d.error(sec.line, 1, "duplicate link section: " + bus::link_name(key));
        continue;
      }
      Fields f = collect(sec.entries, {}, {"outage"}, d);
      std::vector<bus::Interval> intervals;
      for (const Entry* e : f.all("outage")) {
        auto words = split_words(e->value, e->value_col);
        if (words.size() != 2) {
          d.error(e->line, e->value_col, "expected 'outage: <start_ms> <end_ms>'");
          continue;
        }
        auto start = time_value(words[0].text, e->line, words[0].col, d);
        auto end = time_value(words[1].text, e->line, words[1].col, d);
        if (!start || !end) continue;
        if (*end <= *start) {
          d.error(e->line, e->value_col, "empty outage interval");
          continue;
        }
        intervals.push_back({*start, *end});
      }
      bool overlapped = false;
      sc.links.set(sec.args[0], sec.args[1], bus::LinkSchedule::normalize(intervals, &overlapped));
      if (overlapped) d.warning(sec.line, 1, "overlapping outage intervals merged");
    } else if (sec.kind == "inject") {
      Fields f = collect(sec.entries, {}, {"abort", "duplicate"}, d);
      for (const Entry* e : f.all("abort")) {
        auto words = split_words(e->value, e->value_col);
        auto n = words.size() == 4 ? parse_integer<int>(words[3].text) : std::nullopt;
        if (!n || *n < 1 || !is_token(words[0].text) || !is_token(words[1].text) || !is_token(words[2].text)) {
          d.error(e->line, e->value_col, "expected 'abort: <robot> <server> <actuator> <occurrence>'");
          continue;
        }
        sc.aborts.push_back({words[0].text, words[1].text, words[2].text, *n});
      }
      for (const Entry* e : f.all("duplicate")) {
        auto words = split_words(e->value, e->value_col);
        auto n = words.size() == 3 ? parse_integer<int>(words[1].text) : std::nullopt;
        auto spacing = words.size() == 3 ? parse_integer<TimeMs>(words[2].text) : std::nullopt;
        if (!n || !spacing || *n < 0 || *spacing <= 0 || !is_token(words[0].text)) {
          d.error(e->line, e->value_col, "expected 'duplicate: <robot> <count> <spacing_ms>'");
          continue;
        }
        sc.duplicates.push_back({words[0].text, *n, *spacing});
      }
    } else {
      d.error(sec.line, 2, "unknown section: " + sec.kind);
    }
  }

  if (!sc.robots.empty() && !top.get("head")) d.error(1, 1, "missing required field: head");

  ParseResult<Scenario> result;
  if (!d.has_errors()) {
    for (const auto& issue : check_scenario(sc)) {
      int line = 1;
      if (auto it = robot_lines.find(issue.robot); it != robot_lines.end()) line = it->second;
      if (issue.message.rfind("unknown successor", 0) == 0)
        if (auto it = successor_lines.find(issue.robot); it != successor_lines.end()) line = it->second;
      d.error(line, 1, issue.message);
    }
  }
  if (!d.has_errors()) result.value = std::move(sc);
  result.diagnostics = std::move(d.list);
  return result;
}

ParseResult<Scenario> load_scenario_file(const std::string& path) {
  std::filesystem::path p(path);
  auto loader = directory_loader(p.parent_path().string());
  auto text = loader(p.filename().string());
  if (!text) {
    ParseResult<Scenario> result;
    result.diagnostics.push_back({1, 1, Severity::Error, "cannot read file"});
    return result;
  }
  return parse_scenario(*text, loader);
}

}  // namespace seqauto::dsl
