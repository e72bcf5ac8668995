#include "ralearn/automaton.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ralearn {

using nlohmann::json;

std::string to_string(const Operand& o) { return o.is_param ? "p" : "x" + std::to_string(o.reg); }

Operand parse_operand(std::string_view text) {
  if (text == "p") return Operand::param();
  if (text.size() >= 2 && text[0] == 'x') {
    int i = 0;
    auto [ptr, ec] = std::from_chars(text.data() + 1, text.data() + text.size(), i);
    if (ec == std::errc() && ptr == text.data() + text.size() && i >= 1) return Operand::x(i);
  }
  throw ModelError("bad operand '" + std::string(text) + "' (expected \"p\" or \"x<i>\")");
}

namespace {

const DataValue* lookup(const Valuation& mu, int reg) {
  auto it = std::lower_bound(mu.begin(), mu.end(), reg,
                             [](const auto& e, int r) { return e.first < r; });
  return it != mu.end() && it->first == reg ? &it->second : nullptr;
}

DataValue value_of(const Operand& o, const Valuation& mu, DataValue p) {
  if (o.is_param) return p;
  const DataValue* v = lookup(mu, o.reg);
  if (!v) throw ModelError("register x" + std::to_string(o.reg) + " has no value");
  return *v;
}

}  // namespace

bool Guard::holds(const Valuation& mu, DataValue p) const {
  for (const auto& lit : literals) {
    if ((value_of(lit.lhs, mu, p) == value_of(lit.rhs, mu, p)) != lit.equal) return false;
  }
  return true;
}

bool Guard::satisfiable() const {
  // Small-model property: n variables need at most n distinct values.
  std::vector<Operand> vars;
  for (const auto& lit : literals) {
    for (const Operand& o : {lit.lhs, lit.rhs}) {
      if (std::find(vars.begin(), vars.end(), o) == vars.end()) vars.push_back(o);
    }
  }
  const std::size_t n = vars.size();
  if (n == 0) return true;
  std::vector<DataValue> assign(n, 0);
  auto index_of = [&](const Operand& o) {
    return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), o) - vars.begin());
  };
  while (true) {
    bool ok = true;
    for (const auto& lit : literals) {
      if ((assign[index_of(lit.lhs)] == assign[index_of(lit.rhs)]) != lit.equal) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
    std::size_t k = 0;
    while (k < n && ++assign[k] == n) assign[k++] = 0;
    if (k == n) return false;
  }
}

std::string to_string(const Guard& g) {
  if (g.literals.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < g.literals.size(); ++i) {
    if (i) out += " && ";
    const auto& lit = g.literals[i];
    out += to_string(lit.lhs) + (lit.equal ? "==" : "!=") + to_string(lit.rhs);
  }
  return out;
}

std::string to_string(const Assignment& a) {
  if (a.entries.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (i) out += "; ";
    out += "x" + std::to_string(a.entries[i].first) + ":=" + to_string(a.entries[i].second);
  }
  return out;
}

RegisterAutomaton::RegisterAutomaton(Alphabet alphabet, std::vector<Location> locations,
                                     std::size_t initial, std::vector<Transition> transitions)
    : alphabet_(std::move(alphabet)),
      locations_(std::move(locations)),
      initial_(initial),
      transitions_(std::move(transitions)) {
  for (auto& l : locations_) std::sort(l.registers.begin(), l.registers.end());
  for (auto& t : transitions_) {
    std::sort(t.assignment.entries.begin(), t.assignment.entries.end());
  }
  validate();
  outgoing_.assign(locations_.size(), std::vector<std::vector<std::size_t>>(alphabet_.size()));
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    outgoing_[transitions_[i].from][transitions_[i].action].push_back(i);
  }
}

void RegisterAutomaton::validate() const {
  if (locations_.empty()) throw ModelError("automaton has no locations");
  if (initial_ >= locations_.size()) throw ModelError("initial location out of range");
  if (!locations_[initial_].registers.empty()) {
    throw ModelError("initial location must not have registers");
  }
  std::set<std::string> names;
  for (const auto& l : locations_) {
    if (!names.insert(l.name).second) throw ModelError("duplicate location '" + l.name + "'");
    for (std::size_t i = 0; i < l.registers.size(); ++i) {
      if (l.registers[i] < 1) throw ModelError("location '" + l.name + "': bad register index");
      if (i && l.registers[i] == l.registers[i - 1]) {
        throw ModelError("location '" + l.name + "': duplicate register");
      }
    }
  }
  for (std::size_t ti = 0; ti < transitions_.size(); ++ti) {
    const Transition& t = transitions_[ti];
    auto fail = [&](const std::string& what) {
      std::string where = "transition " + std::to_string(ti);
      if (t.from < locations_.size() && t.to < locations_.size() && t.action < alphabet_.size()) {
        where += " (" + locations_[t.from].name + " -" + alphabet_[t.action].name + "-> " +
                 locations_[t.to].name + ")";
      }
      throw ModelError(where + ": " + what);
    };
    if (t.from >= locations_.size() || t.to >= locations_.size()) fail("location out of range");
    if (t.action >= alphabet_.size()) fail("unknown action");
    const bool has_p = alphabet_.has_param(t.action);
    const auto& src = locations_[t.from].registers;
    const auto& dst = locations_[t.to].registers;
    auto readable = [&](const Operand& o) {
      if (o.is_param) return has_p;
      return std::binary_search(src.begin(), src.end(), o.reg);
    };
    for (const auto& lit : t.guard.literals) {
      if (!readable(lit.lhs) || !readable(lit.rhs)) fail("guard references unknown register or parameter");
      if (!lit.lhs.is_param && !lit.rhs.is_param) fail("guard literal must mention p");
    }
    if (!t.guard.satisfiable()) fail("unsatisfiable guard");
    std::vector<int> targets;
    for (const auto& [reg, source] : t.assignment.entries) {
      if (!std::binary_search(dst.begin(), dst.end(), reg)) {
        fail("assignment to unknown register x" + std::to_string(reg));
      }
      if (!readable(source)) fail("assignment reads unknown register " + to_string(source));
      targets.push_back(reg);
    }
    std::sort(targets.begin(), targets.end());
    if (targets != dst) fail("assignment must be total on the target location's registers");
  }
}

std::size_t RegisterAutomaton::max_registers() const {
  std::size_t m = 0;
  for (const auto& l : locations_) m = std::max(m, l.registers.size());
  return m;
}

std::size_t RegisterAutomaton::total_registers() const {
  std::size_t m = 0;
  for (const auto& l : locations_) m += l.registers.size();
  return m;
}

std::size_t RegisterAutomaton::find_location(std::string_view name) const {
  for (std::size_t i = 0; i < locations_.size(); ++i) {
    if (locations_[i].name == name) return i;
  }
  throw ModelError("unknown location '" + std::string(name) + "'");
}

RAState RegisterAutomaton::apply(const Transition& t, const RAState& s,
                                 const DataSymbol& symbol) const {
  RAState next{t.to, {}};
  next.valuation.reserve(t.assignment.entries.size());
  for (const auto& [reg, source] : t.assignment.entries) {
    next.valuation.emplace_back(reg, value_of(source, s.valuation, symbol.value.value_or(0)));
  }
  return next;
}

std::vector<RAState> RegisterAutomaton::step(const RAState& state, const DataSymbol& symbol) const {
  if (symbol.action >= alphabet_.size()) throw ModelError("unknown action in data symbol");
  std::vector<RAState> out;
  for (std::size_t ti : outgoing_[state.location][symbol.action]) {
    const Transition& t = transitions_[ti];
    if (t.guard.holds(state.valuation, symbol.value.value_or(0))) {
      out.push_back(apply(t, state, symbol));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<RAState> RegisterAutomaton::step_first(const RAState& state,
                                                   const DataSymbol& symbol) const {
  if (symbol.action >= alphabet_.size()) throw ModelError("unknown action in data symbol");
  for (std::size_t ti : outgoing_[state.location][symbol.action]) {
    const Transition& t = transitions_[ti];
    if (t.guard.holds(state.valuation, symbol.value.value_or(0))) return {apply(t, state, symbol)};
  }
  return {};
}

std::vector<RAState> RegisterAutomaton::run(const DataWord& w) const {
  std::vector<RAState> current{initial_state()};
  for (const auto& symbol : w.symbols()) {
    std::vector<RAState> next;
    for (const auto& s : current) {
      auto succ = step(s, symbol);
      next.insert(next.end(), succ.begin(), succ.end());
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    current = std::move(next);
    if (current.empty()) break;
  }
  return current;
}

bool RegisterAutomaton::accepting(const std::vector<RAState>& states) const {
  return std::any_of(states.begin(), states.end(),
                     [&](const RAState& s) { return locations_[s.location].accepting; });
}

bool RegisterAutomaton::accepts(const DataWord& w) const {
  // Single-state fast path; the full subset run only when the word branches.
  RAState s = initial_state();
  for (const auto& symbol : w.symbols()) {
    auto next = step(s, symbol);
    if (next.empty()) return false;
    if (next.size() > 1) return accepting(run(w));
    s = std::move(next.front());
  }
  return locations_[s.location].accepting;
}

bool RegisterAutomaton::mixed(const std::vector<RAState>& states) const {
  bool acc = false, rej = false;
  for (const auto& s : states) {
    (locations_[s.location].accepting ? acc : rej) = true;
  }
  return acc && rej;
}

// ---------------------------------------------------------------------------
// JSON model format

namespace {

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

int parse_register(const std::string& name) {
  const Operand o = parse_operand(name);
  if (o.is_param) throw ModelError("expected a register name, got 'p'");
  return o.reg;
}

template <class T>
T field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ModelError(where + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ModelError(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

RegisterAutomaton load_automaton(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte);
    throw ModelError("parse error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + e.what());
  }
  if (!doc.is_object()) throw ModelError("model must be a JSON object");

  std::vector<Action> actions;
  for (const auto& a : field<json>(doc, "alphabet", "model")) {
    actions.push_back({field<std::string>(a, "name", "alphabet entry"),
                       field<int>(a, "arity", "alphabet entry")});
  }
  Alphabet sigma;
  try {
    sigma = Alphabet(std::move(actions));
  } catch (const std::invalid_argument& e) {
    throw ModelError(e.what());
  }

  std::vector<Location> locations;
  std::map<std::string, std::size_t> index;
  for (const auto& l : field<json>(doc, "locations", "model")) {
    Location loc;
    loc.name = field<std::string>(l, "name", "location");
    for (const auto& r : field<std::vector<std::string>>(l, "registers", "location " + loc.name)) {
      loc.registers.push_back(parse_register(r));
    }
    loc.accepting = field<bool>(l, "accepting", "location " + loc.name);
    index.emplace(loc.name, locations.size());
    locations.push_back(std::move(loc));
  }
  auto location_index = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw ModelError("unknown location '" + name + "'");
    return it->second;
  };

  const std::size_t initial = location_index(field<std::string>(doc, "initial", "model"));

  std::vector<Transition> transitions;
  std::size_t ti = 0;
  for (const auto& t : field<json>(doc, "transitions", "model")) {
    const std::string where = "transition " + std::to_string(ti++);
    Transition tr;
    tr.from = location_index(field<std::string>(t, "from", where));
    tr.to = location_index(field<std::string>(t, "to", where));
    const auto action = field<std::string>(t, "action", where);
    auto id = sigma.find(action);
    if (!id) throw ModelError(where + ": unknown action '" + action + "'");
    tr.action = *id;
    if (t.contains("guard")) {
      for (const auto& lit : t.at("guard")) {
        const auto op = field<std::string>(lit, "op", where);
        if (op != "==" && op != "!=") throw ModelError(where + ": bad guard operator '" + op + "'");
        tr.guard.literals.push_back({parse_operand(field<std::string>(lit, "lhs", where)),
                                     op == "==",
                                     parse_operand(field<std::string>(lit, "rhs", where))});
      }
    }
    if (t.contains("assign")) {
      if (!t.at("assign").is_object()) throw ModelError(where + ": 'assign' must be an object");
      for (const auto& [reg, src] : t.at("assign").items()) {
        if (!src.is_string()) throw ModelError(where + ": assignment source must be a string");
        tr.assignment.entries.emplace_back(parse_register(reg),
                                           parse_operand(src.get<std::string>()));
      }
    }
    transitions.push_back(std::move(tr));
  }
  return RegisterAutomaton(std::move(sigma), std::move(locations), initial, std::move(transitions));
}

RegisterAutomaton load_automaton_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_automaton(buf.str());
}

std::string save_automaton(const RegisterAutomaton& ra) {
  json doc;
  doc["alphabet"] = json::array();
  for (const auto& a : ra.alphabet().actions()) {
    doc["alphabet"].push_back({{"name", a.name}, {"arity", a.arity}});
  }
  doc["locations"] = json::array();
  for (const auto& l : ra.locations()) {
    json regs = json::array();
    for (int r : l.registers) regs.push_back("x" + std::to_string(r));
    doc["locations"].push_back({{"name", l.name}, {"registers", regs}, {"accepting", l.accepting}});
  }
  doc["initial"] = ra.locations()[ra.initial()].name;
  doc["transitions"] = json::array();
  for (const auto& t : ra.transitions()) {
    json guard = json::array();
    for (const auto& lit : t.guard.literals) {
      guard.push_back({{"lhs", to_string(lit.lhs)},
                       {"op", lit.equal ? "==" : "!="},
                       {"rhs", to_string(lit.rhs)}});
    }
    json assign = json::object();
    for (const auto& [reg, src] : t.assignment.entries) {
      assign["x" + std::to_string(reg)] = to_string(src);
    }
    doc["transitions"].push_back({{"from", ra.locations()[t.from].name},
                                  {"action", ra.alphabet()[t.action].name},
                                  {"guard", guard},
                                  {"assign", assign},
                                  {"to", ra.locations()[t.to].name}});
  }
  return doc.dump(2) + "\n";
}

std::string export_dot(const RegisterAutomaton& ra) {
  std::ostringstream out;
  out << "digraph RA {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (const auto& l : ra.locations()) {
    out << "  \"" << l.name << "\" [shape=" << (l.accepting ? "doublecircle" : "circle")
        << ", label=\"" << l.name;
    if (!l.registers.empty()) {
      out << "\\n{";
      for (std::size_t i = 0; i < l.registers.size(); ++i) {
        out << (i ? "," : "") << 'x' << l.registers[i];
      }
      out << '}';
    }
    out << "\"];\n";
  }
  out << "  __start -> \"" << ra.locations()[ra.initial()].name << "\";\n";
  for (const auto& t : ra.transitions()) {
    const auto& a = ra.alphabet()[t.action];
    out << "  \"" << ra.locations()[t.from].name << "\" -> \"" << ra.locations()[t.to].name
        << "\" [label=\"" << a.name << (a.arity ? "(p)" : "()") << " | " << to_string(t.guard)
        << " | " << to_string(t.assignment) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace ralearn
