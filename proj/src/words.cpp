#include "ralearn/words.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace ralearn {

Alphabet::Alphabet(std::vector<Action> actions) : actions_(std::move(actions)) {
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    if (actions_[i].arity != 0 && actions_[i].arity != 1) {
      throw std::invalid_argument("action '" + actions_[i].name + "': arity must be 0 or 1");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (actions_[j].name == actions_[i].name) {
        throw std::invalid_argument("duplicate action name '" + actions_[i].name + "'");
      }
    }
  }
}

std::optional<ActionId> Alphabet::find(std::string_view name) const {
  for (ActionId i = 0; i < actions_.size(); ++i) {
    if (actions_[i].name == name) return i;
  }
  return std::nullopt;
}

ActionId Alphabet::id_of(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw std::invalid_argument("unknown action '" + std::string(name) + "'");
}

std::vector<DataValue> DataWord::data_values() const {
  std::vector<DataValue> out;
  out.reserve(symbols_.size());
  for (const auto& s : symbols_) {
    if (s.value) out.push_back(*s.value);
  }
  return out;
}

std::size_t DataWord::data_count() const {
  std::size_t n = 0;
  for (const auto& s : symbols_) n += s.value.has_value();
  return n;
}

DataWord DataWord::prefix(std::size_t n) const {
  return DataWord({symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(n)});
}

DataWord DataWord::suffix_from(std::size_t from) const {
  return DataWord({symbols_.begin() + static_cast<std::ptrdiff_t>(from), symbols_.end()});
}

DataWord DataWord::concat(const DataWord& tail) const {
  DataWord w = *this;
  w.symbols_.insert(w.symbols_.end(), tail.symbols_.begin(), tail.symbols_.end());
  return w;
}

bool shortlex_less(const DataWord& a, const DataWord& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

DataWord make_word(const Alphabet& sigma,
                   std::initializer_list<std::pair<std::string_view, DataValue>> symbols) {
  DataWord w;
  for (const auto& [name, value] : symbols) {
    const ActionId id = sigma.id_of(name);
    w.append({id, sigma.has_param(id) ? std::optional<DataValue>(value) : std::nullopt});
  }
  return w;
}

DataWord parse_word(const Alphabet& sigma, std::string_view text) {
  DataWord w;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (text.substr(i) == "ε") return w;
  while (i < text.size()) {
    const std::size_t open = text.find('(', i);
    const std::size_t close = text.find(')', i);
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
      throw std::invalid_argument("malformed word: " + std::string(text));
    }
    const ActionId id = sigma.id_of(text.substr(i, open - i));
    const std::string_view arg = text.substr(open + 1, close - open - 1);
    DataSymbol s{id, std::nullopt};
    if (sigma.has_param(id)) {
      DataValue v = 0;
      auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), v);
      if (ec != std::errc() || ptr != arg.data() + arg.size()) {
        throw std::invalid_argument("malformed data value in: " + std::string(text));
      }
      s.value = v;
    } else if (!arg.empty()) {
      throw std::invalid_argument("arity-0 action with argument in: " + std::string(text));
    }
    w.append(s);
    i = close + 1;
    skip_ws();
  }
  return w;
}

std::string to_string(const Alphabet& sigma, const DataWord& w) {
  if (w.empty()) return "ε";
  std::ostringstream out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out << ' ';
    out << sigma[w[i].action].name << '(';
    if (w[i].value) out << *w[i].value;
    out << ')';
  }
  return out.str();
}

SymbolicSuffix::SymbolicSuffix(const Alphabet& sigma, std::vector<ActionId> actions)
    : actions_(std::move(actions)) {
  for (ActionId a : actions_) {
    has_param_.push_back(sigma.has_param(a));
    if (has_param_.back()) restrictions_.push_back(ParamRestriction::unrestricted());
  }
}

SymbolicSuffix::SymbolicSuffix(const Alphabet& sigma, std::vector<ActionId> actions,
                               std::vector<ParamRestriction> restrictions)
    : SymbolicSuffix(sigma, std::move(actions)) {
  if (restrictions.size() != restrictions_.size()) {
    throw std::invalid_argument("restriction count does not match parameter count");
  }
  restrictions_ = std::move(restrictions);
  check_restrictions();
}

void SymbolicSuffix::check_restrictions() const {
  for (std::size_t i = 0; i < restrictions_.size(); ++i) {
    const auto& r = restrictions_[i];
    if (!r.is_equals()) continue;
    const int own = static_cast<int>(i) + 1;
    if (r.target < 1 || r.target >= own) {
      throw std::invalid_argument("EqualsParam must reference an earlier parameter");
    }
    // Chains must bottom out in a fresh parameter.
    const auto* root = &restrictions_[static_cast<std::size_t>(r.target - 1)];
    while (root->is_equals()) root = &restrictions_[static_cast<std::size_t>(root->target - 1)];
    if (!root->is_fresh()) {
      throw std::invalid_argument("EqualsParam target must be a fresh parameter");
    }
  }
}

std::size_t SymbolicSuffix::unrestricted_count() const {
  std::size_t n = 0;
  for (const auto& r : restrictions_) n += r.is_unrestricted();
  return n;
}

SymbolicSuffix SymbolicSuffix::without_restrictions() const {
  SymbolicSuffix s = *this;
  for (auto& r : s.restrictions_) r = ParamRestriction::unrestricted();
  return s;
}

SymbolicSuffix SymbolicSuffix::with_restrictions(std::vector<ParamRestriction> restrictions) const {
  if (restrictions.size() != restrictions_.size()) {
    throw std::invalid_argument("restriction count does not match parameter count");
  }
  SymbolicSuffix s = *this;
  s.restrictions_ = std::move(restrictions);
  s.check_restrictions();
  return s;
}

SymbolicSuffix actions_of(const Alphabet& sigma, const DataWord& w) {
  std::vector<ActionId> actions;
  actions.reserve(w.size());
  for (const auto& s : w.symbols()) actions.push_back(s.action);
  return SymbolicSuffix(sigma, std::move(actions));
}

SymbolicSuffix prepend(const Alphabet& sigma, ActionId alpha, const SymbolicSuffix& v) {
  std::vector<ActionId> actions{alpha};
  actions.insert(actions.end(), v.actions().begin(), v.actions().end());
  return SymbolicSuffix(sigma, std::move(actions));
}

namespace {

void instantiate(const Alphabet& sigma, const SymbolicSuffix& v, std::size_t pos,
                 std::vector<DataValue>& context, std::vector<DataValue>& params,
                 DataWord& current, std::vector<DataWord>& out) {
  if (pos == v.length()) {
    out.push_back(current);
    return;
  }
  const ActionId a = v.actions()[pos];
  if (!sigma.has_param(a)) {
    current.append({a, std::nullopt});
    instantiate(sigma, v, pos + 1, context, params, current, out);
    current = current.parent();
    return;
  }
  const auto& r = v.restriction(static_cast<int>(params.size()) + 1);
  std::vector<DataValue> candidates;
  if (r.is_fresh()) candidates = {fresh_value(context)};
  else if (r.is_equals()) candidates = {params[static_cast<std::size_t>(r.target - 1)]};
  else candidates = potential_values(context);
  for (DataValue d : candidates) {
    context.push_back(d);
    params.push_back(d);
    current.append({a, d});
    instantiate(sigma, v, pos + 1, context, params, current, out);
    current = current.parent();
    params.pop_back();
    context.pop_back();
  }
}

}  // namespace

std::vector<DataWord> instantiations(const Alphabet& sigma, const SymbolicSuffix& v,
                                     const DataWord& prefix) {
  std::vector<DataValue> context = prefix.data_values();
  std::vector<DataValue> params;
  DataWord current;
  std::vector<DataWord> out;
  instantiate(sigma, v, 0, context, params, current, out);
  return out;
}

std::string to_string(const Alphabet& sigma, const SymbolicSuffix& v) {
  if (v.empty()) return "ε";
  std::ostringstream out;
  int param = 0;
  for (std::size_t i = 0; i < v.length(); ++i) {
    if (i) out << ' ';
    out << sigma[v.actions()[i]].name << '(';
    if (v.has_param_at(i)) {
      ++param;
      out << 'p' << param;
      const auto& r = v.restriction(param);
      if (r.is_fresh()) out << "|fresh";
      else if (r.is_equals()) out << "|=p" << r.target;
    }
    out << ')';
  }
  return out.str();
}

}  // namespace ralearn
