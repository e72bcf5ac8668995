#include "ralearn/oracle.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>

namespace ralearn {

nlohmann::json to_json(const QueryStats& s) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [mqs, count] : s.tree_query_histogram) hist[std::to_string(mqs)] = count;
  return {{"membership_queries", s.total_resets()},
          {"learn_resets", s.learn_resets},
          {"test_resets", s.test_resets},
          {"raw_queries", s.total_raw()},
          {"learn_raw", s.learn_raw},
          {"test_raw", s.test_raw},
          {"equivalence_queries", s.equivalence_queries},
          {"counterexamples", s.counterexamples},
          {"tree_query_histogram", hist}};
}

std::size_t WordHash::operator()(const DataWord& w) const noexcept {
  std::size_t h = w.size();
  for (const auto& s : w.symbols()) {
    const std::size_t v = s.value ? *s.value + 1 : 0;
    h ^= (s.action * 0x9e3779b97f4a7c15ULL + v) + 0x9e3779b9 + (h << 6) + (h >> 2);
  }
  return h;
}

bool CountingOracle::member(const DataWord& w) {
  const bool learn = phase_ == Phase::Learn;
  ++(learn ? stats_.learn_raw : stats_.test_raw);
  const auto [it, added] = memo_.try_emplace(w, false);
  if (!added) return it->second;
  ++(learn ? stats_.learn_resets : stats_.test_resets);
  return it->second = sul_.accepts(w);
}

namespace {

using StateSet = std::vector<RAState>;

// Renames the data values of both state sets to 0,1,2,... in order of first
// use, so that joint states equal up to a data bijection coincide.
std::pair<StateSet, StateSet> canonical(const StateSet& a, const StateSet& b) {
  std::map<DataValue, DataValue> rename;
  auto visit = [&](const StateSet& s) {
    StateSet out = s;
    for (auto& st : out) {
      for (auto& [reg, v] : st.valuation) {
        auto [it, inserted] = rename.emplace(v, static_cast<DataValue>(rename.size()));
        v = it->second;
      }
    }
    return out;
  };
  auto ca = visit(a);
  auto cb = visit(b);
  return {ca, cb};
}

StateSet advance(const RegisterAutomaton& ra, const StateSet& states, const DataSymbol& s) {
  StateSet next;
  for (const auto& st : states) {
    auto succ = ra.step(st, s);
    next.insert(next.end(), succ.begin(), succ.end());
  }
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());
  return next;
}

}  // namespace

std::optional<DataWord> find_counterexample_exact(const RegisterAutomaton& hyp,
                                                  const RegisterAutomaton& sul) {
  if (!(hyp.alphabet() == sul.alphabet())) {
    throw ModelError("equivalence check between automata over different alphabets");
  }
  struct Node {
    DataWord word;
    StateSet h, s;
  };
  std::deque<Node> queue;
  std::set<std::pair<StateSet, StateSet>> seen;
  queue.push_back({DataWord{}, {hyp.initial_state()}, {sul.initial_state()}});
  seen.insert(canonical(queue.back().h, queue.back().s));
  const Alphabet& sigma = hyp.alphabet();

  while (!queue.empty()) {
    Node n = std::move(queue.front());
    queue.pop_front();
    if (hyp.accepting(n.h) != sul.accepting(n.s)) {
      if (hyp.accepts(n.word) == sul.accepts(n.word)) {
        throw ModelError("exact equivalence check produced a spurious counterexample");
      }
      return n.word;
    }
    if (n.h.empty() && n.s.empty()) continue;

    // The fresh value goes first, so counterexamples repeat a value only
    // where the difference needs it.
    std::vector<DataValue> candidates{fresh_value(n.word)};
    for (const StateSet* set : {&n.h, &n.s}) {
      for (const auto& st : *set) {
        for (const auto& [reg, v] : st.valuation) {
          if (std::find(candidates.begin(), candidates.end(), v) == candidates.end()) {
            candidates.push_back(v);
          }
        }
      }
    }
    std::sort(candidates.begin() + 1, candidates.end());

    for (ActionId a = 0; a < sigma.size(); ++a) {
      const bool has_p = sigma.has_param(a);
      const std::size_t options = has_p ? candidates.size() : 1;
      for (std::size_t k = 0; k < options; ++k) {
        DataSymbol sym{a, has_p ? std::optional<DataValue>(candidates[k]) : std::nullopt};
        Node next{n.word.extended(sym), advance(hyp, n.h, sym), advance(sul, n.s, sym)};
        if (seen.insert(canonical(next.h, next.s)).second) queue.push_back(std::move(next));
      }
    }
  }
  return std::nullopt;
}

RandomWalkOracle::RandomWalkOracle(CountingOracle& mq, RandomWalkConfig cfg)
    : mq_(mq), cfg_(cfg) {}

std::optional<DataWord> RandomWalkOracle::find_counterexample(const RegisterAutomaton& hyp) {
  // One generator per equivalence query keeps each query reproducible on
  // its own, independent of how many walks earlier queries consumed.
  std::mt19937_64 rng(cfg_.seed * 0x100000001b3ULL + round_++);
  const Alphabet& sigma = mq_.sul().alphabet();
  std::uniform_int_distribution<std::size_t> pick_action(0, sigma.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_length(1, std::max<std::size_t>(cfg_.max_depth, 1));
  std::bernoulli_distribution reuse(cfg_.reuse_probability);

  const Phase saved = mq_.phase();
  mq_.set_phase(Phase::Test);
  std::optional<DataWord> found;
  for (std::size_t walk = 0; walk < cfg_.walks && !found; ++walk) {
    DataWord w;
    const std::size_t len = pick_length(rng);
    for (std::size_t i = 0; i < len; ++i) {
      const ActionId a = pick_action(rng);
      if (!sigma.has_param(a)) {
        w.append({a, std::nullopt});
        continue;
      }
      const auto values = potential_values(w);  // distinct values, then fresh
      DataValue d = values.back();
      if (values.size() > 1 && reuse(rng)) {
        std::uniform_int_distribution<std::size_t> pick(0, values.size() - 2);
        d = values[pick(rng)];
      }
      w.append({a, d});
    }
    if (mq_.member(w) != hyp.accepts(w)) found = w;
  }
  mq_.set_phase(saved);
  return found;
}

}  // namespace ralearn
