#include "ralearn/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ralearn {

bool is_determinate(const RegisterAutomaton& ra) {
  const auto& ts = ra.transitions();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      const Transition& a = ts[i];
      const Transition& b = ts[j];
      if (a.from != b.from || a.action != b.action) continue;
      if (a.to == b.to && a.assignment == b.assignment) continue;
      Guard both = a.guard;
      both.literals.insert(both.literals.end(), b.guard.literals.begin(), b.guard.literals.end());
      if (both.satisfiable()) return false;
    }
  }
  return true;
}

namespace {

struct Skeleton {
  std::size_t n = 0;
  std::vector<bool> accepting;
  // [location][action] -> target, or nothing for the sink
  std::vector<std::vector<std::optional<std::size_t>>> next;
};

Skeleton random_skeleton(const GeneratorConfig& cfg, std::mt19937_64& rng) {
  Skeleton s;
  s.n = cfg.locations;
  s.next.assign(s.n, std::vector<std::optional<std::size_t>>(cfg.actions));
  std::uniform_int_distribution<std::size_t> action(0, cfg.actions - 1);
  // Spanning tree first, so every location is reachable.
  for (std::size_t l = 1; l < s.n; ++l) {
    while (true) {
      const std::size_t from = std::uniform_int_distribution<std::size_t>(0, l - 1)(rng);
      const std::size_t a = action(rng);
      if (s.next[from][a]) continue;
      s.next[from][a] = l;
      break;
    }
  }
  std::bernoulli_distribution missing(cfg.missing_probability);
  std::uniform_int_distribution<std::size_t> target(0, s.n - 1);
  for (auto& row : s.next) {
    for (auto& t : row) {
      if (!t && !missing(rng)) t = target(rng);
    }
  }
  std::bernoulli_distribution coin(0.5);
  s.accepting.resize(s.n);
  for (std::size_t l = 0; l < s.n; ++l) s.accepting[l] = coin(rng);
  s.accepting[0] = true;
  return s;
}

RegisterAutomaton build(const GeneratorConfig& cfg, std::mt19937_64& rng) {
  const Skeleton s = random_skeleton(cfg, rng);
  std::vector<Action> actions;
  for (std::size_t a = 0; a < cfg.actions; ++a) actions.push_back({"a" + std::to_string(a), 1});

  std::vector<Location> locations;
  for (std::size_t l = 0; l < s.n; ++l) {
    locations.push_back({"s" + std::to_string(l), {}, s.accepting[l]});
  }
  std::vector<Transition> transitions;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (from, action)
  for (std::size_t l = 0; l < s.n; ++l) {
    for (std::size_t a = 0; a < cfg.actions; ++a) {
      if (s.next[l][a]) edges.emplace_back(l, a);
    }
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  const auto gadgets = static_cast<std::size_t>(
      std::lround(cfg.data_fraction * static_cast<double>(edges.size())));

  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [from, a] = edges[e];
    const std::size_t to = *s.next[from][a];
    if (e >= gadgets) {
      transitions.push_back({from, a, Guard{}, Assignment{}, to});
      continue;
    }
    // Gadget: store p in a fresh copy m of `to`; one action out of m
    // compares against the stored value.
    const std::size_t m = locations.size();
    locations.push_back({"g" + std::to_string(e), {1}, s.accepting[to]});
    transitions.push_back({from, a, Guard{}, Assignment{{{1, Operand::param()}}}, m});
    const std::size_t split = std::uniform_int_distribution<std::size_t>(0, cfg.actions - 1)(rng);
    for (std::size_t b = 0; b < cfg.actions; ++b) {
      const auto target = s.next[to][b];
      if (b != split) {
        if (target) transitions.push_back({m, b, Guard{}, Assignment{}, *target});
        continue;
      }
      const std::size_t other = std::uniform_int_distribution<std::size_t>(0, s.n)(rng);
      const Guard eq{{{Operand::param(), true, Operand::x(1)}}};
      const Guard ne{{{Operand::param(), false, Operand::x(1)}}};
      // `other == s.n` sends the unequal branch to the sink.
      if (target) transitions.push_back({m, b, eq, Assignment{}, *target});
      if (other < s.n) transitions.push_back({m, b, ne, Assignment{}, other});
    }
  }

  // Drop locations the gadgets made unreachable.
  std::vector<bool> seen(locations.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t l = stack.back();
    stack.pop_back();
    for (const auto& t : transitions) {
      if (t.from == l && !seen[t.to]) {
        seen[t.to] = true;
        stack.push_back(t.to);
      }
    }
  }
  std::vector<std::size_t> index(locations.size());
  std::vector<Location> kept;
  for (std::size_t l = 0; l < locations.size(); ++l) {
    if (!seen[l]) continue;
    index[l] = kept.size();
    kept.push_back(locations[l]);
  }
  std::vector<Transition> kept_transitions;
  for (auto t : transitions) {
    if (!seen[t.from]) continue;
    t.from = index[t.from];
    t.to = index[t.to];
    kept_transitions.push_back(std::move(t));
  }
  std::sort(kept_transitions.begin(), kept_transitions.end(), [](const auto& x, const auto& y) {
    return std::tie(x.from, x.action, x.guard, x.to) < std::tie(y.from, y.action, y.guard, y.to);
  });
  return RegisterAutomaton(Alphabet(std::move(actions)), std::move(kept), 0,
                           std::move(kept_transitions));
}

}  // namespace

RegisterAutomaton generate_automaton(const GeneratorConfig& cfg) {
  if (cfg.locations == 0 || cfg.actions == 0) {
    throw std::invalid_argument("generator needs at least one location and one action");
  }
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t attempt = 0; attempt < cfg.max_retries; ++attempt) {
    RegisterAutomaton ra = build(cfg, rng);
    if (is_determinate(ra)) return ra;
  }
  throw std::runtime_error("no determinate automaton after " + std::to_string(cfg.max_retries) +
                           " attempts");
}

}  // namespace ralearn
