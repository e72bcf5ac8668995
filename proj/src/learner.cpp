#include "ralearn/learner.hpp"

#include <algorithm>
#include <chrono>

namespace ralearn {

using nlohmann::json;

std::string to_string(Algorithm a) { return a == Algorithm::SLLambda ? "sllambda" : "slct"; }

Algorithm parse_algorithm(std::string_view text) {
  if (text == "sllambda") return Algorithm::SLLambda;
  if (text == "slct") return Algorithm::SLCT;
  throw std::invalid_argument("unknown algorithm '" + std::string(text) + "'");
}

std::string to_string(Check c) {
  switch (c) {
    case Check::LocationClosedness: return "location_closedness";
    case Check::TransitionClosedness: return "transition_closedness";
    case Check::RegisterClosedness: return "register_closedness";
    case Check::LocationConsistency: return "location_consistency";
    case Check::TransitionConsistencyA: return "transition_consistency_a";
    case Check::TransitionConsistencyB: return "transition_consistency_b";
    case Check::RegisterConsistency: return "register_consistency";
  }
  return "?";
}

namespace {

Valuation valuation_of(const DataWord& u) {
  Valuation mu;
  const auto values = u.data_values();
  for (std::size_t i = 0; i < values.size(); ++i) mu.emplace_back(static_cast<int>(i) + 1, values[i]);
  return mu;
}

std::vector<SymbolicSuffix> shortest_first(std::vector<SymbolicSuffix> v) {
  std::stable_sort(v.begin(), v.end(),
                   [](const auto& a, const auto& b) { return a.length() < b.length(); });
  return v;
}

bool contains(const std::vector<int>& sorted, int x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

json regs_json(const std::vector<int>& regs) {
  json out = json::array();
  for (int r : regs) out.push_back("x" + std::to_string(r));
  return out;
}

json bijection_json(const Bijection& g) {
  json out = json::object();
  for (const auto& [a, b] : g) out["x" + std::to_string(a)] = "x" + std::to_string(b);
  return out;
}

}  // namespace

Learner::Learner(const Alphabet& sigma, CountingOracle& mq, LearnerConfig cfg)
    : sigma_(sigma), mq_(mq), cfg_(std::move(cfg)), tq_(sigma, mq) {
  ct_ = std::make_unique<ClassificationTree>(tq_);
}

void Learner::emit(json event) {
  if (!cfg_.on_event) return;
  event["learn_resets"] = mq_.stats().learn_resets;
  cfg_.on_event(event);
}

void Learner::record(Check c, json detail) {
  ++fixes_[to_string(c)];
  detail["event"] = "fix";
  detail["check"] = to_string(c);
  emit(std::move(detail));
}

SymbolicSuffix Learner::from_counterexample(const DataWord& u, const DataWord& v) const {
  return cfg_.restrictions ? restrict_from_counterexample(sigma_, u, v) : actions_of(sigma_, v);
}

std::size_t Learner::guard_index(const DataWord& u, ActionId alpha, std::optional<DataValue> d) {
  const auto guards = ct_->initial_guards(u, alpha);
  if (!sigma_.has_param(alpha)) return 0;
  const Valuation mu = valuation_of(u);
  // The guards must partition the values: exactly one may hold.
  std::optional<std::size_t> hit;
  for (std::size_t i = 0; i < guards.size(); ++i) {
    if (!guards[i].holds(mu, d.value_or(0))) continue;
    if (hit) throw InternalError("initial guards at " + to_string(sigma_, u) + " overlap");
    hit = i;
  }
  if (!hit) throw InternalError("initial guards at " + to_string(sigma_, u) + " do not cover a value");
  return *hit;
}

bool Learner::separates(const DataWord& u, ActionId alpha, std::optional<DataValue> a,
                        std::optional<DataValue> b) {
  return guard_index(u, alpha, a) != guard_index(u, alpha, b);
}

void Learner::refine_checked(const DataWord& u, const SymbolicSuffix& restricted,
                             const SymbolicSuffix& plain, const std::function<bool()>& achieved,
                             const char* check) {
  ct_->refine(ct_->leaf_of(u), restricted);
  if (achieved()) return;
  if (restricted == plain) {
    throw InternalError(std::string(check) + ": suffix " + to_string(sigma_, plain) +
                        " at " + to_string(sigma_, u) + " did not have the intended effect");
  }
  emit({{"event", "fallback"},
        {"check", check},
        {"prefix", to_string(sigma_, u)},
        {"restricted", to_string(sigma_, restricted)},
        {"suffix", to_string(sigma_, plain)}});
  ct_->refine(ct_->leaf_of(u), plain);
  if (!achieved()) {
    throw InternalError(std::string(check) + ": unrestricted suffix " + to_string(sigma_, plain) +
                        " at " + to_string(sigma_, u) + " did not have the intended effect");
  }
}

bool Learner::location_closedness() {
  for (const DataWord& u : ct_->U()) {
    if (!ct_->short_prefixes(ct_->leaf_of(u)).empty()) continue;
    const DataWord w = u;
    record(Check::LocationClosedness, {{"prefix", to_string(sigma_, w)}});
    ct_->expand(w);
    return true;
  }
  return false;
}

bool Learner::transition_closedness() {
  const std::vector<DataWord> shorts(ct_->S_p().begin(), ct_->S_p().end());
  for (const DataWord& u : shorts) {
    for (ActionId a = 0; a < sigma_.size(); ++a) {
      for (const Guard& g : ct_->initial_guards(u, a)) {
        const DataWord t = ct_->extension(u, a, g);
        if (ct_->in_U(t)) continue;
        record(Check::TransitionClosedness, {{"prefix", to_string(sigma_, t)}});
        ct_->sift(t);
        return true;
      }
    }
  }
  return false;
}

bool Learner::register_closedness() {
  const std::vector<DataWord> all(ct_->U().begin(), ct_->U().end());
  for (const DataWord& t : all) {
    if (t.empty()) continue;
    const DataWord u = t.parent();
    if (!ct_->is_short(u)) continue;
    const ActionId alpha = t.back().action;
    const auto d = t.back().value;
    auto allowed = ct_->memorable(u);
    if (sigma_.has_param(alpha)) allowed.push_back(static_cast<int>(u.data_count()) + 1);
    std::sort(allowed.begin(), allowed.end());
    std::vector<int> missing;
    for (int x : ct_->memorable(t)) {
      if (!contains(allowed, x)) missing.push_back(x);
    }
    if (missing.empty()) continue;

    for (const auto& v : shortest_first(ct_->ancestors(t))) {
      const SDT& tree = tq_.query(t, v);
      std::vector<int> targets;
      for (int x : memorable(tree)) {
        if (contains(missing, x)) targets.push_back(x);
      }
      if (targets.empty()) continue;
      const SymbolicSuffix plain = prepend(sigma_, alpha, v);
      const SymbolicSuffix restricted =
          cfg_.restrictions ? restrict_prepend(sigma_, u, alpha, d, v, tree, targets) : plain;
      record(Check::RegisterClosedness, {{"prefix", to_string(sigma_, u)},
                                         {"extension", to_string(sigma_, t)},
                                         {"registers", regs_json(targets)},
                                         {"suffix", to_string(sigma_, restricted)}});
      refine_checked(
          u, restricted, plain,
          [&] {
            const auto now = ct_->memorable(u);
            return std::includes(now.begin(), now.end(), targets.begin(), targets.end());
          },
          "register_closedness");
      return true;
    }
    throw InternalError("no suffix reveals the missing registers of " + to_string(sigma_, t));
  }
  return false;
}

bool Learner::location_consistency() {
  for (NodeId leaf : ct_->leaves()) {
    const auto shorts = ct_->short_prefixes(leaf);
    const auto suffixes = ct_->ancestors(leaf);
    for (std::size_t i = 0; i < shorts.size(); ++i) {
      for (std::size_t j = i + 1; j < shorts.size(); ++j) {
        const DataWord& u = shorts[i];
        const DataWord& u2 = shorts[j];
        const auto gammas = all_bijections(tq_, u, u2, suffixes);
        if (gammas.empty()) {
          throw InternalError("short prefixes " + to_string(sigma_, u) + " and " +
                              to_string(sigma_, u2) + " share a leaf without a bijection");
        }
        struct Witness {
          Bijection gamma;
          ActionId alpha;
          DataWord t, t2;
        };
        std::optional<Witness> first;
        bool consistent = false;
        for (const auto& gamma : gammas) {
          std::optional<Witness> w;
          for (ActionId a = 0; a < sigma_.size() && !w; ++a) {
            for (const Guard& g : ct_->initial_guards(u, a)) {
              const DataWord t = ct_->extension(u, a, g);
              const DataWord t2 = ct_->extension(u2, a, apply_bijection(gamma, g));
              if (!ct_->in_U(t) || !ct_->in_U(t2)) continue;
              if (ct_->leaf_of(t) != ct_->leaf_of(t2)) {
                w = Witness{gamma, a, t, t2};
                break;
              }
            }
          }
          if (!w) {
            consistent = true;
            break;
          }
          if (!first) first = std::move(w);
        }
        if (consistent) continue;

        const Witness& w = *first;
        const NodeId sep = ct_->lca(ct_->leaf_of(w.t), ct_->leaf_of(w.t2));
        const SymbolicSuffix v = *ct_->node(sep).suffix;
        const SymbolicSuffix plain = prepend(sigma_, w.alpha, v);
        SymbolicSuffix restricted = plain;
        if (cfg_.restrictions) {
          const SDT& lhs = tq_.query(w.t, v);
          const SDT& rhs = tq_.query(w.t2, v);
          try {
            restricted = restrict_separating(sigma_, w.alpha, {u, w.t.back().value, &lhs},
                                             {u2, w.t2.back().value, &rhs}, v);
          } catch (const std::logic_error&) {
            restricted = plain;
          }
        }
        record(Check::LocationConsistency, {{"prefix", to_string(sigma_, u)},
                                            {"other", to_string(sigma_, u2)},
                                            {"extension", to_string(sigma_, w.t)},
                                            {"other_extension", to_string(sigma_, w.t2)},
                                            {"suffix", to_string(sigma_, restricted)}});
        const Bijection gamma = w.gamma;
        refine_checked(
            u, restricted, plain,
            [&] {
              if (ct_->leaf_of(u) != ct_->leaf_of(u2)) return true;
              const auto now = all_bijections(tq_, u, u2, ct_->ancestors(u));
              return std::find(now.begin(), now.end(), gamma) == now.end();
            },
            "location_consistency");
        return true;
      }
    }
  }
  return false;
}

bool Learner::transition_consistency_a() {
  const std::vector<DataWord> all(ct_->U().begin(), ct_->U().end());
  for (const DataWord& t : all) {
    if (t.empty()) continue;
    const DataWord u = t.parent();
    if (!ct_->is_short(u)) continue;
    const ActionId alpha = t.back().action;
    const auto d = t.back().value;
    const auto guards = ct_->initial_guards(u, alpha);
    const DataWord r = ct_->extension(u, alpha, guards[guard_index(u, alpha, d)]);
    if (r == t || !ct_->in_U(r)) continue;
    const NodeId lt = ct_->leaf_of(t);
    const NodeId lr = ct_->leaf_of(r);
    if (lt == lr) continue;

    const SymbolicSuffix v = *ct_->node(ct_->lca(lt, lr)).suffix;
    const SymbolicSuffix plain = prepend(sigma_, alpha, v);
    SymbolicSuffix restricted = plain;
    if (cfg_.restrictions) {
      const SDT& lhs = tq_.query(t, v);
      const SDT& rhs = tq_.query(r, v);
      try {
        restricted =
            restrict_separating(sigma_, alpha, {u, d, &lhs}, {u, r.back().value, &rhs}, v);
      } catch (const std::logic_error&) {
        restricted = plain;
      }
    }
    record(Check::TransitionConsistencyA, {{"prefix", to_string(sigma_, u)},
                                           {"extension", to_string(sigma_, t)},
                                           {"representative", to_string(sigma_, r)},
                                           {"suffix", to_string(sigma_, restricted)}});
    const auto rd = r.back().value;
    refine_checked(u, restricted, plain, [&] { return separates(u, alpha, d, rd); },
                   "transition_consistency_a");
    return true;
  }
  return false;
}

std::optional<SymbolicSuffix> Learner::identity_witness(const DataWord& t, const DataWord& r) {
  // Under the identity on positions, r's trees must describe t.
  const auto regs = t.data_values();
  for (const auto& v : shortest_first(ct_->ancestors(t))) {
    const SDT& tt = tq_.query(t, v);
    const SDT& tr = tq_.query(r, v);
    if (tt == tr) continue;
    for (const auto& inst : instantiations(sigma_, v, t)) {
      const Evaluation e = evaluate(tr, regs, inst.data_values());
      if (e.accept == e.reject || e.accept != classify(tt, t, inst)) return v;
    }
  }
  return std::nullopt;
}

bool Learner::transition_consistency_b() {
  const std::vector<DataWord> all(ct_->U().begin(), ct_->U().end());
  for (const DataWord& t : all) {
    if (t.empty()) continue;
    const DataWord u = t.parent();
    if (!ct_->is_short(u)) continue;
    const ActionId alpha = t.back().action;
    const auto d = t.back().value;
    const auto guards = ct_->initial_guards(u, alpha);
    const DataWord r = ct_->extension(u, alpha, guards[guard_index(u, alpha, d)]);
    if (r == t || !ct_->in_U(r) || ct_->leaf_of(t) != ct_->leaf_of(r)) continue;

    const auto witness = identity_witness(t, r);
    if (!witness) continue;

    const SymbolicSuffix& v = *witness;
    const std::size_t n = u.data_count();
    std::vector<int> targets;
    for (const SDT* tree : {&tq_.query(t, v), &tq_.query(r, v)}) {
      for (int x : memorable(*tree)) {
        if (static_cast<std::size_t>(x) <= n) targets.push_back(x);
      }
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    const SymbolicSuffix plain = prepend(sigma_, alpha, v);
    const SymbolicSuffix restricted =
        cfg_.restrictions
            ? restrict_prepend(sigma_, u, alpha, d, v, tq_.query(t, v), targets, true)
            : plain;
    record(Check::TransitionConsistencyB, {{"prefix", to_string(sigma_, u)},
                                           {"extension", to_string(sigma_, t)},
                                           {"representative", to_string(sigma_, r)},
                                           {"suffix", to_string(sigma_, restricted)}});
    const auto rd = r.back().value;
    refine_checked(u, restricted, plain, [&] { return separates(u, alpha, d, rd); },
                   "transition_consistency_b");
    return true;
  }
  return false;
}

bool Learner::register_consistency() {
  const std::vector<DataWord> shorts(ct_->S_p().begin(), ct_->S_p().end());
  for (const DataWord& u : shorts) {
    const auto mu = ct_->memorable(u);
    const Bijection id = identity_bijection(mu);
    const auto gammas = all_bijections(tq_, u, u, ct_->ancestors(u));
    for (const auto& gamma : gammas) {
      if (gamma == id) continue;
      const std::vector<DataWord> all(ct_->U().begin(), ct_->U().end());
      for (const DataWord& t : all) {
        if (t.empty() || t.parent() != u) continue;
        const ActionId alpha = t.back().action;
        const int added = static_cast<int>(u.data_count()) + 1;
        // The only possible extension of gamma to t: gamma on the registers
        // kept from u, the identity on the new position.
        Bijection ext;
        bool closed = true;
        for (int x : ct_->memorable(t)) {
          if (sigma_.has_param(alpha) && x == added) ext.emplace_back(x, x);
          else if (contains(mu, x)) ext.emplace_back(x, *image(gamma, x));
          else closed = false;
        }
        if (!closed) continue;

        std::optional<SymbolicSuffix> witness;
        for (const auto& v : shortest_first(ct_->ancestors(t))) {
          const SDT& tree = tq_.query(t, v);
          if (!(apply_bijection(ext, tree) == tree)) {
            witness = v;
            break;
          }
        }
        if (!witness) continue;

        const SymbolicSuffix& v = *witness;
        const SDT& tree = tq_.query(t, v);
        std::vector<int> targets;
        for (int x : memorable(tree)) {
          if (contains(mu, x) && *image(gamma, x) != x) targets.push_back(x);
        }
        const SymbolicSuffix plain = prepend(sigma_, alpha, v);
        const SymbolicSuffix restricted =
            cfg_.restrictions
                ? restrict_prepend(sigma_, u, alpha, t.back().value, v, tree, targets)
                : plain;
        record(Check::RegisterConsistency, {{"prefix", to_string(sigma_, u)},
                                            {"symmetry", bijection_json(gamma)},
                                            {"extension", to_string(sigma_, t)},
                                            {"registers", regs_json(targets)},
                                            {"suffix", to_string(sigma_, restricted)}});
        const Bijection broken = gamma;
        refine_checked(
            u, restricted, plain,
            [&] {
              const auto now = all_bijections(tq_, u, u, ct_->ancestors(u));
              return std::find(now.begin(), now.end(), broken) == now.end();
            },
            "register_consistency");
        return true;
      }
    }
  }
  return false;
}

std::optional<Check> Learner::step() {
  std::optional<Check> fired;
  if (location_closedness()) fired = Check::LocationClosedness;
  else if (transition_closedness()) fired = Check::TransitionClosedness;
  else if (register_closedness()) fired = Check::RegisterClosedness;
  else if (location_consistency()) fired = Check::LocationConsistency;
  else if (transition_consistency_a()) fired = Check::TransitionConsistencyA;
  else if (transition_consistency_b()) fired = Check::TransitionConsistencyB;
  else if (register_consistency()) fired = Check::RegisterConsistency;
  if (fired && ++rounds_ > cfg_.max_rounds) {
    throw InternalError("iteration cap of " + std::to_string(cfg_.max_rounds) + " exceeded");
  }
  return fired;
}

void Learner::close() {
  while (step()) {
  }
}

Hypothesis Learner::hypothesis() {
  auto leaves = ct_->leaves();
  const NodeId initial = ct_->leaf_of(DataWord{});
  std::stable_partition(leaves.begin(), leaves.end(), [&](NodeId n) { return n == initial; });

  std::vector<Location> locations;
  std::vector<DataWord> access;
  std::map<NodeId, std::size_t> index;
  for (NodeId leaf : leaves) {
    const auto shorts = ct_->short_prefixes(leaf);
    if (shorts.empty()) throw InternalError("hypothesis requested on a non-closed tree");
    index[leaf] = locations.size();
    access.push_back(shorts.front());
    locations.push_back({"l" + std::to_string(locations.size()), ct_->memorable(shorts.front()),
                         ct_->accepting(leaf)});
  }

  std::vector<Transition> transitions;
  for (std::size_t l = 0; l < locations.size(); ++l) {
    const DataWord& u = access[l];
    const int added = static_cast<int>(u.data_count()) + 1;
    for (ActionId a = 0; a < sigma_.size(); ++a) {
      for (const Guard& g : ct_->initial_guards(u, a)) {
        const DataWord t = ct_->extension(u, a, g);
        if (!ct_->in_U(t)) throw InternalError("hypothesis requested on a non-closed tree");
        const NodeId target = ct_->leaf_of(t);
        const std::size_t to = index.at(target);
        auto gamma = find_bijection(tq_, t, access[to], ct_->ancestors(target));
        if (!gamma) {
          throw InternalError(to_string(sigma_, t) + " is not equivalent to " +
                              to_string(sigma_, access[to]));
        }
        const Bijection back = inverse(*gamma);
        Assignment pi;
        for (int x : locations[to].registers) {
          const int src = *image(back, x);
          if (sigma_.has_param(a) && src == added) {
            pi.entries.emplace_back(x, Operand::param());
          } else if (contains(locations[l].registers, src)) {
            pi.entries.emplace_back(x, Operand::x(src));
          } else {
            throw InternalError("register x" + std::to_string(src) + " of " +
                                to_string(sigma_, u) + " is needed but not memorable");
          }
        }
        transitions.push_back({l, a, g, std::move(pi), to});
      }
    }
  }

  std::vector<NodeId> leaf_of_location(leaves.begin(), leaves.end());
  return {RegisterAutomaton(sigma_, std::move(locations), 0, std::move(transitions)),
          std::move(leaf_of_location), std::move(access)};
}

void Learner::expose_guard(const DataWord& u, ActionId alpha, const DataWord& t,
                           const DataWord& cex_prefix, const DataWord& cex_tail) {
  const auto guards = ct_->initial_guards(u, alpha);
  const DataWord r = ct_->extension(u, alpha, guards[guard_index(u, alpha, t.back().value)]);
  auto apart = [&] {
    return ct_->leaf_of(t) != ct_->leaf_of(r) || identity_witness(t, r).has_value();
  };
  if (!ct_->in_U(r) || apart()) return;
  // Nothing in the tree tells the new prefix from the one its guard already
  // leads to; the counterexample tail does.
  const SymbolicSuffix plain = actions_of(sigma_, cex_tail);
  const SymbolicSuffix restricted = from_counterexample(cex_prefix, cex_tail);
  emit({{"event", "expose_guard"},
        {"prefix", to_string(sigma_, t)},
        {"representative", to_string(sigma_, r)},
        {"suffix", to_string(sigma_, restricted)}});
  refine_checked(t, restricted, plain, apart, "expose_guard");
}

void Learner::analyze(const DataWord& w) {
  const Hypothesis h = hypothesis();
  const bool lambda = cfg_.algorithm == Algorithm::SLLambda;
  const std::size_t before = ct_->progress_measure();
  auto done = [&](std::size_t i, const char* which, const DataWord& prefix) {
    emit({{"event", "analysis"},
          {"case", which},
          {"index", i},
          {"prefix", to_string(sigma_, prefix)},
          {"progress_before", before},
          {"progress_after", ct_->progress_measure()}});
    if (lambda && ct_->progress_measure() <= before) {
      throw InternalError("counterexample analysis made no progress on " + to_string(sigma_, w));
    }
  };

  for (std::size_t i = w.size(); i >= 1; --i) {
    RAState state = h.automaton.initial_state();
    for (std::size_t k = 0; k + 1 < i; ++k) {
      auto next = h.automaton.step_first(state, w[k]);
      if (next.empty()) throw InternalError("hypothesis is not complete");
      state = std::move(next.front());
    }
    const DataSymbol& sym = w[i - 1];
    const ActionId alpha = sym.action;
    const DataWord& ul = h.access[state.location];
    const NodeId leaf = h.leaf[state.location];
    const auto guards = ct_->initial_guards(ul, alpha);
    const Guard* g = nullptr;
    for (const auto& cand : guards) {
      if (!sigma_.has_param(alpha) || cand.holds(state.valuation, *sym.value)) {
        g = &cand;
        break;
      }
    }
    if (!g) throw InternalError("hypothesis guards do not cover the counterexample");

    const SymbolicSuffix tail = from_counterexample(w.prefix(i), w.suffix_from(i));
    const SymbolicSuffix with_symbol = from_counterexample(w.prefix(i - 1), w.suffix_from(i - 1));
    const auto suffixes = ct_->ancestors(leaf);

    for (const DataWord& u : ct_->short_prefixes(leaf)) {
      auto gamma = find_bijection(tq_, u, ul, suffixes);
      if (!gamma) throw InternalError("short prefixes of one leaf are not equivalent");
      const DataWord tu = ct_->extension(u, alpha, apply_bijection(inverse(*gamma), *g));
      if (!ct_->in_U(tu)) continue;

      // Case 1: the transition leads somewhere the tail tells apart from
      // every location prefix there.
      const NodeId target = ct_->leaf_of(tu);
      bool matched = false;
      for (const DataWord& u2 : ct_->short_prefixes(target)) {
        if (find_bijection(tq_, tu, u2, {tail})) {
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (lambda) ct_->expand(tu);
        else ct_->refine(target, tail);
        done(i, "new_location", tu);
        return;
      }

      // Case 2: the symbol and tail reveal a guard missing at u.
      if (!sigma_.has_param(alpha)) continue;
      const auto values = u.data_values();
      for (const auto& b : tq_.query(u, with_symbol).branches) {
        DataValue d = fresh_value(u);
        if (b.guard.kind == SDTGuard::Kind::Equal && !b.guard.ref.is_param) {
          d = values[static_cast<std::size_t>(b.guard.ref.index - 1)];
        }
        const DataWord t2 = u.extended({alpha, d});
        if (ct_->in_U(t2)) continue;
        if (lambda) {
          ct_->sift(t2);
          expose_guard(u, alpha, t2, w.prefix(i), w.suffix_from(i));
        } else {
          ct_->refine(ct_->leaf_of(u), with_symbol);
        }
        done(i, "new_guard", t2);
        return;
      }
    }
  }
  throw InternalError("no decomposition of counterexample " + to_string(sigma_, w) +
                      " yields progress");
}

LearnResult Learner::learn(EquivalenceOracle& eq) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  double test_ms = 0;
  std::vector<std::size_t> sizes;
  std::size_t max_len = 0;

  close();
  Hypothesis h = hypothesis();
  while (true) {
    sizes.push_back(h.automaton.location_count());
    emit({{"event", "hypothesis"},
          {"index", sizes.size() - 1},
          {"locations", h.automaton.location_count()},
          {"transitions", h.automaton.transitions().size()},
          {"registers", h.automaton.total_registers()},
          {"resets", mq_.stats().total_resets()}});
    ++mq_.stats().equivalence_queries;
    const auto eq_start = clock::now();
    const auto cex = eq.find_counterexample(h.automaton);
    test_ms += std::chrono::duration<double, std::milli>(clock::now() - eq_start).count();
    if (!cex) break;
    ++mq_.stats().counterexamples;
    max_len = std::max(max_len, cex->size());
    emit({{"event", "counterexample"},
          {"word", to_string(sigma_, *cex)},
          {"length", cex->size()}});

    // A counterexample is analyzed until the hypothesis agrees with it.
    const bool expected = mq_.member(*cex);
    do {
      analyze(*cex);
      close();
      h = hypothesis();
    } while (h.automaton.accepts(*cex) != expected);
  }

  const double total_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
  LearnResult result{h.automaton, mq_.stats(), sizes, rounds_, max_len, fixes_,
                     total_ms - test_ms, test_ms};
  return result;
}

}  // namespace ralearn
