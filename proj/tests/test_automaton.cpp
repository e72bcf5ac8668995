#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace ralearn;
using support::w;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

// Two locations: an accepting one looping on push, and an explicit sink on pop.
const char* kH0 = R"({
  "alphabet": [{"name": "push", "arity": 1}, {"name": "pop", "arity": 1}],
  "locations": [{"name": "l0", "registers": [], "accepting": true},
                {"name": "sink", "registers": [], "accepting": false}],
  "initial": "l0",
  "transitions": [
    {"from": "l0", "action": "push", "guard": [], "assign": {}, "to": "l0"},
    {"from": "l0", "action": "pop", "guard": [], "assign": {}, "to": "sink"},
    {"from": "sink", "action": "push", "guard": [], "assign": {}, "to": "sink"},
    {"from": "sink", "action": "pop", "guard": [], "assign": {}, "to": "sink"}]})";

std::string with_transition(const std::string& transition) {
  return R"({"alphabet": [{"name": "a", "arity": 1}],
    "locations": [{"name": "s", "registers": [], "accepting": true},
                  {"name": "t", "registers": ["x1"], "accepting": true}],
    "initial": "s", "transitions": [)" +
         transition + "]}";
}

}  // namespace

TEST_CASE("step on the stack automaton") {
  const auto ra = support::model("stack2");
  const auto& S = ra.alphabet();
  const auto push = S.id_of("push");
  const auto pop = S.id_of("pop");
  const auto l0 = ra.find_location("l0");
  const auto l1 = ra.find_location("l1");

  auto next = ra.step(ra.initial_state(), {push, 7});
  REQUIRE(next.size() == 1);
  CHECK(next[0] == RAState{l1, {{1, 7}}});
  CHECK(ra.step(next[0], {pop, 7}) == std::vector<RAState>{{l0, {}}});
  CHECK(ra.step(next[0], {pop, 8}).empty());
  CHECK_THROWS(ra.step(ra.initial_state(), {7, 0}));
}

TEST_CASE("accepts on the stack automaton") {
  const auto ra = support::model("stack2");
  const auto& S = ra.alphabet();
  CHECK(ra.accepts(w(S, "push(0) push(1) pop(1)")));
  CHECK_FALSE(ra.accepts(w(S, "push(0) push(1) pop(2)")));
  CHECK_FALSE(ra.accepts(w(S, "push(0) push(1) push(2)")));
  CHECK(ra.accepts(DataWord{}));
  CHECK(ra.accepts(w(S, "push(0) push(0) pop(0) pop(0)")));
  CHECK_FALSE(ra.accepts(w(S, "push(0) push(1) pop(0)")));
}

TEST_CASE("load validates and round-trips") {
  const auto ra = support::model("stack2");
  CHECK(ra.location_count() == 3);
  CHECK(ra.max_registers() == 2);
  const std::string text = save_automaton(ra);
  CHECK(save_automaton(load_automaton(text)) == text);

  CHECK_THROWS_AS(load_automaton(with_transition(
                      R"({"from": "s", "action": "a", "guard": [], "assign": {"x2": "p"}, "to": "t"})")),
                  ModelError);
  CHECK_THROWS_AS(load_automaton(with_transition(
                      R"({"from": "s", "action": "a", "guard": [], "assign": {"x1": "x1"}, "to": "t"})")),
                  ModelError);
  CHECK_THROWS_AS(load_automaton(with_transition(
                      R"({"from": "s", "action": "a", "guard": [{"lhs": "p", "op": "==", "rhs": "x1"}], "assign": {"x1": "p"}, "to": "t"})")),
                  ModelError);
  CHECK_THROWS_AS(load_automaton(with_transition(
                      R"({"from": "s", "action": "b", "guard": [], "assign": {"x1": "p"}, "to": "t"})")),
                  ModelError);
  CHECK_THROWS_AS(load_automaton("{ not json"), ModelError);
  CHECK_NOTHROW(load_automaton(with_transition(
      R"({"from": "s", "action": "a", "guard": [], "assign": {"x1": "p"}, "to": "t"})")));
}

TEST_CASE("unsatisfiable guards are rejected") {
  Guard g{{{Operand::param(), true, Operand::x(1)}, {Operand::param(), false, Operand::x(1)}}};
  CHECK_FALSE(g.satisfiable());
  Guard h{{{Operand::param(), false, Operand::x(1)}, {Operand::param(), false, Operand::x(2)}}};
  CHECK(h.satisfiable());
  CHECK(h.holds({{1, 0}, {2, 1}}, 2));
  CHECK_FALSE(h.holds({{1, 0}, {2, 1}}, 1));
}

TEST_CASE("DOT export") {
  const auto stack = export_dot(support::model("stack2"));
  CHECK(count(stack, "shape=doublecircle") == 3);
  CHECK(count(stack, "shape=circle") == 0);
  CHECK(stack.find("sink") == std::string::npos);

  const auto h0 = export_dot(load_automaton(kH0));
  CHECK(count(h0, "shape=doublecircle") + count(h0, "shape=circle") == 2);

  const RegisterAutomaton empty(Alphabet({{"a", 1}}), {{"l0", {}, false}}, 0, {});
  const auto e = export_dot(empty);
  CHECK(count(e, "shape=circle") == 1);
  CHECK(count(e, "->") == 1);  // only the start arrow
}

TEST_CASE("property: benchmark models are determinate and rename-invariant on random words") {
  std::mt19937 rng(11);
  for (const auto& name : support::benchmark_names()) {
    const auto ra = support::model(name);
    const auto& S = ra.alphabet();
    for (int iter = 0; iter < 10000; ++iter) {
      std::vector<DataSymbol> syms;
      const std::size_t len = rng() % 9;
      for (std::size_t i = 0; i < len; ++i) {
        const ActionId a = rng() % S.size();
        syms.push_back({a, S.has_param(a) ? std::optional<DataValue>(rng() % 4) : std::nullopt});
      }
      const DataWord x(syms);
      CHECK_FALSE(ra.mixed(ra.run(x)));
      std::vector<DataValue> perm{5, 9, 2, 7};
      std::shuffle(perm.begin(), perm.end(), rng);
      for (auto& s : syms) if (s.value) s.value = perm[*s.value];
      CHECK(ra.accepts(x) == ra.accepts(DataWord(syms)));
    }
  }
}

TEST_CASE("property: a fresh value never satisfies an equality literal") {
  for (const auto& name : support::benchmark_names()) {
    const auto ra = support::model(name);
    for (const auto& t : ra.transitions()) {
      for (const auto& lit : t.guard.literals) {
        if (!lit.equal) continue;
        Valuation mu;
        for (int x : ra.locations()[t.from].registers) mu.emplace_back(x, static_cast<DataValue>(x));
        CHECK_FALSE(t.guard.holds(mu, 1000));
      }
    }
  }
}
