#include <doctest.h>

#include "support.hpp"

using namespace ralearn;
using support::suffix;
using support::w;

namespace {

struct Fixture {
  RegisterAutomaton sul;
  CountingOracle mq{sul};
  TreeOracle tq{sul.alphabet(), mq};
  ClassificationTree ct{tq};
  explicit Fixture(const std::string& name) : sul(support::model(name)) {}
  const Alphabet& S() const { return sul.alphabet(); }
  DataWord word(std::string_view text) const { return w(S(), text); }
};

void check_cohesion_and_separation(ClassificationTree& ct) {
  auto& tq = ct.tree_oracle();
  const auto leaves = ct.leaves();
  for (NodeId leaf : leaves) {
    const auto& n = ct.node(leaf);
    for (const auto& u : n.prefixes) {
      CHECK(find_bijection(tq, n.rep, u, ct.ancestors(leaf)).has_value());
    }
  }
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      const NodeId top = ct.lca(leaves[i], leaves[j]);
      CHECK_FALSE(find_bijection(tq, ct.node(leaves[i]).rep, ct.node(leaves[j]).rep,
                                 ct.ancestors(top)));
    }
  }
}

}  // namespace

TEST_CASE("initial tree and expansion of the empty word") {
  Fixture f("stack2");
  CHECK(f.ct.node_count() == 2);
  CHECK(f.ct.in_U(DataWord{}));
  CHECK_FALSE(f.ct.is_short(DataWord{}));

  f.ct.expand(DataWord{});
  CHECK(f.ct.is_short(DataWord{}));
  CHECK(f.ct.in_U(f.word("push(0)")));
  CHECK(f.ct.in_U(f.word("pop(0)")));
  CHECK(f.ct.U().size() == 3);
  const NodeId eps = f.ct.leaf_of(DataWord{});
  CHECK(f.ct.leaf_of(f.word("push(0)")) == eps);
  const NodeId sink = f.ct.leaf_of(f.word("pop(0)"));
  CHECK(sink != eps);
  CHECK(f.ct.accepting(eps));
  CHECK_FALSE(f.ct.accepting(sink));
  CHECK(f.ct.lca(eps, sink) == f.ct.root());
  CHECK(f.ct.short_prefixes(sink).empty());

  // Sifting again changes nothing.
  const auto nodes = f.ct.node_count();
  CHECK(f.ct.sift(f.word("pop(0)")) == sink);
  CHECK(f.ct.node_count() == nodes);

  f.ct.expand(f.word("pop(0)"));
  CHECK(f.ct.in_U(f.word("pop(0) push(1)")));
  CHECK(f.ct.in_U(f.word("pop(0) pop(1)")));
  CHECK(f.ct.leaf_of(f.word("pop(0) pop(1)")) == sink);
}

TEST_CASE("refine splits the empty word from push(0)") {
  Fixture f("stack2");
  f.ct.expand(DataWord{});
  const NodeId leaf = f.ct.leaf_of(DataWord{});
  f.ct.refine(leaf, suffix(f.S(), {"push", "push"}));
  CHECK_FALSE(f.ct.node(leaf).is_leaf());
  CHECK(f.ct.node(leaf).rep == DataWord{});
  const NodeId a = f.ct.leaf_of(DataWord{});
  const NodeId b = f.ct.leaf_of(f.word("push(0)"));
  CHECK(a != b);
  CHECK(f.ct.lca(a, b) == leaf);
  CHECK(f.ct.ancestors(b) ==
        std::vector<SymbolicSuffix>{SymbolicSuffix{}, suffix(f.S(), {"push", "push"})});
  check_cohesion_and_separation(f.ct);

  // A suffix that does not separate only deepens the tree.
  const NodeId before = f.ct.leaf_of(f.word("pop(0)"));
  f.ct.refine(before, suffix(f.S(), {"pop"}));
  CHECK(f.ct.node(before).children.size() == 1);
  CHECK(f.ct.leaf_of(f.word("pop(0)")) == f.ct.node(before).children[0]);

  f.ct.expand(f.word("push(0)"));
  f.ct.sift(f.word("push(0) push(1)"));
  f.ct.expand(f.word("push(0) push(1)"));
  CHECK(f.ct.in_U(f.word("push(0) push(1) push(2)")));
  CHECK(f.ct.in_U(f.word("push(0) push(1) pop(2)")));
}

TEST_CASE("extensions use representative values") {
  Fixture f("stack2");
  const auto pop = f.S().id_of("pop");
  const DataWord u = f.word("push(0)");
  CHECK(f.ct.extension(u, pop, Guard{{{Operand::param(), true, Operand::x(1)}}}) ==
        f.word("push(0) pop(0)"));
  CHECK(f.ct.extension(u, pop, Guard{}) == f.word("push(0) pop(1)"));
}

TEST_CASE("property: learned trees are cohesive, separated and suffix-closed") {
  for (const std::string name : {"stack2", "stack3", "fifo3", "login-like", "fig7"}) {
    for (auto algorithm : {Algorithm::SLLambda, Algorithm::SLCT}) {
      const auto sul = support::model(name);
      CountingOracle mq(sul);
      support::RunLog log;
      Learner learner(sul.alphabet(), mq,
                      {algorithm, true, 10000, [&](const nlohmann::json& e) { log.events.push_back(e); }});
      ExactEquivalenceOracle eq(sul);
      learner.learn(eq);
      auto& ct = learner.tree();
      CAPTURE(name);
      check_cohesion_and_separation(ct);

      // Re-sifting U reproduces the leaf map.
      std::map<DataWord, NodeId> before;
      for (const auto& u : ct.U()) before[u] = ct.leaf_of(u);
      const auto nodes = ct.node_count();
      for (const auto& [u, leaf] : before) CHECK(ct.sift(u) == leaf);
      CHECK(ct.node_count() == nodes);

      // S_p is prefix-closed and inside U.
      for (const auto& u : ct.S_p()) {
        CHECK(ct.in_U(u));
        if (!u.empty()) CHECK(ct.is_short(u.parent()));
      }

      // Suffix closure modulo restrictions, in SL^λ runs without expose_guard.
      if (algorithm != Algorithm::SLLambda || log.count("expose_guard")) continue;
      std::set<std::vector<ActionId>> shapes;
      for (const auto& v : ct.suffixes()) shapes.insert(v.actions());
      for (const auto& acts : shapes) {
        if (acts.empty()) continue;
        CHECK(shapes.count(std::vector<ActionId>(acts.begin() + 1, acts.end())) == 1);
      }
    }
  }
}
