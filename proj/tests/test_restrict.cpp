#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace ralearn;
using support::suffix;
using support::w;
using R = ParamRestriction;
using G = SDTGuard;

namespace {

SDT node(std::vector<SDT::Branch> b) { return {false, std::move(b)}; }
const SDT plus = SDT::leaf(true);
const SDT minus = SDT::leaf(false);

const Alphabet& A() {
  static const Alphabet sigma({{"alpha", 1}});
  return sigma;
}

// Tree for alpha(0) alpha(1) over alpha(p1) alpha(p2): accepting exactly on
// (p1 = x2, p2 = x1) and (p1 != x2, p2 = x2).
SDT lhs_tree() {
  return node({{G::equal(Ref::x(2)),
                node({{G::equal(Ref::x(1)), plus}, {G::otherwise({Ref::x(1)}), minus}})},
               {G::otherwise({Ref::x(2)}),
                node({{G::equal(Ref::x(2)), plus}, {G::otherwise({Ref::x(2)}), minus}})}});
}

// Tree for alpha(0): rejecting everywhere, drawn with its split on x1.
SDT rhs_tree() {
  return node({{G::equal(Ref::x(1)), node({{G::top(), minus}})},
               {G::otherwise({Ref::x(1)}), node({{G::top(), minus}})}});
}

std::vector<R> restrictions(const SymbolicSuffix& v) { return v.restrictions(); }

}  // namespace

TEST_CASE("restrictions from a counterexample split") {
  const Alphabet S({{"push", 1}, {"pop", 1}});
  CHECK(restrictions(restrict_from_counterexample(S, w(S, "push(0)"),
                                                  w(S, "push(1) pop(1) pop(0)"))) ==
        std::vector<R>{R::fresh(), R::equals(1), R::unrestricted()});
  CHECK(restrictions(restrict_from_counterexample(S, DataWord{}, w(S, "push(1) push(2)"))) ==
        std::vector<R>{R::fresh(), R::fresh()});
  CHECK(restrictions(restrict_from_counterexample(S, w(S, "push(0)"), w(S, "pop(0)"))) ==
        std::vector<R>{R::unrestricted()});
  // Equality to a non-fresh parameter stays unrestricted.
  CHECK(restrictions(restrict_from_counterexample(S, w(S, "push(0)"), w(S, "pop(0) pop(0)"))) ==
        std::vector<R>{R::unrestricted(), R::unrestricted()});
}

TEST_CASE("restricted counterexample suffix shrinks the tree query") {
  const auto sul = support::model("stack2");
  const auto& S = sul.alphabet();
  const auto v = restrict_from_counterexample(S, w(S, "push(0)"), w(S, "push(1) pop(1) pop(0)"));
  CountingOracle restricted(sul), plain(sul);
  tree_query(S, restricted, w(S, "push(0)"), v);
  tree_query(S, plain, w(S, "push(0)"), v.without_restrictions());
  CHECK(restricted.stats().learn_resets == 3);
  CHECK(plain.stats().learn_resets == 15);
}

TEST_CASE("restrict_prepend") {
  const auto alpha = A().id_of("alpha");
  const SymbolicSuffix v = suffix(A(), {"alpha", "alpha"});
  const SDT t = lhs_tree();
  CHECK(restrictions(restrict_prepend(A(), w(A(), "alpha(0)"), alpha, 1, v, t, {1})) ==
        std::vector<R>{R::fresh(), R::equals(1), R::unrestricted()});
  // Nothing sought: v's own restrictions, p1 by freshness of d.
  CHECK(restrictions(restrict_prepend(A(), w(A(), "alpha(0)"), alpha, 1, v, t, {})) ==
        std::vector<R>{R::fresh(), R::unrestricted(), R::unrestricted()});
  const SymbolicSuffix vr = suffix(A(), {"alpha", "alpha"}, {R::fresh(), R::equals(1)});
  CHECK(restrictions(restrict_prepend(A(), w(A(), "alpha(0)"), alpha, 1, vr, t, {})) ==
        std::vector<R>{R::fresh(), R::fresh(), R::equals(2)});
  // d repeats a prefix value: p1 cannot be fresh.
  CHECK(restrictions(restrict_prepend(A(), w(A(), "alpha(0)"), alpha, 0, v, t, {}))[0] ==
        R::unrestricted());
  CHECK(restrictions(restrict_prepend(A(), w(A(), "alpha(0)"), alpha, 1, v, t, {1}, true))[0] ==
        R::unrestricted());
}

TEST_CASE("restrict_separating on the two-prefix example") {
  const auto alpha = A().id_of("alpha");
  const SymbolicSuffix v = suffix(A(), {"alpha", "alpha"});
  const SDT t1 = lhs_tree();
  const SDT t2 = rhs_tree();
  const Extension lhs{w(A(), "alpha(0)"), 1, &t1};
  const Extension rhs{DataWord{}, 0, &t2};

  CHECK(restrictions(restrict_separating(A(), alpha, lhs, rhs, v)) ==
        std::vector<R>{R::fresh(), R::fresh(), R::equals(1)});

  const auto cands = separating_candidates(A(), alpha, lhs, rhs, v);
  REQUIRE(cands.size() == 2);
  // The first pair goes through p1 = x2 then p2 = x1.
  CHECK(restrictions(cands[0].suffix) == std::vector<R>{R::fresh(), R::equals(1), R::unrestricted()});
  CHECK(restrictions(cands[1].suffix) == std::vector<R>{R::fresh(), R::fresh(), R::equals(1)});

  // Same prefix on both sides (transition consistency a): alpha(0) alpha(0)
  // and alpha(0) alpha(1) disagree on whether p1 repeats the new value.
  const SDT t3 = node({{G::equal(Ref::x(2)), plus}, {G::otherwise({Ref::x(2)}), minus}});
  const Extension a{w(A(), "alpha(0)"), 0, &t3};
  const Extension b{w(A(), "alpha(0)"), 1, &t3};
  const SymbolicSuffix one = suffix(A(), {"alpha"});
  CHECK(restrictions(restrict_separating(A(), alpha, a, b, one)) ==
        std::vector<R>{R::unrestricted(), R::unrestricted()});

  const SDT none = node({{G::top(), node({{G::top(), minus}})}});
  const Extension c{w(A(), "alpha(0)"), 1, &none};
  CHECK_THROWS_AS(restrict_separating(A(), alpha, c, rhs, v), std::logic_error);
}

TEST_CASE("property: restricted tree queries agree with unrestricted ones and never cost more") {
  std::mt19937 rng(17);
  for (const auto& name : support::benchmark_names()) {
    const auto sul = support::model(name);
    const auto& S = sul.alphabet();
    for (int iter = 0; iter < 60; ++iter) {
      // A random counterexample-like split gives a legal restricted suffix.
      std::vector<DataSymbol> syms;
      const std::size_t len = 1 + rng() % 5;
      for (std::size_t i = 0; i < len; ++i) {
        const ActionId a = rng() % S.size();
        syms.push_back({a, S.has_param(a) ? std::optional<DataValue>(rng() % 3) : std::nullopt});
      }
      const DataWord word(syms);
      const std::size_t split = rng() % (len + 1);
      const DataWord u = word.prefix(split);
      const auto v = restrict_from_counterexample(S, u, word.suffix_from(split));
      for (const auto& r : v.restrictions()) {
        if (r.is_equals()) CHECK(v.restriction(r.target).is_fresh());
      }
      CountingOracle mr(sul), mp(sul);
      const SDT tr = tree_query(S, mr, u, v);
      const SDT tp = tree_query(S, mp, u, v.without_restrictions());
      CHECK(mr.stats().learn_resets <= mp.stats().learn_resets);
      for (const auto& s : instantiations(S, v, u)) CHECK(classify(tr, u, s) == classify(tp, u, s));
    }
  }
}
