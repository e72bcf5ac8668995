#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace ralearn;
using support::suffix;
using support::w;

namespace {

const Alphabet& S() {
  static const Alphabet sigma({{"push", 1}, {"pop", 1}, {"reset", 0}});
  return sigma;
}

using R = ParamRestriction;

// Independent count: product over parameters of the number of choices.
std::size_t brute_count(const SymbolicSuffix& v, const DataWord& prefix) {
  std::size_t n = 0;
  support::canonical_suffixes(S(), v.actions(), prefix.data_values(), [&](const DataWord& s) {
    const auto vals = s.data_values();
    const auto ctx = prefix.data_values();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const auto& r = v.restriction(static_cast<int>(i) + 1);
      if (r.is_fresh()) {
        for (auto c : ctx) if (c == vals[i]) return;
        for (std::size_t j = 0; j < i; ++j) if (vals[j] == vals[i]) return;
      } else if (r.is_equals() && vals[r.target - 1] != vals[i]) {
        return;
      }
    }
    ++n;
  });
  return n;
}

}  // namespace

TEST_CASE("parse and print round trip") {
  const DataWord x = w(S(), "push(0) reset() pop(3)");
  CHECK(x.size() == 3);
  CHECK(x.data_values() == std::vector<DataValue>{0, 3});
  CHECK(to_string(S(), x) == "push(0) reset() pop(3)");
  CHECK(to_string(S(), DataWord{}) == "ε");
  CHECK(make_word(S(), {{"push", 1}, {"reset", 9}}) == w(S(), "push(1) reset()"));
  CHECK_THROWS(w(S(), "push()"));
  CHECK_THROWS(w(S(), "reset(1)"));
  CHECK_THROWS(w(S(), "jump(1)"));
}

TEST_CASE("prefix, suffix, concat and shortlex") {
  const DataWord x = w(S(), "push(0) push(1) pop(1)");
  CHECK(x.prefix(1) == w(S(), "push(0)"));
  CHECK(x.suffix_from(1) == w(S(), "push(1) pop(1)"));
  CHECK(x.prefix(1).concat(x.suffix_from(1)) == x);
  CHECK(x.parent() == w(S(), "push(0) push(1)"));
  CHECK(shortlex_less(w(S(), "pop(0)"), w(S(), "push(0) push(0)")));
  CHECK(shortlex_less(w(S(), "push(0)"), w(S(), "pop(0)")));
  CHECK_FALSE(shortlex_less(x, x));
}

TEST_CASE("actions_of erases data") {
  CHECK(to_string(S(), actions_of(S(), w(S(), "push(0) pop(0)"))) == "push(p1) pop(p2)");
  CHECK(actions_of(S(), DataWord{}).empty());
  CHECK(to_string(S(), actions_of(S(), w(S(), "pop(3)"))) == "pop(p1)");
  CHECK(actions_of(S(), w(S(), "push(0) reset() pop(0)")).param_count() == 2);
}

TEST_CASE("prepend shifts parameters and drops restrictions") {
  const auto push = S().id_of("push");
  const auto pop = S().id_of("pop");
  CHECK(to_string(S(), prepend(S(), push, SymbolicSuffix{})) == "push(p1)");
  CHECK(to_string(S(), prepend(S(), push, suffix(S(), {"push"}))) == "push(p1) push(p2)");
  CHECK(to_string(S(), prepend(S(), pop, SymbolicSuffix{})) == "pop(p1)");
  const auto r = suffix(S(), {"push", "pop"}, {R::fresh(), R::equals(1)});
  CHECK(prepend(S(), push, r).is_unrestricted());
}

TEST_CASE("restriction rendering and validation") {
  const auto v = suffix(S(), {"push", "pop", "push"}, {R::fresh(), R::equals(1), R::unrestricted()});
  CHECK(to_string(S(), v) == "push(p1|fresh) pop(p2|=p1) push(p3)");
  CHECK(v.unrestricted_count() == 1);
  CHECK(v.without_restrictions().is_unrestricted());
  CHECK_THROWS(suffix(S(), {"push", "pop"}, {R::equals(1), R::unrestricted()}));
  CHECK_THROWS(suffix(S(), {"push", "pop"}, {R::equals(2), R::unrestricted()}));
}

TEST_CASE("instantiation counts") {
  const DataWord u = w(S(), "push(0)");
  CHECK(instantiations(S(), suffix(S(), {"push", "pop"}), u).size() == 5);
  CHECK(instantiations(S(), suffix(S(), {"push", "push"}, {R::fresh(), R::fresh()}), u).size() == 1);
  CHECK(instantiations(S(), suffix(S(), {"push", "pop", "pop"},
                                   {R::fresh(), R::equals(1), R::unrestricted()}),
                       u)
            .size() == 3);
  CHECK(instantiations(S(), SymbolicSuffix{}, u) == std::vector<DataWord>{DataWord{}});
  CHECK(instantiations(S(), suffix(S(), {"reset"}), u).size() == 1);
}

TEST_CASE("property: instantiations match brute force and honor restrictions") {
  std::mt19937 rng(3);
  const std::vector<std::string_view> names{"push", "pop", "reset"};
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<ActionId> acts;
    const std::size_t len = rng() % 4;
    for (std::size_t i = 0; i < len; ++i) acts.push_back(rng() % 3);
    SymbolicSuffix v(S(), acts);
    std::vector<R> rs;
    for (std::size_t i = 0; i < v.param_count(); ++i) {
      std::vector<int> fresh_before;
      for (std::size_t j = 0; j < i; ++j) {
        if (rs[j].is_fresh()) fresh_before.push_back(static_cast<int>(j) + 1);
      }
      const int pick = static_cast<int>(rng() % 3);
      if (pick == 1) rs.push_back(R::fresh());
      else if (pick == 2 && !fresh_before.empty())
        rs.push_back(R::equals(fresh_before[rng() % fresh_before.size()]));
      else rs.push_back(R::unrestricted());
    }
    const SymbolicSuffix restricted = v.with_restrictions(rs);
    std::vector<DataSymbol> pre;
    for (std::size_t i = 0; i < rng() % 3; ++i) pre.push_back({0, static_cast<DataValue>(rng() % 2)});
    const DataWord u(pre);

    const auto all = instantiations(S(), v, u);
    const auto some = instantiations(S(), restricted, u);
    CHECK(all.size() == brute_count(v, u));
    CHECK(some.size() == brute_count(restricted, u));
    CHECK(some.size() <= all.size());
    for (std::size_t a = 0; a < all.size(); ++a) {
      for (std::size_t b = a + 1; b < all.size(); ++b) {
        CHECK_FALSE(indistinguishable(u.concat(all[a]), u.concat(all[b])));
      }
    }
  }
}
