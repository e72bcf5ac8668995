#include "ralearn/restrict.hpp"

#include <algorithm>
#include <numeric>

namespace ralearn {

using R = ParamRestriction;

SymbolicSuffix restrict_from_counterexample(const Alphabet& sigma, const DataWord& u,
                                            const DataWord& v) {
  const auto prefix_values = u.data_values();
  const auto values = v.data_values();
  std::vector<R> rs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const DataValue d = values[i];
    const bool in_prefix =
        std::find(prefix_values.begin(), prefix_values.end(), d) != prefix_values.end();
    const auto first = static_cast<std::size_t>(
        std::find(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(i), d) -
        values.begin());
    if (!in_prefix && first == i) {
      rs.push_back(R::fresh());
    } else if (first < i && rs[first].is_fresh()) {
      rs.push_back(R::equals(static_cast<int>(first) + 1));
    } else {
      rs.push_back(R::unrestricted());
    }
  }
  return actions_of(sigma, v).with_restrictions(std::move(rs));
}

namespace {

// Restrictions of alpha . v that are fixed before looking at any tree: p1 by
// the freshness of d, v's own restrictions shifted.
std::vector<R> base_restrictions(bool has_p1, bool p1_fresh, const SymbolicSuffix& v) {
  std::vector<R> rs;
  if (has_p1) rs.push_back(p1_fresh ? R::fresh() : R::unrestricted());
  const int shift = has_p1 ? 1 : 0;
  for (const auto& r : v.restrictions()) {
    rs.push_back(r.is_equals() ? R::equals(r.target + shift) : r);
  }
  return rs;
}

std::size_t count_unrestricted(const std::vector<R>& rs) {
  return static_cast<std::size_t>(
      std::count_if(rs.begin(), rs.end(), [](const R& r) { return r.is_unrestricted(); }));
}

bool is_fresh_in(const DataWord& u, std::optional<DataValue> d) {
  if (!d) return false;
  const auto values = u.data_values();
  return std::find(values.begin(), values.end(), *d) == values.end();
}

// Parameter of alpha . v that a guard reference of T(u . alpha(d), v) names,
// if it names one: the new position of alpha is p1, p_j of v is p_{j+shift}.
std::optional<int> as_param(const Ref& ref, std::size_t prefix_registers, bool has_p1) {
  const int shift = has_p1 ? 1 : 0;
  if (ref.is_param) return ref.index + shift;
  if (has_p1 && static_cast<std::size_t>(ref.index) == prefix_registers + 1) return 1;
  return std::nullopt;
}

bool free_kind(const SDTGuard& g) {
  return g.kind == SDTGuard::Kind::True || g.kind == SDTGuard::Kind::Else;
}

}  // namespace

SymbolicSuffix restrict_prepend(const Alphabet& sigma, const DataWord& u, ActionId alpha,
                                std::optional<DataValue> d, const SymbolicSuffix& v,
                                const SDT& t, const std::vector<int>& targets,
                                bool force_unrestricted_first) {
  const bool has_p1 = sigma.has_param(alpha);
  const int shift = has_p1 ? 1 : 0;
  const std::size_t n = u.data_count();
  const auto base =
      base_restrictions(has_p1, !force_unrestricted_first && is_fresh_in(u, d), v);

  std::optional<std::vector<R>> best;
  for (const auto& path : paths(t)) {
    const bool reveals = std::any_of(path.guards.begin(), path.guards.end(), [&](const auto& g) {
      return g.kind == SDTGuard::Kind::Equal && !g.ref.is_param &&
             std::find(targets.begin(), targets.end(), g.ref.index) != targets.end();
    });
    if (!reveals) continue;
    std::vector<R> rs = base;
    for (std::size_t i = 0; i < path.guards.size(); ++i) {
      R& r = rs[i + static_cast<std::size_t>(shift)];
      if (!v.restrictions()[i].is_unrestricted()) continue;
      const SDTGuard& g = path.guards[i];
      if (free_kind(g)) {
        r = R::fresh();
        continue;
      }
      const auto q = as_param(g.ref, n, has_p1);
      r = q && !rs[static_cast<std::size_t>(*q - 1)].is_unrestricted() ? R::equals(*q)
                                                                       : R::unrestricted();
    }
    if (!best || count_unrestricted(rs) < count_unrestricted(*best)) best = std::move(rs);
  }
  return prepend(sigma, alpha, v).with_restrictions(best ? *best : base);
}

namespace {

// Conjunctions of equalities and disequalities over a finite set of
// variables; satisfiable over an infinite domain iff no disequality joins
// two members of one equality class.
class Constraints {
 public:
  explicit Constraints(std::size_t vars) : parent_(vars) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void equal(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }
  void differ(std::size_t a, std::size_t b) { diseq_.emplace_back(a, b); }
  bool satisfiable() {
    return std::none_of(diseq_.begin(), diseq_.end(),
                        [&](const auto& p) { return find(p.first) == find(p.second); });
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::pair<std::size_t, std::size_t>> diseq_;
};

// Variables: parameters of alpha . v, the registers of u, then those of u'.
// With distinct prefixes both extensions read the same parameter, so their
// new positions are p1. When the prefixes coincide the registers are shared
// and each extension gets its own new position, tied to its own d.
class Layout {
 public:
  Layout(bool has_p1, std::size_t params, const Extension& lhs, const Extension& rhs)
      : has_p1_(has_p1),
        params_(params),
        n_lhs_(lhs.prefix.data_count()),
        n_rhs_(rhs.prefix.data_count()),
        shared_(lhs.prefix == rhs.prefix) {}

  std::size_t size() const { return params_ + n_lhs_ + (shared_ ? 0 : n_rhs_) + 2; }
  std::size_t param(int p) const { return static_cast<std::size_t>(p - 1); }
  std::size_t reg(bool lhs, int k) const {
    const std::size_t n = lhs ? n_lhs_ : n_rhs_;
    if (has_p1_ && static_cast<std::size_t>(k) == n + 1) {
      if (!shared_) return param(1);
      return size() - (lhs ? 2 : 1);
    }
    const std::size_t base = params_ + (lhs || shared_ ? 0 : n_lhs_);
    return base + static_cast<std::size_t>(k - 1);
  }
  std::size_t ref(bool lhs, const Ref& r) const {
    return r.is_param ? param(r.index + (has_p1_ ? 1 : 0)) : reg(lhs, r.index);
  }
  std::size_t registers(bool lhs) const { return lhs ? n_lhs_ : n_rhs_; }
  bool shared() const { return shared_; }

 private:
  bool has_p1_;
  std::size_t params_;
  std::size_t n_lhs_, n_rhs_;
  bool shared_;
};

void constrain_prefix(Constraints& c, const Layout& l, bool lhs, const Extension& e) {
  const auto values = e.prefix.data_values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      const auto a = l.reg(lhs, static_cast<int>(i) + 1);
      const auto b = l.reg(lhs, static_cast<int>(j) + 1);
      if (values[i] == values[j]) c.equal(a, b);
      else c.differ(a, b);
    }
  }
  if (!e.value) return;
  const auto added = l.reg(lhs, static_cast<int>(values.size()) + 1);
  const auto hit = std::find(values.begin(), values.end(), *e.value);
  if (hit != values.end()) {
    c.equal(added, l.reg(lhs, static_cast<int>(hit - values.begin()) + 1));
    return;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    c.differ(added, l.reg(lhs, static_cast<int>(i) + 1));
  }
}

void constrain_path(Constraints& c, const Layout& l, bool lhs, const SDTPath& path, int shift) {
  for (std::size_t i = 0; i < path.guards.size(); ++i) {
    const auto self = l.param(static_cast<int>(i) + 1 + shift);
    const SDTGuard& g = path.guards[i];
    if (g.kind == SDTGuard::Kind::Equal) c.equal(self, l.ref(lhs, g.ref));
    for (const auto& r : g.excluded) c.differ(self, l.ref(lhs, r));
  }
}

void constrain_restrictions(Constraints& c, const Layout& l, const std::vector<R>& rs) {
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const auto self = l.param(static_cast<int>(i) + 1);
    if (rs[i].is_equals()) {
      // With a shared prefix p1 stands for a different value on each side.
      if (rs[i].target == 1 && l.shared()) continue;
      c.equal(self, l.param(rs[i].target));
    } else if (rs[i].is_fresh()) {
      for (std::size_t j = 0; j < i; ++j) c.differ(self, l.param(static_cast<int>(j) + 1));
      for (bool side : {true, false}) {
        if (!side && l.shared()) continue;
        for (std::size_t k = 1; k <= l.registers(side); ++k) {
          const auto reg = l.reg(side, static_cast<int>(k));
          if (reg != self) c.differ(self, reg);
        }
      }
    }
  }
}

}  // namespace

std::vector<SeparatingCandidate> separating_candidates(const Alphabet& sigma, ActionId alpha,
                                                       const Extension& lhs,
                                                       const Extension& rhs,
                                                       const SymbolicSuffix& v) {
  const bool has_p1 = sigma.has_param(alpha);
  const int shift = has_p1 ? 1 : 0;
  const std::size_t params = v.param_count() + static_cast<std::size_t>(shift);
  const Layout layout(has_p1, params, lhs, rhs);
  const auto base = base_restrictions(
      has_p1, is_fresh_in(lhs.prefix, lhs.value) && is_fresh_in(rhs.prefix, rhs.value), v);
  const std::size_t n_lhs = lhs.prefix.data_count();
  const std::size_t n_rhs = rhs.prefix.data_count();
  const SymbolicSuffix shape = prepend(sigma, alpha, v);

  auto satisfiable = [&](const SDTPath& a, const SDTPath& b, const std::vector<R>& rs) {
    Constraints c(layout.size());
    constrain_prefix(c, layout, true, lhs);
    constrain_prefix(c, layout, false, rhs);
    constrain_path(c, layout, true, a, shift);
    constrain_path(c, layout, false, b, shift);
    constrain_restrictions(c, layout, rs);
    return c.satisfiable();
  };

  const auto left = paths(*lhs.tree);
  const auto right = paths(*rhs.tree);
  std::vector<SeparatingCandidate> out;
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t j = 0; j < right.size(); ++j) {
      const SDTPath& a = left[i];
      const SDTPath& b = right[j];
      if (a.accepting == b.accepting || !satisfiable(a, b, base)) continue;
      std::vector<R> rs = base;
      for (std::size_t k = 0; k < a.guards.size(); ++k) {
        if (!v.restrictions()[k].is_unrestricted()) continue;
        R& r = rs[k + static_cast<std::size_t>(shift)];
        const SDTGuard& g = a.guards[k];
        const SDTGuard& h = b.guards[k];
        if (free_kind(g) && free_kind(h)) {
          r = R::fresh();
          continue;
        }
        r = R::unrestricted();
        if (g.kind != SDTGuard::Kind::Equal) continue;
        const auto q = as_param(g.ref, n_lhs, has_p1);
        if (!q || rs[static_cast<std::size_t>(*q - 1)].is_unrestricted()) continue;
        const bool compatible = free_kind(h) || as_param(h.ref, n_rhs, has_p1) == q;
        if (compatible) r = R::equals(*q);
      }
      if (!satisfiable(a, b, rs)) rs = base;
      out.push_back({i, j, shape.with_restrictions(std::move(rs))});
    }
  }
  return out;
}

SymbolicSuffix restrict_separating(const Alphabet& sigma, ActionId alpha, const Extension& lhs,
                                   const Extension& rhs, const SymbolicSuffix& v) {
  const auto candidates = separating_candidates(sigma, alpha, lhs, rhs, v);
  if (candidates.empty()) throw std::logic_error("no separating path pair");
  const SeparatingCandidate* best = &candidates.front();
  for (const auto& c : candidates) {
    if (c.suffix.unrestricted_count() < best->suffix.unrestricted_count()) best = &c;
  }
  return best->suffix;
}

}  // namespace ralearn
