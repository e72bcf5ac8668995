#include "ralearn/sdt.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace ralearn {

std::string to_string(const Ref& r) {
  return (r.is_param ? "p" : "x") + std::to_string(r.index);
}

namespace {

void collect_paths(const SDT& t, std::vector<SDTGuard>& prefix, std::vector<SDTPath>& out) {
  if (t.is_leaf()) {
    out.push_back({prefix, t.accepting});
    return;
  }
  for (const auto& b : t.branches) {
    prefix.push_back(b.guard);
    collect_paths(b.child, prefix, out);
    prefix.pop_back();
  }
}

DataValue ref_value(const Ref& r, const std::vector<DataValue>& regs,
                    const std::vector<DataValue>& params) {
  const auto& src = r.is_param ? params : regs;
  if (r.index < 1 || static_cast<std::size_t>(r.index) > src.size()) {
    throw std::out_of_range("SDT guard references " + to_string(r) + " out of range");
  }
  return src[static_cast<std::size_t>(r.index - 1)];
}

bool guard_holds(const SDTGuard& g, DataValue value, const std::vector<DataValue>& regs,
                 const std::vector<DataValue>& params) {
  switch (g.kind) {
    case SDTGuard::Kind::True:
      return true;
    case SDTGuard::Kind::Equal:
      return value == ref_value(g.ref, regs, params);
    case SDTGuard::Kind::Else:
      return std::none_of(g.excluded.begin(), g.excluded.end(),
                          [&](const Ref& r) { return value == ref_value(r, regs, params); });
  }
  return false;
}

// Canonical order: equality branches by reference, else branch last.
void sort_branches(SDT& t) {
  std::stable_sort(t.branches.begin(), t.branches.end(), [](const auto& a, const auto& b) {
    const bool ea = a.guard.kind == SDTGuard::Kind::Equal;
    const bool eb = b.guard.kind == SDTGuard::Kind::Equal;
    if (ea != eb) return ea;
    return ea && a.guard.ref < b.guard.ref;
  });
}

struct Sample {
  std::vector<DataValue> params;
  bool outcome;
};

class Builder {
 public:
  Builder(const Alphabet& sigma, CountingOracle& mq, const DataWord& u, const SymbolicSuffix& v)
      : sigma_(sigma), mq_(mq), u_(u), v_(v), regs_(u.data_values()) {}

  SDT build(std::vector<DataValue>& params, std::vector<Sample>& samples) {
    const std::size_t i = params.size();
    if (i == v_.param_count()) {
      const bool outcome = mq_.member(instance(params));
      samples.push_back({params, outcome});
      return SDT::leaf(outcome);
    }
    std::vector<DataValue> context = regs_;
    context.insert(context.end(), params.begin(), params.end());
    const auto& r = v_.restriction(static_cast<int>(i) + 1);

    if (!r.is_unrestricted()) {
      const DataValue d = r.is_fresh() ? fresh_value(context)
                                       : params[static_cast<std::size_t>(r.target - 1)];
      params.push_back(d);
      SDT child = build(params, samples);
      params.pop_back();
      return SDT{false, {{SDTGuard::top(), std::move(child)}}};
    }

    // Samples are appended in place; child k owns [bounds[k], bounds[k+1]).
    const auto candidates = potential_values(context);
    std::vector<SDT> subtrees;
    std::vector<std::size_t> bounds{samples.size()};
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      params.push_back(candidates[k]);
      subtrees.push_back(build(params, samples));
      params.pop_back();
      bounds.push_back(samples.size());
    }

    const SDT& fresh_tree = subtrees.back();
    SDT node;
    std::vector<Ref> kept;
    for (std::size_t k = 0; k + 1 < candidates.size(); ++k) {
      // The equality branch is redundant if the fresh branch, evaluated with
      // this value substituted, already explains every observation below it.
      const bool redundant =
          std::all_of(samples.begin() + static_cast<std::ptrdiff_t>(bounds[k]),
                      samples.begin() + static_cast<std::ptrdiff_t>(bounds[k + 1]),
                      [&](const Sample& s) {
            const Evaluation e = evaluate(fresh_tree, regs_, s.params, i + 1);
            return s.outcome ? (e.accept && !e.reject) : (e.reject && !e.accept);
          });
      if (redundant) continue;
      const Ref ref = ref_of(candidates[k], params);
      kept.push_back(ref);
      node.branches.push_back({SDTGuard::equal(ref), std::move(subtrees[k])});
    }
    std::sort(kept.begin(), kept.end());
    if (kept.empty()) {
      node.branches.push_back({SDTGuard::top(), std::move(subtrees.back())});
    } else {
      node.branches.push_back({SDTGuard::otherwise(kept), std::move(subtrees.back())});
    }
    sort_branches(node);
    return node;
  }

 private:
  // Prefer the earliest suffix parameter carrying the value, else the
  // register of its latest occurrence in the prefix, so that a value read
  // again by the last symbol is attributed to that symbol.
  Ref ref_of(DataValue c, const std::vector<DataValue>& params) const {
    for (std::size_t j = 0; j < params.size(); ++j) {
      if (params[j] == c) return Ref::p(static_cast<int>(j) + 1);
    }
    for (std::size_t j = regs_.size(); j-- > 0;) {
      if (regs_[j] == c) return Ref::x(static_cast<int>(j) + 1);
    }
    throw std::logic_error("candidate value has no reference");
  }

  DataWord instance(const std::vector<DataValue>& params) const {
    DataWord w = u_;
    w.reserve(u_.size() + v_.length());
    std::size_t next = 0;
    for (std::size_t pos = 0; pos < v_.length(); ++pos) {
      const ActionId a = v_.actions()[pos];
      if (sigma_.has_param(a)) w.append({a, params[next++]});
      else w.append({a, std::nullopt});
    }
    return w;
  }

  const Alphabet& sigma_;
  CountingOracle& mq_;
  const DataWord& u_;
  const SymbolicSuffix& v_;
  std::vector<DataValue> regs_;
};

}  // namespace

std::vector<SDTPath> paths(const SDT& t) {
  std::vector<SDTPath> out;
  std::vector<SDTGuard> prefix;
  collect_paths(t, prefix, out);
  return out;
}

Evaluation evaluate(const SDT& t, const std::vector<DataValue>& registers,
                    const std::vector<DataValue>& params, std::size_t level) {
  Evaluation e;
  if (t.is_leaf()) {
    (t.accepting ? e.accept : e.reject) = true;
    return e;
  }
  if (level >= params.size()) throw std::out_of_range("SDT deeper than parameter vector");
  for (const auto& b : t.branches) {
    if (!guard_holds(b.guard, params[level], registers, params)) continue;
    const Evaluation sub = evaluate(b.child, registers, params, level + 1);
    e.accept |= sub.accept;
    e.reject |= sub.reject;
  }
  return e;
}

bool classify(const SDT& t, const DataWord& u, const DataWord& suffix_instance) {
  const Evaluation e = evaluate(t, u.data_values(), suffix_instance.data_values());
  if (e.accept == e.reject) throw std::logic_error("SDT does not classify the instance uniquely");
  return e.accept;
}

SDT tree_query(const Alphabet& sigma, CountingOracle& mq, const DataWord& u,
               const SymbolicSuffix& v) {
  Builder b(sigma, mq, u, v);
  std::vector<DataValue> params;
  std::vector<Sample> samples;
  return b.build(params, samples);
}

const SDT& TreeOracle::query(const DataWord& u, const SymbolicSuffix& v) {
  auto key = std::make_pair(u, v);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const std::size_t before = mq_.stats().learn_raw + mq_.stats().test_raw;
  SDT t = tree_query(sigma_, mq_, u, v);
  const std::size_t issued = mq_.stats().learn_raw + mq_.stats().test_raw - before;
  ++mq_.stats().tree_query_histogram[issued];
  return cache_.emplace(std::move(key), std::move(t)).first->second;
}

std::vector<int> memorable(const SDT& t) {
  std::vector<int> out;
  std::function<void(const SDT&)> walk = [&](const SDT& n) {
    for (const auto& b : n.branches) {
      if (b.guard.kind == SDTGuard::Kind::Equal && !b.guard.ref.is_param) {
        out.push_back(b.guard.ref.index);
      }
      for (const auto& r : b.guard.excluded) {
        if (!r.is_param) out.push_back(r.index);
      }
      walk(b.child);
    }
  };
  walk(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> memorable(TreeOracle& tq, const DataWord& u,
                           const std::vector<SymbolicSuffix>& suffixes) {
  std::vector<int> out;
  for (const auto& v : suffixes) {
    const auto m = memorable(tq.query(u, v));
    out.insert(out.end(), m.begin(), m.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Guard> initial_guards(TreeOracle& tq, const DataWord& u,
                                  const std::vector<SymbolicSuffix>& suffixes, ActionId alpha) {
  if (!tq.alphabet().has_param(alpha)) return {Guard{}};
  std::vector<int> regs;
  for (const auto& v : suffixes) {
    if (v.empty() || v.actions().front() != alpha) continue;
    for (const auto& b : tq.query(u, v).branches) {
      if (b.guard.kind == SDTGuard::Kind::Equal && !b.guard.ref.is_param) {
        regs.push_back(b.guard.ref.index);
      }
    }
  }
  std::sort(regs.begin(), regs.end());
  regs.erase(std::unique(regs.begin(), regs.end()), regs.end());
  std::vector<Guard> out;
  Guard rest;
  for (int r : regs) {
    out.push_back(Guard{{{Operand::param(), true, Operand::x(r)}}});
    rest.literals.push_back({Operand::param(), false, Operand::x(r)});
  }
  out.push_back(std::move(rest));
  return out;
}

DataValue representative_value(const DataWord& u, const Guard& g) {
  const auto values = u.data_values();
  for (const auto& lit : g.literals) {
    if (!lit.equal) continue;
    const Operand& reg = lit.lhs.is_param ? lit.rhs : lit.lhs;
    if (reg.is_param) continue;
    if (reg.reg < 1 || static_cast<std::size_t>(reg.reg) > values.size()) {
      throw std::out_of_range("guard references x" + std::to_string(reg.reg) + " beyond prefix");
    }
    return values[static_cast<std::size_t>(reg.reg - 1)];
  }
  if (!g.satisfiable()) throw std::invalid_argument("unsatisfiable guard");
  return fresh_value(u);
}

Bijection identity_bijection(const std::vector<int>& regs) {
  Bijection g;
  for (int r : regs) g.emplace_back(r, r);
  return g;
}

Bijection inverse(const Bijection& g) {
  Bijection inv;
  for (const auto& [a, b] : g) inv.emplace_back(b, a);
  std::sort(inv.begin(), inv.end());
  return inv;
}

std::optional<int> image(const Bijection& g, int reg) {
  for (const auto& [a, b] : g) {
    if (a == reg) return b;
  }
  return std::nullopt;
}

namespace {

Ref rename(const Bijection& g, const Ref& r) {
  if (r.is_param) return r;
  auto to = image(g, r.index);
  if (!to) throw std::out_of_range("bijection undefined on " + to_string(r));
  return Ref::x(*to);
}

}  // namespace

SDT apply_bijection(const Bijection& g, const SDT& t) {
  if (t.is_leaf()) return t;
  SDT out;
  for (const auto& b : t.branches) {
    SDTGuard guard = b.guard;
    if (guard.kind == SDTGuard::Kind::Equal) guard.ref = rename(g, guard.ref);
    for (auto& r : guard.excluded) r = rename(g, r);
    std::sort(guard.excluded.begin(), guard.excluded.end());
    out.branches.push_back({std::move(guard), apply_bijection(g, b.child)});
  }
  sort_branches(out);
  return out;
}

Guard apply_bijection(const Bijection& g, const Guard& guard) {
  Guard out = guard;
  for (auto& lit : out.literals) {
    for (Operand* o : {&lit.lhs, &lit.rhs}) {
      if (o->is_param) continue;
      auto to = image(g, o->reg);
      if (!to) throw std::out_of_range("bijection undefined on x" + std::to_string(o->reg));
      o->reg = *to;
    }
  }
  std::sort(out.literals.begin(), out.literals.end());
  return out;
}

namespace {

void render(const SDT& t, int depth, const std::function<std::string(const Ref&)>& name,
            std::ostringstream& out) {
  if (t.is_leaf()) {
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << (t.accepting ? '+' : '-')
        << '\n';
    return;
  }
  const std::string p = "p" + std::to_string(depth + 1);
  for (const auto& b : t.branches) {
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ');
    switch (b.guard.kind) {
      case SDTGuard::Kind::True:
        out << "true";
        break;
      case SDTGuard::Kind::Equal:
        out << p << '=' << name(b.guard.ref);
        break;
      case SDTGuard::Kind::Else:
        for (std::size_t i = 0; i < b.guard.excluded.size(); ++i) {
          out << (i ? " && " : "") << p << "!=" << name(b.guard.excluded[i]);
        }
        break;
    }
    out << '\n';
    render(b.child, depth + 1, name, out);
  }
}

std::string render(const SDT& t, const std::function<std::string(const Ref&)>& name) {
  std::ostringstream out;
  render(t, 0, name, out);
  return out.str();
}

// Multiset of paths with register `mark` shown and every other register
// blanked. Two registers can only correspond under a bijection if these
// agree for every suffix.
std::vector<std::vector<std::string>> signature(TreeOracle& tq, const DataWord& u, int mark,
                                                const std::vector<SymbolicSuffix>& suffixes) {
  auto name = [&](const Ref& r) {
    if (r.is_param) return to_string(r);
    return std::string(r.index == mark ? "*" : "x");
  };
  std::vector<std::vector<std::string>> sig;
  for (const auto& v : suffixes) {
    std::vector<std::string> lines;
    for (const auto& path : paths(tq.query(u, v))) {
      std::string line;
      for (const auto& g : path.guards) {
        if (g.kind == SDTGuard::Kind::True) {
          line += "T;";
        } else if (g.kind == SDTGuard::Kind::Equal) {
          line += "=" + name(g.ref) + ";";
        } else {
          std::vector<std::string> ex;
          for (const auto& r : g.excluded) ex.push_back(name(r));
          std::sort(ex.begin(), ex.end());
          line += "!";
          for (const auto& e : ex) line += e + ",";
          line += ";";
        }
      }
      line += path.accepting ? '+' : '-';
      lines.push_back(std::move(line));
    }
    std::sort(lines.begin(), lines.end());
    sig.push_back(std::move(lines));
  }
  return sig;
}

void search(TreeOracle& tq, const DataWord& u, const DataWord& u2,
            const std::vector<SymbolicSuffix>& suffixes, const std::vector<int>& left,
            const std::vector<int>& right,
            const std::vector<std::vector<std::size_t>>& compatible, Bijection& partial,
            std::vector<bool>& used, bool first_only, std::vector<Bijection>& out) {
  const std::size_t k = partial.size();
  if (k == left.size()) {
    for (const auto& v : suffixes) {
      if (!(apply_bijection(partial, tq.query(u, v)) == tq.query(u2, v))) return;
    }
    out.push_back(partial);
    return;
  }
  for (std::size_t j : compatible[k]) {
    if (used[j]) continue;
    used[j] = true;
    partial.emplace_back(left[k], right[j]);
    search(tq, u, u2, suffixes, left, right, compatible, partial, used, first_only, out);
    partial.pop_back();
    used[j] = false;
    if (first_only && !out.empty()) return;
  }
}

std::vector<Bijection> bijections(TreeOracle& tq, const DataWord& u, const DataWord& u2,
                                  const std::vector<SymbolicSuffix>& suffixes, bool first_only) {
  const auto left = memorable(tq, u, suffixes);
  const auto right = memorable(tq, u2, suffixes);
  if (left.size() != right.size()) return {};
  std::vector<std::vector<std::vector<std::string>>> rsig;
  for (int r : right) rsig.push_back(signature(tq, u2, r, suffixes));
  std::vector<std::vector<std::size_t>> compatible(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    const auto sig = signature(tq, u, left[i], suffixes);
    for (std::size_t j = 0; j < right.size(); ++j) {
      if (sig == rsig[j]) compatible[i].push_back(j);
    }
    if (compatible[i].empty()) return {};
  }
  Bijection partial;
  std::vector<bool> used(right.size(), false);
  std::vector<Bijection> out;
  search(tq, u, u2, suffixes, left, right, compatible, partial, used, first_only, out);
  return out;
}

}  // namespace

std::optional<Bijection> find_bijection(TreeOracle& tq, const DataWord& u, const DataWord& u2,
                                        const std::vector<SymbolicSuffix>& suffixes) {
  auto all = bijections(tq, u, u2, suffixes, true);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::vector<Bijection> all_bijections(TreeOracle& tq, const DataWord& u, const DataWord& u2,
                                      const std::vector<SymbolicSuffix>& suffixes) {
  return bijections(tq, u, u2, suffixes, false);
}

std::string to_text(const SDT& t) {
  return render(t, [](const Ref& r) { return to_string(r); });
}

}  // namespace ralearn
