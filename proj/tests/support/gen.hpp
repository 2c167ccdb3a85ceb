#pragma once

// Seeded random term generators and independent oracles for property tests.

#include <random>

#include "adapt/semantics.hpp"
#include "adapt/term.hpp"

namespace gen {

using namespace adapt;

struct Rng {
  std::mt19937_64 e;
  explicit Rng(uint64_t seed) : e(seed) {}
  int irand(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(e); }
  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(e) < p; }
  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<size_t>(irand(0, static_cast<int>(xs.size()) - 1))];
  }
};

inline const std::vector<Name>& small_names() {
  static const std::vector<Name> ns = {"a", "b", "c", "x", "y", "e"};
  return ns;
}

inline const std::vector<Name>& loc_names() {
  static const std::vector<Name> ns = {"a", "b", "c"};
  return ns;
}

// ---- general (dynamic) processes -------------------------------------------------

struct Opts {
  std::vector<Name> names = small_names();
  std::vector<Name> locs = loc_names();
  int depth = 3;
  double update_prob = 0.25;
  PatternClass payload_class = PatternClass::P2;
  bool allow_repl = true;
};

inline TermPtr gen_pattern(Rng& g, const Opts& o, int depth, PatternClass cls);

inline Prefix gen_prefix(Rng& g, const Opts& o, int depth) {
  if (depth > 0 && g.coin(o.update_prob)) {
    return update(g.pick(o.locs), gen_pattern(g, o, depth - 1, o.payload_class));
  }
  Name n = g.pick(o.names);
  return g.coin(0.5) ? in(n) : out(n);
}

inline TermPtr gen_process(Rng& g, const Opts& o, int depth) {
  int roll = g.irand(0, 9);
  if (depth <= 0 || roll < 2) return nil();
  if (roll < 6) {  // prefix chain / sum
    int branches = g.coin(0.8) ? 1 : 2;
    std::vector<Branch> bs;
    for (int i = 0; i < branches; ++i)
      bs.push_back(Branch{gen_prefix(g, o, depth), gen_process(g, o, depth - 1)});
    return sum(std::move(bs));
  }
  if (roll < 8) {
    int width = g.irand(2, 3);
    std::vector<TermPtr> cs;
    for (int i = 0; i < width; ++i) cs.push_back(gen_process(g, o, depth - 1));
    return par(std::move(cs));
  }
  if (roll == 8 && o.allow_repl) return repl(gen_prefix(g, o, depth - 1), gen_process(g, o, depth - 1));
  return loc(g.pick(o.locs), gen_process(g, o, depth - 1));
}

// patterns of the three behavioural classes
inline TermPtr gen_pattern(Rng& g, const Opts& o, int depth, PatternClass cls) {
  switch (cls) {
    case PatternClass::P3: {
      // exactly one hole along a Loc/Par spine
      if (depth <= 0 || g.coin(0.4)) return hole();
      if (g.coin(0.5)) return loc(g.pick(o.locs), gen_pattern(g, o, depth - 1, cls));
      return par({gen_pattern(g, o, depth - 1, cls), gen_process(g, o, depth - 1)});
    }
    case PatternClass::P2: {
      int roll = g.irand(0, 5);
      if (depth <= 0 || roll == 0) return g.coin(0.5) ? hole() : gen_process(g, o, depth);
      if (roll < 3) return par({gen_pattern(g, o, depth - 1, cls), gen_pattern(g, o, depth - 1, cls)});
      if (roll < 4) return loc(g.pick(o.locs), gen_pattern(g, o, depth - 1, cls));
      return gen_process(g, o, depth - 1);
    }
    default: {  // full contexts: holes may sit under prefixes
      int roll = g.irand(0, 5);
      if (depth <= 0 || roll == 0) return g.coin(0.5) ? hole() : gen_process(g, o, depth);
      if (roll < 2) return par({gen_pattern(g, o, depth - 1, cls), gen_pattern(g, o, depth - 1, cls)});
      if (roll < 3) return loc(g.pick(o.locs), gen_pattern(g, o, depth - 1, cls));
      return act(gen_prefix(g, o, depth - 1), gen_pattern(g, o, depth - 1, cls));
    }
  }
}

// ---- static processes -------------------------------------------------------------

// inner pattern U of a static payload a{a[U] || A}
inline TermPtr gen_static_U(Rng& g, const Opts& o, int depth, PatternClass cls);

inline TermPtr gen_static_A(Rng& g, const Opts& o, int depth, PatternClass cls, bool holes);

inline Prefix gen_static_prefix(Rng& g, const Opts& o, int depth, PatternClass cls) {
  if (depth > 0 && g.coin(o.update_prob)) {
    Name a = g.pick(o.locs);
    std::vector<TermPtr> comps{loc(a, gen_static_U(g, o, depth - 1, cls))};
    if (g.coin(0.4)) comps.push_back(gen_static_A(g, o, depth - 1, cls, false));
    return update(a, par(std::move(comps)));
  }
  Name n = g.pick(o.names);
  return g.coin(0.5) ? in(n) : out(n);
}

// category A (optionally hole-extended)
inline TermPtr gen_static_A(Rng& g, const Opts& o, int depth, PatternClass cls, bool holes) {
  int roll = g.irand(0, 9);
  if (holes && roll == 9) return hole();
  if (depth <= 0 || roll < 2) return nil();
  if (roll < 7) {
    int branches = g.coin(0.8) ? 1 : 2;
    std::vector<Branch> bs;
    for (int i = 0; i < branches; ++i)
      bs.push_back(Branch{gen_static_prefix(g, o, depth, cls),
                          gen_static_A(g, o, depth - 1, cls, holes)});
    return sum(std::move(bs));
  }
  if (roll < 8 && o.allow_repl)
    return repl(gen_static_prefix(g, o, depth - 1, cls), gen_static_A(g, o, depth - 1, cls, holes));
  return par({gen_static_A(g, o, depth - 1, cls, holes), gen_static_A(g, o, depth - 1, cls, holes)});
}

inline TermPtr gen_static_U(Rng& g, const Opts& o, int depth, PatternClass cls) {
  if (cls == PatternClass::P3) {
    if (depth <= 0 || g.coin(0.5)) return hole();
    if (g.coin(0.25)) return loc(g.pick(o.locs), gen_static_U(g, o, depth - 1, cls));
    return par({gen_static_U(g, o, depth - 1, cls), gen_static_A(g, o, depth - 1, cls, false)});
  }
  if (cls == PatternClass::P2) {
    int roll = g.irand(0, 4);
    if (depth <= 0 || roll == 0) return g.coin(0.6) ? hole() : gen_static_A(g, o, depth, cls, false);
    if (roll < 2) return par({gen_static_U(g, o, depth - 1, cls), gen_static_U(g, o, depth - 1, cls)});
    if (roll < 3) return loc(g.pick(o.locs), gen_static_U(g, o, depth - 1, cls));
    return gen_static_A(g, o, depth - 1, cls, false);
  }
  // class 1: holes may appear under prefixes (inside the A-category parts)
  int roll = g.irand(0, 4);
  if (depth <= 0 || roll == 0) return g.coin(0.6) ? hole() : gen_static_A(g, o, depth, cls, true);
  if (roll < 2) return par({gen_static_U(g, o, depth - 1, cls), gen_static_U(g, o, depth - 1, cls)});
  if (roll < 3) return loc(g.pick(o.locs), gen_static_U(g, o, depth - 1, cls));
  return gen_static_A(g, o, depth - 1, cls, true);
}

// top-level static process
inline TermPtr gen_static(Rng& g, const Opts& o, int depth, PatternClass cls) {
  int roll = g.irand(0, 9);
  if (depth > 0 && roll < 3) return loc(g.pick(o.locs), gen_static(g, o, depth - 1, cls));
  if (depth > 0 && roll < 5) {
    int width = g.irand(2, 3);
    std::vector<TermPtr> cs;
    for (int i = 0; i < width; ++i) cs.push_back(gen_static(g, o, depth - 1, cls));
    return par(std::move(cs));
  }
  return gen_static_A(g, o, depth, cls, false);
}

inline TermPtr gen_es3(Rng& g, const Opts& o, int depth) {
  return gen_static(g, o, depth, PatternClass::P3);
}

// random reassociation/shuffle of parallel components, preserving congruence
inline TermPtr shuffle_par(Rng& g, const TermPtr& t) {
  switch (t->kind) {
    case Kind::Par: {
      std::vector<TermPtr> cs;
      for (auto& c : t->children) cs.push_back(shuffle_par(g, c));
      std::shuffle(cs.begin(), cs.end(), g.e);
      // rebuild with random nesting
      while (cs.size() > 1) {
        size_t i = static_cast<size_t>(g.irand(0, static_cast<int>(cs.size()) - 2));
        auto merged = std::make_shared<Term>();
        merged->kind = Kind::Par;
        merged->children = {cs[i], cs[i + 1]};
        cs[i] = merged;
        cs.erase(cs.begin() + static_cast<long>(i) + 1);
      }
      return cs[0];
    }
    case Kind::Loc: return loc(t->name, shuffle_par(g, t->body));
    case Kind::Sum: {
      std::vector<Branch> bs;
      for (auto& br : t->branches) {
        Prefix p = br.prefix;
        if (p.kind == PrefixKind::Update) p.payload = shuffle_par(g, p.payload);
        bs.push_back(Branch{p, shuffle_par(g, br.cont)});
      }
      return sum(std::move(bs));
    }
    case Kind::Repl: {
      Prefix p = t->prefix;
      if (p.kind == PrefixKind::Update) p.payload = shuffle_par(g, p.payload);
      return repl(p, shuffle_par(g, t->body));
    }
    default:
      return t;
  }
}

// ---- independent oracles -------------------------------------------------------------

// single-pass tree walk computing the three counts together
struct NaiveCounts {
  int ap = 0, holes = 0, ph = 0;
};

inline NaiveCounts naive_counts(const TermPtr& u, bool under_prefix = false) {
  NaiveCounts n;
  switch (u->kind) {
    case Kind::Hole:
      n.holes = 1;
      n.ph = under_prefix ? 1 : 0;
      break;
    case Kind::Loc: {
      auto b = naive_counts(u->body, under_prefix);
      n.ap = under_prefix ? 0 : 1 + b.ap;
      n.holes = b.holes;
      n.ph = b.ph;
      break;
    }
    case Kind::Par: {
      for (auto& c : u->children) {
        auto b = naive_counts(c, under_prefix);
        n.ap += b.ap;
        n.holes += b.holes;
        n.ph += b.ph;
      }
      break;
    }
    case Kind::Sum: {
      for (auto& br : u->branches) {
        auto b = naive_counts(br.cont, true);
        n.holes += b.holes;
        n.ph += b.ph;
      }
      n.ap = 0;
      break;
    }
    case Kind::Repl: {
      auto b = naive_counts(u->body, true);
      n.holes = b.holes;
      n.ph = b.ph;
      n.ap = 0;
      break;
    }
    default:
      break;
  }
  return n;
}

// the two-condition definition of static update firability, used as the
// oracle against the case-based implementation
inline bool cond_static_direct(const Name& a, const TermPtr& pattern, const TermPtr& q) {
  auto comps = par_components(pattern);
  bool second = numph(pattern) > 0 ? numap(q) == 0 : true;
  if (!second) return false;
  DenTree lhs = cstr(loc(a, q));
  for (size_t i = 0; i < comps.size(); ++i) {
    if (comps[i]->kind != Kind::Loc || comps[i]->name != a) continue;
    std::vector<TermPtr> rhs_comps{loc(a, fill(comps[i]->body, q))};
    for (size_t j = 0; j < comps.size(); ++j)
      if (j != i) rhs_comps.push_back(comps[j]);
    if (cstr(par(std::move(rhs_comps))) == lhs) return true;
  }
  return false;
}

}  // namespace gen
