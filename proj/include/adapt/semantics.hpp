#pragma once

// Labeled transition system in static and dynamic modes, reduction graphs
// and barb predicates.
//
// Tau steps are synthesized by pairing complementary capabilities of two
// distinct parallel branches; the placeholder of rule (Comp) is represented
// internally by a structural hole in the capability's residual term and is
// filled before any tau result is returned.

#include <deque>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "adapt/term.hpp"

namespace adapt {

enum class Mode : uint8_t { Static, Dynamic };

// An observable action: a or a! .
struct Act {
  Name name;
  bool output = false;
  bool operator==(const Act& o) const { return name == o.name && output == o.output; }
  std::string str() const { return output ? name + "!" : name; }
};

inline Act act_in(Name n) { return Act{std::move(n), false}; }
inline Act act_out(Name n) { return Act{std::move(n), true}; }

enum class LabelKind : uint8_t { In, Out, Comp, Upd, Tau };

struct Label {
  LabelKind kind = LabelKind::Tau;
  Name name;     // In/Out/Comp/Upd
  TermPtr body;  // Comp: current state; Upd: update pattern
  std::string str() const {
    switch (kind) {
      case LabelKind::In: return name;
      case LabelKind::Out: return name + "!";
      case LabelKind::Comp: return name + "[..]";
      case LabelKind::Upd: return name + "{..}";
      case LabelKind::Tau: return "tau";
    }
    return "?";
  }
};

struct LabeledStep {
  Label label;
  TermPtr target;  // for Comp labels the target contains the placeholder hole
};

// cond(U,Q) for the static LTS, via the three-case characterization of
// static update synchronization. `a` is the name of the update prefix;
// returns false when the pattern is not shaped a[U'] || A with A free of
// adaptable processes and holes.
inline bool cond_static(const Name& a, const TermPtr& pattern, const TermPtr& q) {
  auto comps = par_components(pattern);
  // locate the recreated adaptable process a[U']; the rest is A
  int loc_idx = -1;
  for (size_t i = 0; i < comps.size(); ++i) {
    if (comps[i]->kind == Kind::Loc && comps[i]->name == a) {
      if (loc_idx >= 0) return false;  // two candidates: not the static shape
      loc_idx = static_cast<int>(i);
    }
  }
  if (loc_idx < 0) return false;
  for (size_t i = 0; i < comps.size(); ++i) {
    if (static_cast<int>(i) == loc_idx) continue;
    if (numap(comps[i]) != 0 || numholes(comps[i]) != 0) return false;
  }
  const TermPtr& u = comps[static_cast<size_t>(loc_idx)]->body;
  int nh = numholes(u);
  if (nh == 0) return cstr(q) == cstr(u);
  if (numap(u) != 0) return false;
  if (nh == 1) return numph(u) > 0 ? numap(q) == 0 : true;
  return numap(q) == 0;  // nh > 1
}

// All transitions of p (all five label kinds). Comp targets carry the
// internal placeholder as a structural hole; they are exposed for
// inspection but tau synthesis consumes them before filling.
inline std::vector<LabeledStep> labeled_transitions(const TermPtr& p, Mode mode) {
  std::vector<LabeledStep> out;
  switch (p->kind) {
    case Kind::Nil:
    case Kind::Hole:
      break;
    case Kind::Sum: {
      for (auto& br : p->branches) {
        switch (br.prefix.kind) {
          case PrefixKind::In:
            out.push_back({Label{LabelKind::In, br.prefix.name, nullptr}, br.cont});
            break;
          case PrefixKind::Out:
            out.push_back({Label{LabelKind::Out, br.prefix.name, nullptr}, br.cont});
            break;
          case PrefixKind::Update:
            out.push_back({Label{LabelKind::Upd, br.prefix.name, br.prefix.payload}, br.cont});
            break;
        }
      }
      break;
    }
    case Kind::Repl: {
      TermPtr cont = par({p->body, p});
      switch (p->prefix.kind) {
        case PrefixKind::In:
          out.push_back({Label{LabelKind::In, p->prefix.name, nullptr}, cont});
          break;
        case PrefixKind::Out:
          out.push_back({Label{LabelKind::Out, p->prefix.name, nullptr}, cont});
          break;
        case PrefixKind::Update:
          out.push_back({Label{LabelKind::Upd, p->prefix.name, p->prefix.payload}, cont});
          break;
      }
      break;
    }
    case Kind::Loc: {
      for (auto& step : labeled_transitions(p->body, mode))
        out.push_back({step.label, loc(p->name, step.target)});
      out.push_back({Label{LabelKind::Comp, p->name, p->body}, hole()});
      break;
    }
    case Kind::Par: {
      std::vector<std::vector<LabeledStep>> child_steps;
      child_steps.reserve(p->children.size());
      for (auto& c : p->children) child_steps.push_back(labeled_transitions(c, mode));
      auto rebuild = [&p](size_t i, const TermPtr& replacement) {
        std::vector<TermPtr> cs = p->children;
        cs[i] = replacement;
        return par(std::move(cs));
      };
      auto rebuild2 = [&p](size_t i, const TermPtr& ri, size_t j, const TermPtr& rj) {
        std::vector<TermPtr> cs = p->children;
        cs[i] = ri;
        cs[j] = rj;
        return par(std::move(cs));
      };
      for (size_t i = 0; i < child_steps.size(); ++i)
        for (auto& step : child_steps[i]) out.push_back({step.label, rebuild(i, step.target)});
      // tau synthesis between two distinct branches
      for (size_t i = 0; i < child_steps.size(); ++i) {
        for (size_t j = 0; j < child_steps.size(); ++j) {
          if (i == j) continue;
          for (auto& si : child_steps[i]) {
            if (si.label.kind == LabelKind::In && i < j) {
              for (auto& sj : child_steps[j]) {
                if (sj.label.kind == LabelKind::Out && sj.label.name == si.label.name)
                  out.push_back({Label{LabelKind::Tau, "", nullptr},
                                 rebuild2(i, si.target, j, sj.target)});
              }
            } else if (si.label.kind == LabelKind::Out && i < j) {
              for (auto& sj : child_steps[j]) {
                if (sj.label.kind == LabelKind::In && sj.label.name == si.label.name)
                  out.push_back({Label{LabelKind::Tau, "", nullptr},
                                 rebuild2(i, si.target, j, sj.target)});
              }
            } else if (si.label.kind == LabelKind::Comp) {
              for (auto& sj : child_steps[j]) {
                if (sj.label.kind == LabelKind::Upd && sj.label.name == si.label.name) {
                  if (mode == Mode::Static &&
                      !cond_static(si.label.name, sj.label.body, si.label.body))
                    continue;
                  TermPtr filled = fill(sj.label.body, si.label.body);
                  out.push_back({Label{LabelKind::Tau, "", nullptr},
                                 rebuild2(i, fill(si.target, filled), j, sj.target)});
                }
              }
            }
          }
        }
      }
      break;
    }
  }
  return out;
}

// Canonicalized, deduplicated tau-successor set.
inline std::vector<TermPtr> successors(const TermPtr& p, Mode mode) {
  std::map<std::string, TermPtr> acc;
  for (auto& step : labeled_transitions(p, mode)) {
    if (step.label.kind != LabelKind::Tau) continue;
    auto c = canonicalize(step.target);
    acc.emplace(serialize(c), c);
  }
  std::vector<TermPtr> out;
  out.reserve(acc.size());
  for (auto& [k, v] : acc) out.push_back(v);
  return out;
}

// Immediate observability of alpha; adaptable processes are transparent.
inline bool barb(const TermPtr& p, const Act& alpha) {
  switch (p->kind) {
    case Kind::Sum:
      for (auto& br : p->branches) {
        if (br.prefix.kind == PrefixKind::Update) continue;
        if (br.prefix.name == alpha.name &&
            (br.prefix.kind == PrefixKind::Out) == alpha.output)
          return true;
      }
      return false;
    case Kind::Repl:
      return p->prefix.kind != PrefixKind::Update && p->prefix.name == alpha.name &&
             (p->prefix.kind == PrefixKind::Out) == alpha.output;
    case Kind::Loc: return barb(p->body, alpha);
    case Kind::Par:
      for (auto& c : p->children)
        if (barb(c, alpha)) return true;
      return false;
    default:
      return false;
  }
}

// ---- reduction graph -----------------------------------------------------------

struct Graph {
  std::vector<TermPtr> states;             // canonical terms, index = id
  std::vector<std::vector<int>> succs;     // adjacency
  std::vector<int> depth;                  // BFS depth from the root
  bool closed = false;                     // whole reachable graph explored
  std::unordered_map<std::string, int> index;
};

// BFS over canonical states, identified up to inert-nil elision (strongly
// bisimilar, so barbs and reachability are unaffected). Exploration stops
// expanding past max_depth (if >= 0) or once max_states states exist
// (if >= 0); `closed` reports whether every reachable state was expanded.
inline Graph explore(const TermPtr& p, Mode mode, long max_depth = -1, long max_states = -1) {
  Graph g;
  auto root = canonicalize(prune_nil(p));
  g.states.push_back(root);
  g.succs.emplace_back();
  g.depth.push_back(0);
  g.index.emplace(serialize(root), 0);
  std::deque<int> todo{0};
  bool truncated = false;
  while (!todo.empty()) {
    int id = todo.front();
    todo.pop_front();
    if (max_depth >= 0 && g.depth[static_cast<size_t>(id)] >= max_depth) {
      if (!successors(g.states[static_cast<size_t>(id)], mode).empty()) truncated = true;
      continue;
    }
    for (auto& raw : successors(g.states[static_cast<size_t>(id)], mode)) {
      auto s = canonicalize(prune_nil(raw));
      std::string key = serialize(s);
      auto it = g.index.find(key);
      int sid;
      if (it == g.index.end()) {
        if (max_states >= 0 && static_cast<long>(g.states.size()) >= max_states) {
          truncated = true;
          continue;
        }
        sid = static_cast<int>(g.states.size());
        g.states.push_back(s);
        g.succs.emplace_back();
        g.depth.push_back(g.depth[static_cast<size_t>(id)] + 1);
        g.index.emplace(std::move(key), sid);
        todo.push_back(sid);
      } else {
        sid = it->second;
      }
      g.succs[static_cast<size_t>(id)].push_back(sid);
    }
  }
  g.closed = !truncated;
  return g;
}

// ---- bounded barb oracles --------------------------------------------------------

struct BarbKResult {
  bool found = false;
  bool closed = false;                // reachable graph fully explored
  std::vector<TermPtr> trace;         // witness: P ->* Q1 -> ... -> Qk
};

// Semi-decides P barb_alpha^k by searching the reduction graph to `depth`.
// A witness is a computation whose last k states all exhibit alpha. When the
// graph closes within the bound, a negative answer is exact.
inline BarbKResult bounded_barb_k(const TermPtr& p, const Act& alpha, int k, long depth,
                                  Mode mode = Mode::Dynamic) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  Graph g = explore(p, mode, depth);
  size_t n = g.states.size();
  std::vector<bool> b(n);
  for (size_t i = 0; i < n; ++i) b[i] = barb(g.states[i], alpha);

  // run[i] = longest walk of barbed states starting at i (capped at k);
  // cycles inside the barbed subgraph mean unbounded, i.e. >= k.
  std::vector<int> run(n, -1), mark(n, 0);
  std::function<int(int)> longest = [&](int v) -> int {
    size_t sv = static_cast<size_t>(v);
    if (!b[sv]) return 0;
    if (run[sv] >= 0) return run[sv];
    if (mark[sv] == 1) return k;  // barbed cycle
    mark[sv] = 1;
    int best = 1;
    for (int w : g.succs[sv]) {
      int r = longest(w);
      if (r >= k) {
        best = k;
        break;
      }
      best = std::max(best, 1 + r);
    }
    mark[sv] = 2;
    run[sv] = std::min(best, k);
    return run[sv];
  };

  BarbKResult res;
  res.closed = g.closed;
  int start = -1;
  for (size_t i = 0; i < n; ++i) {
    if (longest(static_cast<int>(i)) >= k) {
      start = static_cast<int>(i);
      break;
    }
  }
  if (start < 0) return res;
  res.found = true;
  // stem: BFS path from the root to `start`
  std::vector<int> parent(n, -1);
  std::deque<int> q{0};
  std::vector<bool> seen(n, false);
  seen[0] = true;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (v == start) break;
    for (int w : g.succs[static_cast<size_t>(v)]) {
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = true;
        parent[static_cast<size_t>(w)] = v;
        q.push_back(w);
      }
    }
  }
  std::vector<int> stem;
  for (int v = start; v >= 0; v = parent[static_cast<size_t>(v)]) stem.push_back(v);
  std::reverse(stem.begin(), stem.end());
  for (int v : stem) res.trace.push_back(g.states[static_cast<size_t>(v)]);
  // extend the walk through barbed states until k of them are in the suffix
  int cur = start, have = 1;
  while (have < k) {
    int next = -1;
    for (int w : g.succs[static_cast<size_t>(cur)]) {
      if (b[static_cast<size_t>(w)] && longest(w) >= k - have) {
        next = w;
        break;
      }
    }
    if (next < 0) break;  // should not happen given run[start] >= k
    res.trace.push_back(g.states[static_cast<size_t>(next)]);
    cur = next;
    ++have;
  }
  return res;
}

enum class OmegaAnswer : uint8_t { Witness, HoldsExact, Inconclusive };

struct BarbOmegaResult {
  OmegaAnswer answer = OmegaAnswer::Inconclusive;
  std::vector<TermPtr> stem;   // path into the cycle
  std::vector<TermPtr> cycle;  // barbed lasso
};

// Semi-decides P barb_alpha^omega: a witness is a reachable cycle lying
// entirely inside the alpha-barbed subgraph. Exact negative when the graph
// closes within state_limit.
inline BarbOmegaResult bounded_barb_omega(const TermPtr& p, const Act& alpha, long state_limit,
                                          Mode mode = Mode::Dynamic) {
  if (state_limit < 1) throw std::invalid_argument("state_limit must be >= 1");
  Graph g = explore(p, mode, -1, state_limit);
  size_t n = g.states.size();
  std::vector<bool> b(n);
  for (size_t i = 0; i < n; ++i) b[i] = barb(g.states[i], alpha);

  // find a cycle within the barbed subgraph (iterative DFS, colors)
  std::vector<int> color(n, 0), via(n, -1);
  int cycle_entry = -1;
  std::function<bool(int)> dfs = [&](int v) -> bool {
    color[static_cast<size_t>(v)] = 1;
    for (int w : g.succs[static_cast<size_t>(v)]) {
      if (!b[static_cast<size_t>(w)]) continue;
      if (color[static_cast<size_t>(w)] == 1) {
        cycle_entry = w;
        via[static_cast<size_t>(w)] = v;
        return true;
      }
      if (color[static_cast<size_t>(w)] == 0) {
        via[static_cast<size_t>(w)] = v;
        if (dfs(w)) return true;
      }
    }
    color[static_cast<size_t>(v)] = 2;
    return false;
  };
  for (size_t i = 0; i < n && cycle_entry < 0; ++i)
    if (b[i] && color[i] == 0) dfs(static_cast<int>(i));

  BarbOmegaResult res;
  if (cycle_entry >= 0) {
    res.answer = OmegaAnswer::Witness;
    std::vector<int> cyc{cycle_entry};
    for (int v = via[static_cast<size_t>(cycle_entry)]; v != cycle_entry;
         v = via[static_cast<size_t>(v)])
      cyc.push_back(v);
    std::reverse(cyc.begin(), cyc.end());
    for (int v : cyc) res.cycle.push_back(g.states[static_cast<size_t>(v)]);
    // stem from root to the cycle entry
    std::vector<int> parent(n, -1);
    std::vector<bool> seen(n, false);
    std::deque<int> q{0};
    seen[0] = true;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int w : g.succs[static_cast<size_t>(v)]) {
        if (!seen[static_cast<size_t>(w)]) {
          seen[static_cast<size_t>(w)] = true;
          parent[static_cast<size_t>(w)] = v;
          q.push_back(w);
        }
      }
    }
    for (int v = cyc.front(); v >= 0; v = parent[static_cast<size_t>(v)]) res.stem.push_back(g.states[static_cast<size_t>(v)]);
    std::reverse(res.stem.begin(), res.stem.end());
    return res;
  }
  res.answer = g.closed ? OmegaAnswer::HoldsExact : OmegaAnswer::Inconclusive;
  return res;
}

}  // namespace adapt
