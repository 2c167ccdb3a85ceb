#pragma once

// Backward reachability for bounded adaptation: tree denotations, the
// well-quasi-order on them (tree embedding with label equality), effective
// pred-basis, saturation and the final cluster membership test.

#include "adapt/cluster.hpp"
#include "adapt/semantics.hpp"
#include "adapt/term.hpp"

namespace adapt {

// ---- tree denotation -------------------------------------------------------------

struct ProcTree {
  enum class L : uint8_t { Root, Seq, Loc } kind = L::Root;
  std::string seq;  // canonical serialization of a sequential subprocess
  Name loc_name;    // a[ ] marker
  std::vector<ProcTree> children;

  bool label_equals(const ProcTree& o) const {
    return kind == o.kind && seq == o.seq && loc_name == o.loc_name;
  }
};

inline void tree_children(const TermPtr& t, std::vector<ProcTree>& out) {
  switch (t->kind) {
    case Kind::Par:
      for (auto& c : t->children) tree_children(c, out);
      break;
    case Kind::Loc: {
      ProcTree node;
      node.kind = ProcTree::L::Loc;
      node.loc_name = t->name;
      tree_children(t->body, node.children);
      out.push_back(std::move(node));
      break;
    }
    case Kind::Hole:
      throw std::invalid_argument("tree denotation of a pattern with free holes");
    default: {
      ProcTree leaf;
      leaf.kind = ProcTree::L::Seq;
      leaf.seq = canon_key(t);
      out.push_back(std::move(leaf));
      break;
    }
  }
}

// Root epsilon; leaves are the sequential components, adaptable processes
// become a[ ]-labeled subtrees.
inline ProcTree tree_of(const TermPtr& p) {
  ProcTree root;
  tree_children(canonicalize(p), root.children);
  return root;
}

// ---- embedding (Kruskal order on trees with label equality) -----------------------

namespace detail {

struct FlatTree {
  std::vector<const ProcTree*> nodes;
  std::vector<std::vector<int>> kids;

  int add(const ProcTree& t) {
    int id = static_cast<int>(nodes.size());
    nodes.push_back(&t);
    kids.emplace_back();
    for (auto& c : t.children) {
      int cid = add(c);
      kids[static_cast<size_t>(id)].push_back(cid);
    }
    return id;
  }
};

class TreeEmbedder {
 public:
  TreeEmbedder(const ProcTree& small, const ProcTree& big) {
    sroot_ = a_.add(small);
    broot_ = b_.add(big);
    size_t n = a_.nodes.size() * b_.nodes.size();
    emb_.assign(n, -1);
    sub_.assign(n, -1);
  }

  bool embeds() { return emb(sroot_, broot_); }

 private:
  size_t key(int m, int n) const { return static_cast<size_t>(m) * b_.nodes.size() + static_cast<size_t>(n); }

  // subtree rooted at m embeds at n or below it
  bool sub(int m, int n) {
    int8_t& memo = sub_[key(m, n)];
    if (memo >= 0) return memo != 0;
    bool r = emb(m, n);
    if (!r)
      for (int c : b_.kids[static_cast<size_t>(n)])
        if (sub(m, c)) {
          r = true;
          break;
        }
    memo = r ? 1 : 0;
    return r;
  }

  // roots align: labels equal and children map into disjoint child subtrees
  bool emb(int m, int n) {
    int8_t& memo = emb_[key(m, n)];
    if (memo >= 0) return memo != 0;
    bool r = false;
    if (a_.nodes[static_cast<size_t>(m)]->label_equals(*b_.nodes[static_cast<size_t>(n)]))
      r = match_children(a_.kids[static_cast<size_t>(m)], b_.kids[static_cast<size_t>(n)]);
    memo = r ? 1 : 0;
    return r;
  }

  // maximum bipartite matching (augmenting paths); every child of m must be
  // assigned a distinct child subtree of n
  bool match_children(const std::vector<int>& ms, const std::vector<int>& ns) {
    if (ms.empty()) return true;
    if (ms.size() > ns.size()) return false;
    std::vector<int> owner(ns.size(), -1);
    for (size_t i = 0; i < ms.size(); ++i) {
      std::vector<bool> visited(ns.size(), false);
      if (!augment(ms, ns, static_cast<int>(i), owner, visited)) return false;
    }
    return true;
  }

  bool augment(const std::vector<int>& ms, const std::vector<int>& ns, int i,
               std::vector<int>& owner, std::vector<bool>& visited) {
    for (size_t j = 0; j < ns.size(); ++j) {
      if (visited[j] || !sub(ms[static_cast<size_t>(i)], ns[j])) continue;
      visited[j] = true;
      if (owner[j] < 0 || augment(ms, ns, owner[j], owner, visited)) {
        owner[j] = i;
        return true;
      }
    }
    return false;
  }

  FlatTree a_, b_;
  int sroot_ = 0, broot_ = 0;
  std::vector<int8_t> emb_, sub_;
};

}  // namespace detail

inline bool tree_embeds(const ProcTree& small, const ProcTree& big) {
  return detail::TreeEmbedder(small, big).embeds();
}

// Decides p <= q in the wqo. Stateless variant; prefer WstsCtx::embeds in
// saturation loops, which memoizes on canonical pairs.
inline bool embeds(const TermPtr& p, const TermPtr& q) {
  return tree_embeds(tree_of(p), tree_of(q));
}

// ---- decompositions ---------------------------------------------------------------

// A syntactic context is a term skeleton whose structural holes (holes at
// parallel/locative positions, outside update payloads) mark the carved
// positions.
struct Decomposition {
  TermPtr context;
  std::vector<TermPtr> parts;  // fills the context holes in traversal order
};

namespace detail {

using CarveMap = std::map<std::pair<std::string, std::string>, std::pair<TermPtr, TermPtr>>;

inline void carves_inner(const TermPtr& t, CarveMap& out);

inline void carve_add(CarveMap& out, const TermPtr& k, const TermPtr& r) {
  out.emplace(std::make_pair(serialize(k), serialize(r)), std::make_pair(k, r));
}

// carves replacing a proper part of t (never all of t) by one hole
inline void carves_inner(const TermPtr& t, CarveMap& out) {
  switch (t->kind) {
    case Kind::Loc: {
      CarveMap body;
      carve_add(body, hole(), t->body);  // whole-body carve
      carves_inner(t->body, body);
      for (auto& [k, pr] : body) carve_add(out, loc(t->name, pr.first), pr.second);
      break;
    }
    case Kind::Par: {
      // group equal children and enumerate sub-multiset selections
      std::map<std::string, std::pair<TermPtr, int>> groups;
      for (auto& c : t->children) {
        auto [it, fresh] = groups.emplace(serialize(c), std::make_pair(c, 0));
        it->second.second++;
      }
      std::vector<std::pair<TermPtr, int>> gs;
      for (auto& [k, g] : groups) gs.push_back(g);
      std::vector<int> pick(gs.size(), 0);
      int total = static_cast<int>(t->children.size());
      while (true) {
        size_t i = 0;
        for (; i < gs.size(); ++i) {
          if (pick[i] < gs[i].second) {
            ++pick[i];
            std::fill(pick.begin(), pick.begin() + static_cast<long>(i), 0);
            break;
          }
        }
        if (i == gs.size()) break;
        int chosen = 0;
        for (int p : pick) chosen += p;
        if (chosen == 0 || chosen == total) continue;
        std::vector<TermPtr> removed, kept;
        for (size_t gi = 0; gi < gs.size(); ++gi) {
          for (int c = 0; c < pick[gi]; ++c) removed.push_back(gs[gi].first);
          for (int c = pick[gi]; c < gs[gi].second; ++c) kept.push_back(gs[gi].first);
        }
        kept.push_back(hole());
        carve_add(out, par(std::move(kept)), par(std::move(removed)));
      }
      // carves strictly inside one child
      for (size_t gi = 0; gi < gs.size(); ++gi) {
        CarveMap sub;
        carves_inner(gs[gi].first, sub);
        for (auto& [k, pr] : sub) {
          std::vector<TermPtr> cs;
          bool replaced = false;
          for (auto& c : t->children) {
            if (!replaced && serialize(c) == serialize(gs[gi].first)) {
              cs.push_back(pr.first);
              replaced = true;
            } else {
              cs.push_back(c);
            }
          }
          carve_add(out, par(std::move(cs)), pr.second);
        }
      }
      break;
    }
    default:
      break;  // sequential or hole: no proper structural part
  }
}

inline std::vector<std::pair<TermPtr, TermPtr>> carves1(const TermPtr& t) {
  CarveMap m;
  if (t->kind != Kind::Hole) carve_add(m, hole(), t);  // the whole-term carve
  carves_inner(t, m);
  std::vector<std::pair<TermPtr, TermPtr>> out;
  out.reserve(m.size());
  for (auto& [k, pr] : m) out.push_back(pr);
  return out;
}

}  // namespace detail

// All decompositions of p with at most two carved parts.
inline std::vector<Decomposition> decompositions(const TermPtr& p) {
  std::vector<Decomposition> out;
  std::set<std::string> seen;
  auto push = [&](TermPtr k, std::vector<TermPtr> parts) {
    std::vector<std::string> ps;
    for (auto& r : parts) ps.push_back(serialize(r));
    std::sort(ps.begin(), ps.end());
    std::string key = serialize(k) + "\x01";
    for (auto& s : ps) key += s + "\x02";
    if (!seen.insert(key).second) return;
    // order the parts to reconstruct p in traversal order
    if (parts.size() == 2) {
      if (canon_key(fill_ordered(k, parts)) != canon_key(p)) std::swap(parts[0], parts[1]);
    }
    out.push_back(Decomposition{std::move(k), std::move(parts)});
  };
  push(p, {});
  for (auto& [k1, r1] : detail::carves1(p)) {
    push(k1, {r1});
    for (auto& [k2, r2] : detail::carves1(k1)) {
      if (numholes(r2) != 0) continue;  // must not swallow the first hole
      push(k2, {r1, r2});
    }
  }
  return out;
}

// ---- pred-basis and saturation -------------------------------------------------------

// Shared context for one decision-procedure run: the cluster members, their
// inventories, and the embedding memo table.
struct WstsCtx {
  std::vector<TermPtr> S;
  std::vector<TermPtr> subpS;
  std::set<Name> cnamesS;
  std::vector<TermPtr> updS_holed;  // update patterns with at least one hole
  std::vector<TermPtr> gbase;       // subp(S) plus a[H] for a in cnames, H in subp
  Mode mode = Mode::Dynamic;
  mutable std::map<std::pair<std::string, std::string>, bool> embed_memo;

  explicit WstsCtx(std::vector<TermPtr> members, Mode m = Mode::Dynamic) : mode(m) {
    for (auto& t : members) S.push_back(canonicalize(t));
    subpS = subp(S);
    cnamesS = cnames(S);
    for (auto& u : upd(S))
      if (numholes(u) >= 1) updS_holed.push_back(u);
    gbase = subpS;
    for (auto& a : cnamesS)
      for (auto& h : subpS) gbase.push_back(loc(a, h));
  }

  bool embeds(const TermPtr& p, const TermPtr& q) const {
    auto key = std::make_pair(canon_key(p), canon_key(q));
    if (key.first == key.second) return true;
    auto it = embed_memo.find(key);
    if (it != embed_memo.end()) return it->second;
    bool r = adapt::embeds(p, q);
    embed_memo.emplace(std::move(key), r);
    return r;
  }

  bool tree_labels_ok(const TermPtr& p) const {
    std::set<std::string> subkeys;
    for (auto& t : subpS) subkeys.insert(canon_key(t));
    std::function<bool(const ProcTree&)> walk = [&](const ProcTree& n) -> bool {
      if (n.kind == ProcTree::L::Seq && !subkeys.count(n.seq)) return false;
      if (n.kind == ProcTree::L::Loc && !cnamesS.count(n.loc_name)) return false;
      for (auto& c : n.children)
        if (!walk(c)) return false;
      return true;
    };
    return walk(tree_of(p));
  }
};

// Keeps only the minimal elements; among mutually embeddable members the
// canonically smaller serialization survives.
inline std::vector<TermPtr> minimize(std::vector<TermPtr> xs, const WstsCtx& ctx) {
  std::map<std::string, TermPtr> uniq;
  for (auto& x : xs) {
    auto c = canonicalize(x);
    uniq.emplace(serialize(c), c);
  }
  std::vector<std::pair<std::string, TermPtr>> items(uniq.begin(), uniq.end());
  std::vector<bool> dead(items.size(), false);
  for (size_t i = 0; i < items.size(); ++i) {
    for (size_t j = 0; j < items.size(); ++j) {
      if (i == j || dead[j] || dead[i]) continue;
      if (ctx.embeds(items[j].second, items[i].second)) {
        if (ctx.embeds(items[i].second, items[j].second) && items[i].first < items[j].first)
          continue;  // mutual: the lexicographically smaller one wins
        dead[i] = true;
      }
    }
  }
  std::vector<TermPtr> out;
  for (size_t i = 0; i < items.size(); ++i)
    if (!dead[i]) out.push_back(items[i].second);
  return out;
}

// All H with fill(u, H) congruent to r; the hole lands at a structural
// position, so candidates are the carvable chunks of r.
inline std::vector<TermPtr> anti_fill(const TermPtr& u, const TermPtr& r) {
  std::map<std::string, TermPtr> out;
  auto consider = [&](const TermPtr& h) {
    if (numholes(h) == 0 && canon_key(fill(u, h)) == canon_key(r)) out.emplace(canon_key(h), canonicalize(h));
  };
  for (auto& [k, chunk] : detail::carves1(r)) consider(chunk);
  return [&] {
    std::vector<TermPtr> v;
    for (auto& [k, h] : out) v.push_back(h);
    return v;
  }();
}

// Finite basis of the one-step predecessors of the upward closure of p,
// relative to the processes derivable from S.
inline std::vector<TermPtr> pred_basis(const TermPtr& p0, const WstsCtx& ctx) {
  TermPtr p = canonicalize(p0);
  std::map<std::string, TermPtr> found;
  std::set<std::string> tried;
  for (auto& dec : decompositions(p)) {
    // extend the context to exactly two holes
    int nh = numholes(dec.context);
    TermPtr d = dec.context;
    for (int i = nh; i < 2; ++i) d = par({d, hole()});
    if (numholes(d) != 2) continue;

    std::vector<TermPtr> cands = ctx.gbase;
    for (auto& rpart : dec.parts)
      for (auto& u : ctx.updS_holed)
        for (auto& h : anti_fill(u, rpart))
          for (auto& a : ctx.cnamesS) cands.push_back(loc(a, h));

    for (auto& g1 : cands) {
      for (auto& g2 : cands) {
        TermPtr q = canonicalize(fill_ordered(d, {g1, g2}));
        std::string key = serialize(q);
        if (!tried.insert(key).second) continue;
        if (found.count(key)) continue;
        for (auto& q2 : successors(q, ctx.mode)) {
          if (ctx.embeds(p, q2)) {
            found.emplace(key, q);
            break;
          }
        }
      }
    }
  }
  std::vector<TermPtr> out;
  for (auto& [k, v] : found) out.push_back(v);
  return minimize(std::move(out), ctx);
}

// Saturation: finite basis of all iterated predecessors of the upward
// closure of b (including b itself). Terminates by the wqo.
inline std::vector<TermPtr> pred_star(const std::vector<TermPtr>& b, const WstsCtx& ctx) {
  std::vector<TermPtr> basis = minimize(b, ctx);
  std::vector<TermPtr> frontier = basis;
  while (!frontier.empty()) {
    std::map<std::string, TermPtr> cand;
    for (auto& q : frontier)
      for (auto& x : pred_basis(q, ctx)) cand.emplace(serialize(x), x);
    std::vector<TermPtr> fresh;
    for (auto& [k, x] : cand) {
      bool covered = false;
      for (auto& bterm : basis)
        if (ctx.embeds(bterm, x)) {
          covered = true;
          break;
        }
      if (!covered) fresh.push_back(x);
    }
    if (fresh.empty()) break;
    std::vector<TermPtr> merged = basis;
    merged.insert(merged.end(), fresh.begin(), fresh.end());
    basis = minimize(std::move(merged), ctx);
    // survivors of the fresh batch form the next frontier
    std::set<std::string> fresh_keys;
    for (auto& f : fresh) fresh_keys.insert(serialize(f));
    frontier.clear();
    for (auto& x : basis)
      if (fresh_keys.count(serialize(x))) frontier.push_back(x);
  }
  return basis;
}

// Inserts a barbed process into q, in parallel or inside one adaptable
// process, in every possible way.
inline std::vector<TermPtr> add_barbed(const TermPtr& q, const std::vector<TermPtr>& fb) {
  std::vector<TermPtr> out;
  std::function<std::vector<TermPtr>(const TermPtr&, const TermPtr&)> inside =
      [&](const TermPtr& t, const TermPtr& r) -> std::vector<TermPtr> {
    std::vector<TermPtr> res;
    switch (t->kind) {
      case Kind::Loc: {
        res.push_back(loc(t->name, par({r, t->body})));
        for (auto& b2 : inside(t->body, r)) res.push_back(loc(t->name, b2));
        break;
      }
      case Kind::Par: {
        for (size_t i = 0; i < t->children.size(); ++i) {
          for (auto& c2 : inside(t->children[i], r)) {
            std::vector<TermPtr> cs = t->children;
            cs[i] = c2;
            res.push_back(par(std::move(cs)));
          }
        }
        break;
      }
      default:
        break;
    }
    return res;
  };
  for (auto& r : fb) {
    out.push_back(par({q, r}));
    for (auto& v : inside(q, r)) out.push_back(v);
  }
  return out;
}

// Finite basis of the processes that can exhibit alpha in k consecutive
// states along some computation of S-derivable processes.
inline std::vector<TermPtr> fb_alpha_k(const WstsCtx& ctx, const Act& alpha, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  std::vector<TermPtr> fb;
  for (auto& r : ctx.subpS)
    if (barb(r, alpha)) fb.push_back(r);
  std::vector<TermPtr> b = fb;
  for (int round = 2; round <= k; ++round) {
    std::map<std::string, TermPtr> pbB;
    for (auto& q : b)
      for (auto& x : pred_basis(q, ctx)) pbB.emplace(serialize(x), x);
    std::vector<TermPtr> ib;
    for (auto& [key, q] : pbB) {
      if (barb(q, alpha)) {
        ib.push_back(q);
      } else {
        for (auto& v : add_barbed(q, fb)) ib.push_back(v);
      }
    }
    b = minimize(std::move(ib), ctx);
  }
  return pred_star(b, ctx);
}

// Embedding check against a parallel composition given as components;
// handles the empty composition (which embeds into anything).
inline bool components_embed(const std::vector<TermPtr>& comps, const TermPtr& q) {
  if (comps.empty()) return true;
  ProcTree root;
  for (auto& c : comps) tree_children(canonicalize(c), root.children);
  return tree_embeds(root, tree_of(q));
}

/// Decides bounded adaptation for a cluster whose members avoid holes in
/// the scope of prefixes; `violated` means some cluster instance can pass
/// through k consecutive alpha-barbed states.
inline Verdict decide_ba(const Cluster& c, const Act& alpha, int k) {
  auto check_class = [](const TermPtr& t, const char* role) {
    auto cl = classify(t);
    if (cl.pattern != PatternClass::P2 && cl.pattern != PatternClass::P3)
      throw std::invalid_argument(std::string(role) +
                                  " uses holes under prefixes; bounded adaptation is "
                                  "undecidable for that class");
  };
  check_class(c.initial, "initial process");
  for (auto& m : c.mods) check_class(m, "modification process");

  std::vector<TermPtr> members{c.initial};
  members.insert(members.end(), c.mods.begin(), c.mods.end());
  WstsCtx ctx(members, Mode::Dynamic);
  TermPtr p = canonicalize(c.initial);

  for (auto& q : fb_alpha_k(ctx, alpha, k)) {
    std::vector<TermPtr> remaining;
    for (auto& comp : par_components(q)) {
      bool absorbed = false;
      for (auto& t : c.mods)
        if (ctx.embeds(comp, t)) {
          absorbed = true;
          break;
        }
      if (!absorbed) remaining.push_back(comp);
    }
    if (components_embed(remaining, p)) {
      Witness w;
      w.trace.push_back(q);
      return verdict_violated(std::move(w));
    }
  }
  return verdict_holds();
}

}  // namespace adapt
