#pragma once

// The static->dynamic encoding: adaptable processes and update prefixes are
// renamed after their containment structure denotation, so that name
// equality enforces the structural side conditions of static update.

#include "adapt/cluster.hpp"
#include "adapt/term.hpp"

namespace adapt {

// Set of single-child containment structure denotations, keyed by canonical
// serialization.
struct DenSet {
  std::map<std::string, DenTree> trees;

  void add(const DenTree& t) { trees.emplace(t.serialize(), t); }
  bool contains(const DenTree& t) const { return trees.count(t.serialize()) > 0; }

  // members whose only root child is labeled a
  std::vector<DenTree> project(const Name& a) const {
    std::vector<DenTree> out;
    for (auto& [k, t] : trees)
      if (dentree_single_child(t) && t.children[0].label == a) out.push_back(t);
    return out;
  }
};

inline DenSet denset_of(const std::vector<TermPtr>& terms) {
  DenSet s;
  for (auto& t : terms)
    for (auto& d : cstrs(t)) s.add(d);
  return s;
}

// Injective denotation -> name table. Names are derived from a content hash
// of the canonical serialization, so registries built in any order agree;
// single-node denotations a get the fixed name k$a.
struct NameRegistry {
  std::map<std::string, Name> table;

  static Name kappa_for(const DenTree& t) {
    if (dentree_single_child(t) && t.children[0].children.empty())
      return "k$" + *t.children[0].label;
    // FNV-1a over the canonical serialization
    uint64_t h = 1469598103934665603ull;
    for (char c : t.serialize()) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    Name n = "k$";
    for (int i = 60; i >= 0; i -= 4) n += hex[(h >> i) & 0xf];
    return n;
  }

  Name lookup(const DenTree& t) const {
    auto it = table.find(t.serialize());
    if (it != table.end()) return it->second;
    return kappa_for(t);
  }
};

inline NameRegistry build_registry(const DenSet& s) {
  NameRegistry r;
  std::map<Name, std::string> inverse;
  for (auto& [key, tree] : s.trees) {
    for (auto& c : tree.children)
      if (c.label && *c.label == kErrName)
        throw std::invalid_argument("reserved name 'err' occurs in a denotation");
    Name k = NameRegistry::kappa_for(tree);
    auto [it, fresh] = inverse.emplace(k, key);
    if (!fresh && it->second != key)
      throw std::runtime_error("registry digest collision for " + k);
    r.table.emplace(key, k);
  }
  return r;
}

namespace detail {

inline TermPtr dyn_rec(const TermPtr& t, const DenSet& s, const NameRegistry& r);

// Splits a static update payload into the recreated process a[U] and the
// sibling A-components.
struct PayloadShape {
  TermPtr u;                   // content pattern of a[U]
  std::vector<TermPtr> rest;   // the A part
};

inline PayloadShape split_payload(const Name& a, const TermPtr& payload) {
  PayloadShape sh;
  int found = -1;
  auto comps = par_components(payload);
  for (size_t i = 0; i < comps.size(); ++i) {
    if (found < 0 && comps[i]->kind == Kind::Loc && comps[i]->name == a) {
      found = static_cast<int>(i);
      sh.u = comps[i]->body;
    } else {
      sh.rest.push_back(comps[i]);
    }
  }
  if (found < 0)
    throw std::invalid_argument("update payload on '" + a + "' is not statically shaped");
  return sh;
}

// Rebuilds kappa{kappa[U'] || A'} from the encoded parts.
inline TermPtr rebuild_payload(const Name& kappa, const TermPtr& u, const std::vector<TermPtr>& rest) {
  std::vector<TermPtr> comps{loc(kappa, u)};
  comps.insert(comps.end(), rest.begin(), rest.end());
  return par(std::move(comps));
}

// Encodes one (possibly replicated) update-prefixed process; returns the
// replacement branches for the sum case.
inline std::vector<Branch> dyn_update_branches(const Prefix& p, const TermPtr& cont,
                                               const DenSet& s, const NameRegistry& r) {
  PayloadShape sh = split_payload(p.name, p.payload);
  TermPtr du = dyn_rec(sh.u, s, r);
  std::vector<TermPtr> drest;
  drest.reserve(sh.rest.size());
  for (auto& x : sh.rest) drest.push_back(dyn_rec(x, s, r));
  TermPtr dcont = dyn_rec(cont, s, r);

  int nh = numholes(sh.u);
  int na = numap(sh.u);
  int np = numph(sh.u);
  if (nh == 0) {
    // rename after the denotation of the recreated content
    DenTree d = cstr(loc(p.name, sh.u));
    Name kappa = r.lookup(d);
    return {Branch{update(kappa, rebuild_payload(kappa, du, drest)), dcont}};
  }
  if (na != 0) {
    // ill-formed for static update: dead prefix on the error name
    return {Branch{update(kErrName, nil()), dcont}};
  }
  if (nh == 1 && np == 0) {
    // one unguarded hole: one branch per denotation in S with root child a
    std::vector<Branch> out;
    for (auto& d : s.project(p.name)) {
      Name kappa = r.lookup(d);
      out.push_back(Branch{update(kappa, rebuild_payload(kappa, du, drest)), dcont});
    }
    return out;
  }
  // single guarded hole, or several holes: only contents without adaptable
  // processes may match, i.e. the fixed single-node name
  DenTree single;
  DenTree child;
  child.label = p.name;
  single.children.push_back(child);
  Name kappa = r.lookup(single);
  return {Branch{update(kappa, rebuild_payload(kappa, du, drest)), dcont}};
}

inline TermPtr dyn_rec(const TermPtr& t, const DenSet& s, const NameRegistry& r) {
  switch (t->kind) {
    case Kind::Nil:
    case Kind::Hole:
      return t;
    case Kind::Loc: {
      DenTree d;
      cstr_children(t, d.children);
      if (!s.contains(d))
        throw std::invalid_argument("denotation of '" + t->name + "[..]' is missing from S");
      return loc(r.lookup(d), dyn_rec(t->body, s, r));
    }
    case Kind::Par: {
      std::vector<TermPtr> cs;
      cs.reserve(t->children.size());
      for (auto& c : t->children) cs.push_back(dyn_rec(c, s, r));
      return par(std::move(cs));
    }
    case Kind::Sum: {
      std::vector<Branch> bs;
      for (auto& br : t->branches) {
        if (br.prefix.kind == PrefixKind::Update) {
          auto expanded = dyn_update_branches(br.prefix, br.cont, s, r);
          bs.insert(bs.end(), expanded.begin(), expanded.end());
        } else {
          bs.push_back(Branch{br.prefix, dyn_rec(br.cont, s, r)});
        }
      }
      return sum(std::move(bs));
    }
    case Kind::Repl: {
      if (t->prefix.kind != PrefixKind::Update)
        return repl(t->prefix, dyn_rec(t->body, s, r));
      auto branches = dyn_update_branches(t->prefix, t->body, s, r);
      std::vector<TermPtr> prods;
      prods.reserve(branches.size());
      for (auto& br : branches) prods.push_back(repl(br.prefix, br.cont));
      return par(std::move(prods));
    }
  }
  return t;
}

}  // namespace detail

/// Encodes a static process into a dynamic one over the denotation set s.
/// Requires classify(p).topology == Static and cstrs(p) included in s.
inline TermPtr dyn(const TermPtr& p, const DenSet& s, const NameRegistry& r) {
  if (classify(p).topology != Topology::Static)
    throw std::invalid_argument("dyn: process does not have a static topology");
  return detail::dyn_rec(p, s, r);
}

// Encodes initial process and modifications against the shared denotation
// set (the union of their containment structures).
inline Cluster dyn_cluster(const Cluster& c) {
  std::vector<TermPtr> all{c.initial};
  all.insert(all.end(), c.mods.begin(), c.mods.end());
  DenSet s = denset_of(all);
  NameRegistry r = build_registry(s);
  Cluster out;
  out.initial = dyn(c.initial, s, r);
  for (auto& m : c.mods) out.mods.push_back(dyn(m, s, r));
  return out;
}

}  // namespace adapt
