#pragma once

// Core term representation for the adaptable-process calculus: processes,
// update patterns, canonical forms, hole filling, counting functions,
// containment structure and variant classification.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace adapt {

using Name = std::string;

// The name used by the static->dynamic encoding for dead update prefixes.
inline const Name kErrName = "err";

inline bool valid_name(const Name& n) {
  if (n.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_')) return false;
  for (char c : n)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$')) return false;
  return true;
}

enum class Kind : uint8_t { Nil, Par, Loc, Sum, Repl, Hole };
enum class PrefixKind : uint8_t { In, Out, Update };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Prefix {
  PrefixKind kind;
  Name name;
  TermPtr payload;  // Update only
};

struct Branch {
  Prefix prefix;
  TermPtr cont;
};

// Immutable node. Par children are ordered as written; canonical forms sort
// them. A Sum with zero branches is represented by Kind::Nil instead.
struct Term {
  Kind kind = Kind::Nil;
  Name name;                      // Loc
  std::vector<TermPtr> children;  // Par (size >= 2)
  std::vector<Branch> branches;   // Sum (size >= 1)
  Prefix prefix;                  // Repl
  TermPtr body;                   // Loc, Repl
};

// ---- constructors ----------------------------------------------------------

inline TermPtr nil() {
  static const TermPtr n = std::make_shared<Term>();
  return n;
}

inline TermPtr hole() {
  static const TermPtr h = [] {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Hole;
    return t;
  }();
  return h;
}

inline TermPtr loc(Name a, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Loc;
  t->name = std::move(a);
  t->body = std::move(body);
  return t;
}

// Parallel composition of the given components; flattens nested Par but never
// drops Nil components (structural congruence has no absorption law).
inline TermPtr par(std::vector<TermPtr> xs) {
  std::vector<TermPtr> flat;
  for (auto& x : xs) {
    if (x->kind == Kind::Par)
      flat.insert(flat.end(), x->children.begin(), x->children.end());
    else
      flat.push_back(std::move(x));
  }
  if (flat.empty()) return nil();
  if (flat.size() == 1) return flat[0];
  auto t = std::make_shared<Term>();
  t->kind = Kind::Par;
  t->children = std::move(flat);
  return t;
}

inline TermPtr sum(std::vector<Branch> branches) {
  if (branches.empty()) return nil();
  auto t = std::make_shared<Term>();
  t->kind = Kind::Sum;
  t->branches = std::move(branches);
  return t;
}

inline TermPtr repl(Prefix p, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Repl;
  t->prefix = std::move(p);
  t->body = std::move(body);
  return t;
}

inline Prefix in(Name a) { return Prefix{PrefixKind::In, std::move(a), nullptr}; }
inline Prefix out(Name a) { return Prefix{PrefixKind::Out, std::move(a), nullptr}; }
inline Prefix update(Name a, TermPtr pattern) {
  return Prefix{PrefixKind::Update, std::move(a), std::move(pattern)};
}

// pi.P as a one-branch sum.
inline TermPtr act(Prefix p, TermPtr cont) { return sum({Branch{std::move(p), std::move(cont)}}); }

// ---- serialization & canonical form ----------------------------------------

inline void serialize_into(const Term& t, std::string& out);

inline void serialize_prefix_into(const Prefix& p, std::string& out) {
  switch (p.kind) {
    case PrefixKind::In: out += 'i'; out += p.name; break;
    case PrefixKind::Out: out += 'o'; out += p.name; break;
    case PrefixKind::Update:
      out += 'u';
      out += p.name;
      out += '{';
      serialize_into(*p.payload, out);
      out += '}';
      break;
  }
}

inline void serialize_into(const Term& t, std::string& out) {
  switch (t.kind) {
    case Kind::Nil: out += '0'; break;
    case Kind::Hole: out += '@'; break;
    case Kind::Loc:
      out += 'L';
      out += t.name;
      out += '[';
      serialize_into(*t.body, out);
      out += ']';
      break;
    case Kind::Par: {
      out += "P(";
      for (size_t i = 0; i < t.children.size(); ++i) {
        if (i) out += ',';
        serialize_into(*t.children[i], out);
      }
      out += ')';
      break;
    }
    case Kind::Sum: {
      out += "S(";
      for (size_t i = 0; i < t.branches.size(); ++i) {
        if (i) out += '+';
        serialize_prefix_into(t.branches[i].prefix, out);
        out += '.';
        serialize_into(*t.branches[i].cont, out);
      }
      out += ')';
      break;
    }
    case Kind::Repl:
      out += 'R';
      serialize_prefix_into(t.prefix, out);
      out += '.';
      serialize_into(*t.body, out);
      break;
  }
}

inline std::string serialize(const Term& t) {
  std::string s;
  serialize_into(t, s);
  return s;
}
inline std::string serialize(const TermPtr& t) { return serialize(*t); }

// Unique representative of the structural-congruence class: Par flattened and
// sorted by serialization, recursively (also inside prefixes and payloads).
inline TermPtr canonicalize(const TermPtr& t) {
  switch (t->kind) {
    case Kind::Nil:
    case Kind::Hole:
      return t;
    case Kind::Loc: {
      auto b = canonicalize(t->body);
      if (b == t->body) return t;
      return loc(t->name, b);
    }
    case Kind::Par: {
      std::vector<TermPtr> cs;
      cs.reserve(t->children.size());
      for (auto& c : t->children) cs.push_back(canonicalize(c));
      std::vector<std::pair<std::string, TermPtr>> keyed;
      keyed.reserve(cs.size());
      auto flat = par(std::move(cs));
      if (flat->kind != Kind::Par) return flat;
      for (auto& c : flat->children) keyed.emplace_back(serialize(c), c);
      std::stable_sort(keyed.begin(), keyed.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<TermPtr> sorted;
      sorted.reserve(keyed.size());
      for (auto& [k, c] : keyed) sorted.push_back(c);
      return par(std::move(sorted));
    }
    case Kind::Sum: {
      std::vector<Branch> bs;
      bs.reserve(t->branches.size());
      for (auto& br : t->branches) {
        Prefix p = br.prefix;
        if (p.kind == PrefixKind::Update) p.payload = canonicalize(p.payload);
        bs.push_back(Branch{std::move(p), canonicalize(br.cont)});
      }
      return sum(std::move(bs));
    }
    case Kind::Repl: {
      Prefix p = t->prefix;
      if (p.kind == PrefixKind::Update) p.payload = canonicalize(p.payload);
      return repl(std::move(p), canonicalize(t->body));
    }
  }
  return t;
}

inline std::string canon_key(const TermPtr& t) { return serialize(canonicalize(t)); }

// Drops inert nil components of parallel compositions, recursively. The
// result is strongly bisimilar to t; reduction-graph search uses it to
// identify states, since replication steps otherwise pile up dead nils.
// Structural congruence itself has no absorption law.
inline TermPtr prune_nil(const TermPtr& t) {
  switch (t->kind) {
    case Kind::Nil:
    case Kind::Hole:
      return t;
    case Kind::Loc: return loc(t->name, prune_nil(t->body));
    case Kind::Par: {
      std::vector<TermPtr> cs;
      for (auto& c : t->children) {
        auto p = prune_nil(c);
        if (p->kind != Kind::Nil) cs.push_back(p);
      }
      return par(std::move(cs));  // empty list collapses to nil
    }
    case Kind::Sum: {
      std::vector<Branch> bs;
      for (auto& br : t->branches) {
        Prefix p = br.prefix;
        if (p.kind == PrefixKind::Update) p.payload = prune_nil(p.payload);
        bs.push_back(Branch{std::move(p), prune_nil(br.cont)});
      }
      return sum(std::move(bs));
    }
    case Kind::Repl: {
      Prefix p = t->prefix;
      if (p.kind == PrefixKind::Update) p.payload = prune_nil(p.payload);
      return repl(std::move(p), prune_nil(t->body));
    }
  }
  return t;
}

inline bool congruent(const TermPtr& a, const TermPtr& b) { return canon_key(a) == canon_key(b); }

// Top-level parallel components (normal-form decomposition, not recursive).
inline std::vector<TermPtr> par_components(const TermPtr& t) {
  if (t->kind == Kind::Par) return t->children;
  return {t};
}

// ---- hole filling -----------------------------------------------------------

// Replaces every hole of u not occurring inside an Update prefix payload by q.
inline TermPtr fill(const TermPtr& u, const TermPtr& q) {
  switch (u->kind) {
    case Kind::Hole: return q;
    case Kind::Nil: return u;
    case Kind::Loc: return loc(u->name, fill(u->body, q));
    case Kind::Par: {
      std::vector<TermPtr> cs;
      cs.reserve(u->children.size());
      for (auto& c : u->children) cs.push_back(fill(c, q));
      return par(std::move(cs));
    }
    case Kind::Sum: {
      std::vector<Branch> bs;
      bs.reserve(u->branches.size());
      for (auto& br : u->branches) bs.push_back(Branch{br.prefix, fill(br.cont, q)});
      return sum(std::move(bs));
    }
    case Kind::Repl: return repl(u->prefix, fill(u->body, q));
  }
  return u;
}

// Fills the i-th structural hole (traversal order) with terms[i]; used for
// syntactic contexts. Holes inside update payloads are never touched.
inline TermPtr fill_ordered_rec(const TermPtr& u, const std::vector<TermPtr>& terms, size_t& idx) {
  switch (u->kind) {
    case Kind::Hole: {
      if (idx >= terms.size()) throw std::invalid_argument("fill_ordered: not enough terms");
      return terms[idx++];
    }
    case Kind::Nil: return u;
    case Kind::Loc: return loc(u->name, fill_ordered_rec(u->body, terms, idx));
    case Kind::Par: {
      std::vector<TermPtr> cs;
      for (auto& c : u->children) cs.push_back(fill_ordered_rec(c, terms, idx));
      return par(std::move(cs));
    }
    case Kind::Sum: {
      std::vector<Branch> bs;
      for (auto& br : u->branches) bs.push_back(Branch{br.prefix, fill_ordered_rec(br.cont, terms, idx)});
      return sum(std::move(bs));
    }
    case Kind::Repl: return repl(u->prefix, fill_ordered_rec(u->body, terms, idx));
  }
  return u;
}

inline TermPtr fill_ordered(const TermPtr& u, const std::vector<TermPtr>& terms) {
  size_t idx = 0;
  auto r = fill_ordered_rec(u, terms, idx);
  if (idx != terms.size()) throw std::invalid_argument("fill_ordered: too many terms");
  return r;
}

// ---- counting functions -----------------------------------------------------

// Number of adaptable processes occurring in u, not under prefixes and not
// inside nested update payloads.
inline int numap(const TermPtr& u) {
  switch (u->kind) {
    case Kind::Hole:
    case Kind::Nil:
    case Kind::Sum:
    case Kind::Repl:
      return 0;
    case Kind::Loc: return 1 + numap(u->body);
    case Kind::Par: {
      int n = 0;
      for (auto& c : u->children) n += numap(c);
      return n;
    }
  }
  return 0;
}

// Number of holes occurring in u outside nested update payloads.
inline int numholes(const TermPtr& u) {
  switch (u->kind) {
    case Kind::Hole: return 1;
    case Kind::Nil: return 0;
    case Kind::Loc: return numholes(u->body);
    case Kind::Par: {
      int n = 0;
      for (auto& c : u->children) n += numholes(c);
      return n;
    }
    case Kind::Sum: {
      int n = 0;
      for (auto& br : u->branches) n += numholes(br.cont);
      return n;
    }
    case Kind::Repl: return numholes(u->body);
  }
  return 0;
}

// Number of prefixed holes: holes of u that occur behind a prefix.
inline int numph(const TermPtr& u) {
  switch (u->kind) {
    case Kind::Hole:
    case Kind::Nil:
      return 0;
    case Kind::Loc: return numph(u->body);
    case Kind::Par: {
      int n = 0;
      for (auto& c : u->children) n += numph(c);
      return n;
    }
    case Kind::Sum: {
      int n = 0;
      for (auto& br : u->branches) n += numholes(br.cont);
      return n;
    }
    case Kind::Repl: return numholes(u->body);
  }
  return 0;
}

struct Counts {
  int numap = 0;
  int numholes = 0;
  int numph = 0;
};

inline Counts counts(const TermPtr& u) { return Counts{numap(u), numholes(u), numph(u)}; }

// ---- containment structure ---------------------------------------------------

// Unordered tree of adaptable-process names; the root carries no label.
struct DenTree {
  std::optional<Name> label;  // nullopt = epsilon root
  std::vector<DenTree> children;

  std::string serialize() const {
    std::vector<std::string> kids;
    kids.reserve(children.size());
    for (auto& c : children) kids.push_back(c.serialize());
    std::sort(kids.begin(), kids.end());
    std::string s = label ? *label : std::string("~");
    s += '(';
    for (size_t i = 0; i < kids.size(); ++i) {
      if (i) s += ',';
      s += kids[i];
    }
    s += ')';
    return s;
  }
  bool operator==(const DenTree& o) const { return serialize() == o.serialize(); }
};

inline void cstr_children(const TermPtr& t, std::vector<DenTree>& out) {
  switch (t->kind) {
    case Kind::Loc: {
      DenTree child;
      child.label = t->name;
      cstr_children(t->body, child.children);
      out.push_back(std::move(child));
      break;
    }
    case Kind::Par:
      for (auto& c : t->children) cstr_children(c, out);
      break;
    default:
      break;  // prefixes, nil and holes contribute nothing
  }
}

// Containment structure denotation: root epsilon, one subtree per top-level
// adaptable process, recursively.
inline DenTree cstr(const TermPtr& p) {
  DenTree root;
  cstr_children(p, root.children);
  return root;
}

inline bool dentree_single_child(const DenTree& t) { return !t.label && t.children.size() == 1; }

// Collects cstr(a[P']) for every adaptable-process subterm a[P'] of p,
// including those inside update payloads and continuations.
inline void cstrs_into(const TermPtr& t, std::map<std::string, DenTree>& acc) {
  switch (t->kind) {
    case Kind::Loc: {
      DenTree d;
      cstr_children(t, d.children);
      acc.emplace(d.serialize(), d);
      cstrs_into(t->body, acc);
      break;
    }
    case Kind::Par:
      for (auto& c : t->children) cstrs_into(c, acc);
      break;
    case Kind::Sum:
      for (auto& br : t->branches) {
        if (br.prefix.kind == PrefixKind::Update) cstrs_into(br.prefix.payload, acc);
        cstrs_into(br.cont, acc);
      }
      break;
    case Kind::Repl:
      if (t->prefix.kind == PrefixKind::Update) cstrs_into(t->prefix.payload, acc);
      cstrs_into(t->body, acc);
      break;
    default:
      break;
  }
}

inline std::vector<DenTree> cstrs(const TermPtr& p) {
  std::map<std::string, DenTree> acc;
  cstrs_into(p, acc);
  std::vector<DenTree> out;
  out.reserve(acc.size());
  for (auto& [k, v] : acc) out.push_back(v);
  return out;
}

// ---- classification -----------------------------------------------------------

enum class Topology : uint8_t { Static, DynamicOnly };
enum class PatternClass : uint8_t { None = 0, P1 = 1, P2 = 2, P3 = 3 };

struct Classification {
  Topology topology;
  PatternClass pattern;
};

namespace detail {

inline bool static_prefix_ok(const Prefix& p);

// Category A: no adaptable processes, no holes, prefixes well-shaped.
inline bool is_static_A(const TermPtr& t) {
  switch (t->kind) {
    case Kind::Nil: return true;
    case Kind::Hole:
    case Kind::Loc:
      return false;
    case Kind::Par:
      for (auto& c : t->children)
        if (!is_static_A(c)) return false;
      return true;
    case Kind::Sum:
      for (auto& br : t->branches)
        if (!static_prefix_ok(br.prefix) || !is_static_A(br.cont)) return false;
      return true;
    case Kind::Repl: return static_prefix_ok(t->prefix) && is_static_A(t->body);
  }
  return false;
}

// Hole-extended category A: holes allowed anywhere, still no adaptable processes.
inline bool is_static_UA(const TermPtr& t) {
  switch (t->kind) {
    case Kind::Nil:
    case Kind::Hole:
      return true;
    case Kind::Loc: return false;
    case Kind::Par:
      for (auto& c : t->children)
        if (!is_static_UA(c)) return false;
      return true;
    case Kind::Sum:
      for (auto& br : t->branches)
        if (!static_prefix_ok(br.prefix) || !is_static_UA(br.cont)) return false;
      return true;
    case Kind::Repl: return static_prefix_ok(t->prefix) && is_static_UA(t->body);
  }
  return false;
}

// Hole-extended category P: adaptable processes allowed, but never behind prefixes.
inline bool is_static_U(const TermPtr& t) {
  switch (t->kind) {
    case Kind::Nil:
    case Kind::Hole:
      return true;
    case Kind::Loc: return is_static_U(t->body);
    case Kind::Par:
      for (auto& c : t->children)
        if (!is_static_U(c)) return false;
      return true;
    case Kind::Sum:
    case Kind::Repl:
      return is_static_UA(t);
  }
  return false;
}

// Update payload shape a[U] || A with A in category A, holes only inside a[U].
inline bool static_payload_ok(const Name& a, const TermPtr& payload) {
  auto comps = par_components(payload);
  int locs = 0;
  for (auto& c : comps) {
    if (c->kind == Kind::Loc && c->name == a) {
      ++locs;
      if (!is_static_U(c->body)) return false;
    } else if (!is_static_A(c)) {
      return false;
    }
  }
  return locs == 1;
}

inline bool static_prefix_ok(const Prefix& p) {
  if (p.kind != PrefixKind::Update) return true;
  return static_payload_ok(p.name, p.payload);
}

inline bool is_static_P(const TermPtr& t) {
  switch (t->kind) {
    case Kind::Loc: return is_static_P(t->body);
    case Kind::Par:
      for (auto& c : t->children)
        if (!is_static_P(c)) return false;
      return true;
    default:
      return is_static_A(t);
  }
}

// Class-3 pattern: exactly one hole, reachable through Loc/Par only.
inline bool is_class3_pattern(const TermPtr& u) {
  if (numholes(u) != 1) return false;
  // the single hole must not be behind a prefix
  switch (u->kind) {
    case Kind::Hole: return true;
    case Kind::Loc: return is_class3_pattern(u->body);
    case Kind::Par: {
      for (auto& c : u->children)
        if (numholes(c) == 1) return is_class3_pattern(c);
      return false;
    }
    default:
      return false;  // hole behind a prefix
  }
}

// Class-2 pattern: no hole occurs in the scope of a prefix.
inline bool is_class2_pattern(const TermPtr& u) {
  switch (u->kind) {
    case Kind::Nil:
    case Kind::Hole:
      return true;
    case Kind::Loc: return is_class2_pattern(u->body);
    case Kind::Par:
      for (auto& c : u->children)
        if (!is_class2_pattern(c)) return false;
      return true;
    case Kind::Sum:
      for (auto& br : u->branches)
        if (numholes(br.cont) > 0) return false;
      return true;
    case Kind::Repl: return numholes(u->body) == 0;
  }
  return true;
}

inline void collect_payloads(const TermPtr& t, std::vector<TermPtr>& out) {
  switch (t->kind) {
    case Kind::Loc: collect_payloads(t->body, out); break;
    case Kind::Par:
      for (auto& c : t->children) collect_payloads(c, out);
      break;
    case Kind::Sum:
      for (auto& br : t->branches) {
        if (br.prefix.kind == PrefixKind::Update) {
          out.push_back(br.prefix.payload);
          collect_payloads(br.prefix.payload, out);
        }
        collect_payloads(br.cont, out);
      }
      break;
    case Kind::Repl:
      if (t->prefix.kind == PrefixKind::Update) {
        out.push_back(t->prefix.payload);
        collect_payloads(t->prefix.payload, out);
      }
      collect_payloads(t->body, out);
      break;
    default:
      break;
  }
}

}  // namespace detail

// Tightest class of p: pattern 3 > 2 > 1; topology per the static grammar.
inline Classification classify(const TermPtr& p) {
  Classification c;
  c.topology = detail::is_static_P(p) ? Topology::Static : Topology::DynamicOnly;
  if (numholes(p) > 0) {
    c.pattern = PatternClass::None;  // not a closed process
    return c;
  }
  std::vector<TermPtr> payloads;
  detail::collect_payloads(p, payloads);
  bool all3 = true, all2 = true;
  for (auto& u : payloads) {
    if (all3 && !detail::is_class3_pattern(u)) all3 = false;
    if (all2 && !detail::is_class2_pattern(u)) all2 = false;
    if (!all3 && !all2) break;
  }
  c.pattern = all3 ? PatternClass::P3 : (all2 ? PatternClass::P2 : PatternClass::P1);
  return c;
}

// ---- syntactic inventories ------------------------------------------------------

namespace detail {

inline void subp_into(const TermPtr& t, std::map<std::string, TermPtr>& acc) {
  auto add = [&acc](const TermPtr& x) { acc.emplace(canon_key(x), canonicalize(x)); };
  switch (t->kind) {
    case Kind::Nil: add(t); break;
    case Kind::Hole: break;
    case Kind::Loc: subp_into(t->body, acc); break;
    case Kind::Par:
      for (auto& c : t->children) subp_into(c, acc);
      break;
    case Kind::Sum:
      add(t);
      for (auto& br : t->branches) {
        // the single prefixed process pi.P contributes itself plus the
        // subprocesses of its continuation (and payload, for updates)
        if (t->branches.size() > 1) add(sum({br}));
        if (br.prefix.kind == PrefixKind::Update) subp_into(br.prefix.payload, acc);
        subp_into(br.cont, acc);
      }
      break;
    case Kind::Repl:
      add(t);
      if (t->prefix.kind == PrefixKind::Update) subp_into(t->prefix.payload, acc);
      subp_into(t->body, acc);
      break;
  }
}

inline void cnames_into(const TermPtr& t, std::set<Name>& acc) {
  switch (t->kind) {
    case Kind::Loc:
      acc.insert(t->name);
      cnames_into(t->body, acc);
      break;
    case Kind::Par:
      for (auto& c : t->children) cnames_into(c, acc);
      break;
    case Kind::Sum:
      for (auto& br : t->branches) {
        if (br.prefix.kind == PrefixKind::Update) cnames_into(br.prefix.payload, acc);
        cnames_into(br.cont, acc);
      }
      break;
    case Kind::Repl:
      if (t->prefix.kind == PrefixKind::Update) cnames_into(t->prefix.payload, acc);
      cnames_into(t->body, acc);
      break;
    default:
      break;
  }
}

inline void upd_into(const TermPtr& t, std::map<std::string, TermPtr>& acc) {
  switch (t->kind) {
    case Kind::Loc: upd_into(t->body, acc); break;
    case Kind::Par:
      for (auto& c : t->children) upd_into(c, acc);
      break;
    case Kind::Sum:
      for (auto& br : t->branches) {
        if (br.prefix.kind == PrefixKind::Update) {
          acc.emplace(canon_key(br.prefix.payload), canonicalize(br.prefix.payload));
          upd_into(br.prefix.payload, acc);
        }
        upd_into(br.cont, acc);
      }
      break;
    case Kind::Repl:
      if (t->prefix.kind == PrefixKind::Update) {
        acc.emplace(canon_key(t->prefix.payload), canonicalize(t->prefix.payload));
        upd_into(t->prefix.payload, acc);
      }
      upd_into(t->body, acc);
      break;
    default:
      break;
  }
}

}  // namespace detail

// Sequential subprocesses of every term in s, up to structural congruence.
inline std::vector<TermPtr> subp(const std::vector<TermPtr>& s) {
  std::map<std::string, TermPtr> acc;
  for (auto& t : s) detail::subp_into(t, acc);
  std::vector<TermPtr> out;
  out.reserve(acc.size());
  for (auto& [k, v] : acc) out.push_back(v);
  return out;
}

inline std::set<Name> cnames(const std::vector<TermPtr>& s) {
  std::set<Name> acc;
  for (auto& t : s) detail::cnames_into(t, acc);
  return acc;
}

// All update patterns occurring in the terms of s.
inline std::vector<TermPtr> upd(const std::vector<TermPtr>& s) {
  std::map<std::string, TermPtr> acc;
  for (auto& t : s) detail::upd_into(t, acc);
  std::vector<TermPtr> out;
  out.reserve(acc.size());
  for (auto& [k, v] : acc) out.push_back(v);
  return out;
}

// Top-level parallel decomposition (with multiplicities), canonicalized.
inline std::vector<TermPtr> par_of(const TermPtr& t) {
  std::vector<TermPtr> out;
  for (auto& c : par_components(canonicalize(t))) out.push_back(c);
  return out;
}

struct Inventories {
  std::vector<TermPtr> subp;
  std::set<Name> cnames;
  std::vector<TermPtr> upd;
  std::vector<std::vector<TermPtr>> par;  // one entry per input term
};

inline Inventories inventories(const std::vector<TermPtr>& s) {
  Inventories inv;
  inv.subp = subp(s);
  inv.cnames = cnames(s);
  inv.upd = upd(s);
  for (auto& t : s) inv.par.push_back(par_of(t));
  return inv;
}

}  // namespace adapt
