#pragma once

// Eventual adaptation for the static preserving fragment: Petri-net
// translation, Karp-Miller place boundedness, the infinite-visit reduction
// and the decision procedure.

#include "adapt/statdyn.hpp"
#include "adapt/wsts.hpp"

namespace adapt {

struct PlaceId {
  enum class K : uint8_t { Proc, Path, Start, Go } kind = K::Start;
  TermPtr seq;             // Proc: a sequential subprocess (canonical)
  std::vector<Name> addr;  // Proc: enclosing location names; Path: nonempty

  static PlaceId start() { return PlaceId{K::Start, nullptr, {}}; }
  static PlaceId go() { return PlaceId{K::Go, nullptr, {}}; }
  static PlaceId proc(TermPtr t, std::vector<Name> a) {
    return PlaceId{K::Proc, std::move(t), std::move(a)};
  }
  static PlaceId path(std::vector<Name> a) { return PlaceId{K::Path, nullptr, std::move(a)}; }

  std::string str() const {
    auto addr_str = [this] {
      if (addr.empty()) return std::string("eps");
      std::string s;
      for (size_t i = 0; i < addr.size(); ++i) {
        if (i) s += '.';
        s += addr[i];
      }
      return s;
    };
    switch (kind) {
      case K::Start: return "start";
      case K::Go: return "go";
      case K::Path: return "path:" + addr_str();
      case K::Proc: {
        std::string body = serialize(seq);
        return "proc:" + addr_str() + ":" + body;
      }
    }
    return "?";
  }
};

// Sparse marking / transition sides over indexed places.
using Marking = std::map<int, long>;

inline Marking& madd(Marking& m, int place, long n = 1) {
  if ((m[place] += n) == 0) m.erase(place);
  return m;
}

inline Marking muplus(Marking a, const Marking& b) {
  for (auto& [p, n] : b) madd(a, p, n);
  return a;
}

inline bool mleq(const Marking& a, const Marking& b) {
  for (auto& [p, n] : a) {
    auto it = b.find(p);
    if (it == b.end() || it->second < n) return false;
  }
  return true;
}

struct Transition {
  Marking pre, post;
  bool operator==(const Transition& o) const { return pre == o.pre && post == o.post; }
};

struct PetriNet {
  std::vector<PlaceId> places;
  std::map<std::string, int> index;  // PlaceId::str() -> place number
  std::vector<Transition> transitions;
  Marking init;

  int place(const PlaceId& p) {
    auto key = p.str();
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(places.size());
    places.push_back(p);
    index.emplace(std::move(key), id);
    return id;
  }
  int find_place(const std::string& key) const {
    auto it = index.find(key);
    return it == index.end() ? -1 : it->second;
  }
  void add_transition(Marking pre, Marking post) {
    if (!tset_.emplace(pre, post).second) return;
    transitions.push_back(Transition{std::move(pre), std::move(post)});
  }

 private:
  std::set<std::pair<Marking, Marking>> tset_;
};

// dec_sigma: tokens for the sequential subprocesses and location paths of p.
// A hole contributes nothing: a preserving update leaves the prior content
// tokens in place, so they already stand for it.
inline void dec_into(PetriNet& net, const std::vector<Name>& sigma, const TermPtr& t, Marking& m) {
  switch (t->kind) {
    case Kind::Loc: {
      std::vector<Name> inner = sigma;
      inner.push_back(t->name);
      madd(m, net.place(PlaceId::path(inner)));
      dec_into(net, inner, t->body, m);
      break;
    }
    case Kind::Par:
      for (auto& c : t->children) dec_into(net, sigma, c, m);
      break;
    case Kind::Hole:
      break;
    default:
      madd(m, net.place(PlaceId::proc(canonicalize(t), sigma)));
      break;
  }
}

inline Marking dec(PetriNet& net, const std::vector<Name>& sigma, const TermPtr& t) {
  Marking m;
  dec_into(net, sigma, t, m);
  return m;
}

namespace detail {

inline bool addr_is_prefix(const std::vector<Name>& pre, const std::vector<Name>& full) {
  if (pre.size() > full.size()) return false;
  for (size_t i = 0; i < pre.size(); ++i)
    if (pre[i] != full[i]) return false;
  return true;
}

inline void collect_ambpaths(const TermPtr& t, std::vector<Name>& cur,
                             std::set<std::vector<Name>>& out) {
  switch (t->kind) {
    case Kind::Loc: {
      cur.push_back(t->name);
      out.insert(cur);
      collect_ambpaths(t->body, cur, out);
      cur.pop_back();
      break;
    }
    case Kind::Par:
      for (auto& c : t->children) collect_ambpaths(c, cur, out);
      break;
    default:
      break;  // locations never occur behind prefixes in the translated class
  }
}

struct UpdateShape {
  TermPtr content;             // U of a[U] || A
  std::vector<TermPtr> rest;   // the A components
  bool ok = false;
};

inline UpdateShape update_shape(const Name& a, const TermPtr& payload) {
  UpdateShape sh;
  int found = -1;
  auto comps = par_components(payload);
  for (size_t i = 0; i < comps.size(); ++i) {
    if (found < 0 && comps[i]->kind == Kind::Loc && comps[i]->name == a) {
      found = static_cast<int>(i);
      sh.content = comps[i]->body;
    } else {
      sh.rest.push_back(comps[i]);
    }
  }
  sh.ok = found >= 0;
  return sh;
}

}  // namespace detail

/// Translates a cluster of static preserving processes to its Petri net.
/// Members are first renamed by the dynamic encoding so that update
/// firability is plain name equality.
inline PetriNet translate(const Cluster& c) {
  for (auto& t : std::vector<TermPtr>{c.initial}) {
    auto cl = classify(t);
    if (cl.topology != Topology::Static || cl.pattern != PatternClass::P3)
      throw std::invalid_argument("translate: initial process is not static preserving");
  }
  for (auto& t : c.mods) {
    auto cl = classify(t);
    if (cl.topology != Topology::Static || cl.pattern != PatternClass::P3)
      throw std::invalid_argument("translate: modification process is not static preserving");
  }
  Cluster d = dyn_cluster(c);

  PetriNet net;
  int start = net.place(PlaceId::start());
  int go = net.place(PlaceId::go());

  std::vector<TermPtr> members{canonicalize(d.initial)};
  for (auto& m : d.mods) members.push_back(canonicalize(m));

  // places: all sequential subprocesses at all addresses, plus the paths
  std::set<std::vector<Name>> paths;
  for (auto& m : members) {
    std::vector<Name> cur;
    detail::collect_ambpaths(m, cur, paths);
  }
  std::vector<std::vector<Name>> addrs{{}};
  for (auto& p : paths) {
    addrs.push_back(p);
    net.place(PlaceId::path(p));
  }
  std::vector<TermPtr> seqs = subp(members);
  for (auto& s : seqs)
    for (auto& a : addrs) net.place(PlaceId::proc(s, a));

  // (1) start spawns the decomposition of each modification process
  for (auto& m : d.mods) {
    Marking pre;
    madd(pre, start);
    Marking post;
    madd(post, start);
    dec_into(net, {}, m, post);
    net.add_transition(std::move(pre), std::move(post));
  }
  // (2) start -> go
  {
    Marking pre, post;
    madd(pre, start);
    madd(post, go);
    net.add_transition(std::move(pre), std::move(post));
  }

  struct Cap {
    int place;                    // token holding the capability
    std::vector<Name> addr;
    bool replicated;
    Prefix prefix;
    TermPtr cont;                 // continuation (sum branch or replication body)
  };
  std::vector<Cap> caps;
  for (auto& s : seqs) {
    for (auto& a : addrs) {
      int pl = net.place(PlaceId::proc(s, a));
      if (s->kind == Kind::Sum) {
        for (auto& br : s->branches) caps.push_back(Cap{pl, a, false, br.prefix, br.cont});
      } else if (s->kind == Kind::Repl) {
        caps.push_back(Cap{pl, a, true, s->prefix, s->body});
      }
    }
  }

  // (3)-(5) input/output synchronization
  for (auto& ci : caps) {
    if (ci.prefix.kind != PrefixKind::In) continue;
    for (auto& cj : caps) {
      if (cj.prefix.kind != PrefixKind::Out || cj.prefix.name != ci.prefix.name) continue;
      Marking pre;
      madd(pre, go);
      madd(pre, ci.place);
      madd(pre, cj.place);
      Marking post;
      madd(post, go);
      if (ci.replicated) madd(post, ci.place);
      if (cj.replicated) madd(post, cj.place);
      dec_into(net, ci.addr, ci.cont, post);
      dec_into(net, cj.addr, cj.cont, post);
      net.add_transition(std::move(pre), std::move(post));
    }
  }

  // (6)-(9) update synchronization against every path token on the name
  for (auto& cj : caps) {
    if (cj.prefix.kind != PrefixKind::Update) continue;
    auto sh = detail::update_shape(cj.prefix.name, cj.prefix.payload);
    if (!sh.ok) continue;  // dead prefixes (the error rename) never fire
    for (auto& target : addrs) {
      if (target.empty() || target.back() != cj.prefix.name) continue;
      bool self = detail::addr_is_prefix(target, cj.addr);
      int path_place = net.place(PlaceId::path(target));
      Marking pre;
      madd(pre, go);
      madd(pre, cj.place);
      madd(pre, path_place, self ? 2 : 1);
      Marking post;
      madd(post, go);
      if (cj.replicated) madd(post, cj.place);
      madd(post, path_place, self ? 2 : 1);
      dec_into(net, cj.addr, cj.cont, post);
      std::vector<Name> parent(target.begin(), target.end() - 1);
      for (auto& r : sh.rest) dec_into(net, parent, r, post);
      dec_into(net, target, sh.content, post);
      net.add_transition(std::move(pre), std::move(post));
    }
  }

  net.init = dec(net, {}, d.initial);
  madd(net.init, start);
  return net;
}

// ---- Karp-Miller ------------------------------------------------------------------

namespace detail {

constexpr long kOmega = -1;

struct KmNode {
  std::vector<long> marking;  // kOmega = unbounded
  int parent = -1;
};

inline bool km_leq(const std::vector<long>& a, const std::vector<long>& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == kOmega && b[i] != kOmega) return false;
    if (b[i] == kOmega) continue;
    if (a[i] > b[i]) return false;
  }
  return true;
}

}  // namespace detail

// Coverability tree with omega acceleration against path ancestors.
// Returns the set of places that are unbounded.
inline std::vector<bool> karp_miller_unbounded(const PetriNet& net) {
  using detail::kOmega;
  size_t np = net.places.size();
  auto to_vec = [&](const Marking& m) {
    std::vector<long> v(np, 0);
    for (auto& [p, n] : m) v[static_cast<size_t>(p)] = n;
    return v;
  };
  struct Side {
    std::vector<std::pair<int, long>> items;
  };
  std::vector<Side> pres(net.transitions.size()), posts(net.transitions.size());
  for (size_t t = 0; t < net.transitions.size(); ++t) {
    for (auto& [p, n] : net.transitions[t].pre) pres[t].items.push_back({p, n});
    for (auto& [p, n] : net.transitions[t].post) posts[t].items.push_back({p, n});
  }

  std::vector<detail::KmNode> nodes;
  nodes.push_back({to_vec(net.init), -1});
  std::deque<int> todo{0};
  std::vector<bool> unbounded(np, false);

  while (!todo.empty()) {
    int id = todo.front();
    todo.pop_front();
    std::vector<long> m = nodes[static_cast<size_t>(id)].marking;
    for (size_t t = 0; t < net.transitions.size(); ++t) {
      bool enabled = true;
      for (auto& [p, n] : pres[t].items) {
        long have = m[static_cast<size_t>(p)];
        if (have != kOmega && have < n) {
          enabled = false;
          break;
        }
      }
      if (!enabled) continue;
      std::vector<long> next = m;
      for (auto& [p, n] : pres[t].items)
        if (next[static_cast<size_t>(p)] != kOmega) next[static_cast<size_t>(p)] -= n;
      for (auto& [p, n] : posts[t].items)
        if (next[static_cast<size_t>(p)] != kOmega) next[static_cast<size_t>(p)] += n;
      // omega acceleration along the ancestor path
      bool changed = true;
      while (changed) {
        changed = false;
        for (int anc = id; anc >= 0; anc = nodes[static_cast<size_t>(anc)].parent) {
          const auto& am = nodes[static_cast<size_t>(anc)].marking;
          if (detail::km_leq(am, next) && am != next) {
            for (size_t p = 0; p < np; ++p) {
              if (next[p] != kOmega && (am[p] == kOmega || am[p] < next[p])) {
                next[p] = kOmega;
                changed = true;
              }
            }
          }
        }
      }
      for (size_t p = 0; p < np; ++p)
        if (next[p] == kOmega) unbounded[p] = true;
      // stop at markings equal to an ancestor
      bool duplicate = false;
      for (int anc = id; anc >= 0; anc = nodes[static_cast<size_t>(anc)].parent) {
        if (nodes[static_cast<size_t>(anc)].marking == next) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) continue;
      int nid = static_cast<int>(nodes.size());
      nodes.push_back({std::move(next), id});
      todo.push_back(nid);
    }
  }
  return unbounded;
}

inline bool place_bounded(const PetriNet& net, int place) {
  if (place < 0 || place >= static_cast<int>(net.places.size()))
    throw std::invalid_argument("place_bounded: no such place");
  return !karp_miller_unbounded(net)[static_cast<size_t>(place)];
}

// Reduction of infinite visit to place boundedness: a two-phase copy of the
// net where phase-2 steps require the mandatory place plus one visit place
// and feed a fresh check place.
inline bool infinite_visit(const PetriNet& net, const std::vector<int>& visit, int mandatory) {
  PetriNet n2;
  for (auto& p : net.places) n2.place(p);
  int ph1 = static_cast<int>(n2.places.size());
  n2.places.push_back(PlaceId::path({"$ph1"}));
  n2.index.emplace("$ph1", ph1);
  int ph2 = static_cast<int>(n2.places.size());
  n2.places.push_back(PlaceId::path({"$ph2"}));
  n2.index.emplace("$ph2", ph2);
  int check = static_cast<int>(n2.places.size());
  n2.places.push_back(PlaceId::path({"$check"}));
  n2.index.emplace("$check", check);

  for (auto& t : net.transitions) {
    Marking pre = t.pre, post = t.post;
    madd(pre, ph1);
    madd(post, ph1);
    n2.add_transition(std::move(pre), std::move(post));
  }
  {
    Marking pre, post;
    madd(pre, ph1);
    madd(post, ph2);
    n2.add_transition(std::move(pre), std::move(post));
  }
  for (auto& t : net.transitions) {
    for (int q : visit) {
      Marking pre = t.pre, post = t.post;
      madd(pre, mandatory);
      madd(pre, q);
      madd(pre, ph2);
      madd(post, mandatory);
      madd(post, q);
      madd(post, ph2);
      madd(post, check);
      n2.add_transition(std::move(pre), std::move(post));
    }
  }
  n2.init = net.init;
  madd(n2.init, ph1);
  return !place_bounded(n2, check);
}

// ---- the decision procedure ----------------------------------------------------------

/// Decides eventual adaptation for a static preserving cluster: `violated`
/// means some cluster instance has an infinite computation whose states all
/// exhibit alpha from some point on.
inline Verdict decide_ea3(const Cluster& c, const Act& alpha) {
  PetriNet net = translate(c);
  std::vector<int> visit;
  for (size_t i = 0; i < net.places.size(); ++i) {
    const PlaceId& p = net.places[i];
    if (p.kind != PlaceId::K::Proc) continue;
    if (barb(p.seq, alpha)) visit.push_back(static_cast<int>(i));
  }
  int go = net.find_place("go");
  if (infinite_visit(net, visit, go)) {
    Witness w;  // the verdict is net-level; no process trace is produced
    return verdict_violated(std::move(w));
  }
  return verdict_holds();
}

// ---- text export -----------------------------------------------------------------------

inline std::string export_net(const PetriNet& net) {
  std::string s;
  for (auto& p : net.places) s += "place " + p.str() + "\n";
  auto emit = [&](const Marking& m) {
    std::string t;
    bool first = true;
    for (auto& [p, n] : m) {
      if (!first) t += ' ';
      first = false;
      t += net.places[static_cast<size_t>(p)].str() + "*" + std::to_string(n);
    }
    return t.empty() ? std::string("-") : t;
  };
  s += "init " + emit(net.init) + "\n";
  for (auto& t : net.transitions) s += "trans " + emit(t.pre) + " -> " + emit(t.post) + "\n";
  return s;
}

// Parses the export format back; place identities are opaque strings.
inline PetriNet parse_net(const std::string& text) {
  PetriNet net;
  std::istringstream ss(text);
  std::string line;
  auto intern = [&net](const std::string& id) {
    auto it = net.index.find(id);
    if (it != net.index.end()) return it->second;
    int n = static_cast<int>(net.places.size());
    PlaceId p = PlaceId::path({id});
    net.places.push_back(p);
    net.index.emplace(id, n);
    return n;
  };
  auto parse_marking = [&](std::istringstream& ls) {
    Marking m;
    std::string item;
    while (ls >> item) {
      if (item == "->") break;
      if (item == "-") continue;
      auto star = item.rfind('*');
      if (star == std::string::npos) throw std::runtime_error("bad marking item: " + item);
      int place = intern(item.substr(0, star));
      long n = std::stol(item.substr(star + 1));
      madd(m, place, n);
    }
    return m;
  };
  while (std::getline(ss, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "place") {
      std::string id;
      ls >> id;
      intern(id);
    } else if (kw == "init") {
      net.init = parse_marking(ls);
    } else if (kw == "trans") {
      std::string rest;
      std::getline(ls, rest);
      auto arrow = rest.find("->");
      if (arrow == std::string::npos) throw std::runtime_error("transition missing '->'");
      std::istringstream pres(rest.substr(0, arrow)), posts(rest.substr(arrow + 2));
      Marking pre = parse_marking(pres), post = parse_marking(posts);
      net.add_transition(std::move(pre), std::move(post));
    } else {
      throw std::runtime_error("unknown net directive: " + kw);
    }
  }
  return net;
}

}  // namespace adapt
