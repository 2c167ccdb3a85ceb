#pragma once

// Clusters (initial process plus modification set) and the exhaustive
// adaptation oracles used as ground truth for the decision procedures.

#include <atomic>
#include <cstdlib>
#include <future>
#include <thread>

#include "adapt/semantics.hpp"

namespace adapt {

struct Cluster {
  TermPtr initial;
  std::vector<TermPtr> mods;
};

enum class VerdictKind : uint8_t { Holds, Violated, Inconclusive };

struct Witness {
  std::vector<long> counts;     // copies per modification process
  std::vector<TermPtr> trace;   // canonical states, stem first
  std::vector<TermPtr> cycle;   // nonempty for lasso witnesses
};

struct Verdict {
  VerdictKind kind = VerdictKind::Holds;
  std::optional<Witness> witness;
  std::string reason;

  bool holds() const { return kind == VerdictKind::Holds; }
  bool violated() const { return kind == VerdictKind::Violated; }
};

inline Verdict verdict_holds() { return Verdict{VerdictKind::Holds, std::nullopt, ""}; }
inline Verdict verdict_violated(Witness w) {
  return Verdict{VerdictKind::Violated, std::move(w), ""};
}
inline Verdict verdict_inconclusive(std::string why) {
  return Verdict{VerdictKind::Inconclusive, std::nullopt, std::move(why)};
}

// P || P1^m1 || ... || Pn^mn, canonicalized.
inline TermPtr instantiate(const Cluster& c, const std::vector<long>& counts) {
  if (counts.size() != c.mods.size())
    throw std::invalid_argument("instantiate: count vector arity mismatch");
  std::vector<TermPtr> ps{c.initial};
  for (size_t i = 0; i < counts.size(); ++i)
    for (long k = 0; k < counts[i]; ++k) ps.push_back(c.mods[i]);
  return canonicalize(par(std::move(ps)));
}

inline int worker_count() {
  if (const char* env = std::getenv("ADAPT_WORKERS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

namespace detail {

inline std::vector<std::vector<long>> count_vectors(size_t arity, long bound) {
  std::vector<std::vector<long>> out;
  std::vector<long> cur(arity, 0);
  while (true) {
    out.push_back(cur);
    size_t i = 0;
    for (; i < arity; ++i) {
      if (cur[i] < bound) {
        ++cur[i];
        std::fill(cur.begin(), cur.begin() + static_cast<long>(i), 0);
        break;
      }
    }
    if (i == arity) break;
  }
  return out;
}

// Deterministic parallel map over instances; results ordered as inputs.
template <typename In, typename F>
auto map_instances(const std::vector<In>& xs, F f) {
  using Out = decltype(f(xs[0]));
  std::vector<Out> out(xs.size());
  int workers = worker_count();
  if (workers <= 1 || xs.size() <= 1) {
    for (size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
    return out;
  }
  std::atomic<size_t> next{0};
  auto run = [&] {
    for (size_t i = next.fetch_add(1); i < xs.size(); i = next.fetch_add(1)) out[i] = f(xs[i]);
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers - 1; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace detail

// Exhaustive semi-decision of bounded adaptation: explores every instance
// with per-mod copy counts up to copy_bound. `violated` is exact; `holds`
// is exact only when every instance graph closed within `depth`.
inline Verdict ba_oracle(const Cluster& c, const Act& alpha, int k, long copy_bound, long depth,
                         Mode mode = Mode::Dynamic) {
  auto vectors = detail::count_vectors(c.mods.size(), copy_bound);
  struct R {
    BarbKResult res;
  };
  auto results = detail::map_instances(vectors, [&](const std::vector<long>& counts) {
    return R{bounded_barb_k(instantiate(c, counts), alpha, k, depth, mode)};
  });
  bool all_closed = true;
  for (size_t i = 0; i < vectors.size(); ++i) {
    if (results[i].res.found)
      return verdict_violated(Witness{vectors[i], results[i].res.trace, {}});
    all_closed = all_closed && results[i].res.closed;
  }
  if (all_closed) return verdict_holds();
  return verdict_inconclusive("some instance graph did not close within depth bound");
}

// Exhaustive semi-decision of eventual adaptation via lasso search.
inline Verdict ea_oracle(const Cluster& c, const Act& alpha, long copy_bound, long state_limit,
                         Mode mode = Mode::Dynamic) {
  auto vectors = detail::count_vectors(c.mods.size(), copy_bound);
  auto results = detail::map_instances(vectors, [&](const std::vector<long>& counts) {
    return bounded_barb_omega(instantiate(c, counts), alpha, state_limit, mode);
  });
  bool all_exact = true;
  for (size_t i = 0; i < vectors.size(); ++i) {
    if (results[i].answer == OmegaAnswer::Witness)
      return verdict_violated(Witness{vectors[i], results[i].stem, results[i].cycle});
    all_exact = all_exact && results[i].answer == OmegaAnswer::HoldsExact;
  }
  if (all_exact) return verdict_holds();
  return verdict_inconclusive("some instance exceeded the state limit");
}

}  // namespace adapt
