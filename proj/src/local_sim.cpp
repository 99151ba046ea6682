#include "lcl/local_sim.hpp"

namespace lcl {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t master_seed, std::uint64_t node_id) {
  state_ = master_seed;
  std::uint64_t a = splitmix64(state_);
  state_ = a ^ (node_id * 0x9e3779b97f4a7c15ULL);
  splitmix64(state_);  // decorrelate nearby node ids
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

std::uint64_t Rng::next_below(std::uint64_t bound) {
  // rejection sampling to stay unbiased
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % bound;
}

RunResult run(const PortedMultigraph& g, const Labeling& in,
              const LocalAlgorithm& alg, std::uint64_t seed,
              const NeLclProblem* alphabets) {
  RunResult res;
  int n = g.n();
  int delta = g.max_degree();
  int t = alg.radius(n);
  if (t < 0) {
    res.errors.push_back("negative radius");
    return res;
  }
  res.out.layer(kOutV, Carrier::V);
  res.out.layer(kOutE, Carrier::E);
  res.out.layer(kOutB, Carrier::B);
  std::map<int, std::pair<int, std::string>> edge_claim;  // edge -> (claimant, label)
  for (const auto& nr : g.nodes()) {
    View view = ball(g, in, nr.id, t);
    Rng rng(seed, static_cast<std::uint64_t>(nr.id));
    RuleOut out = alg.rule(view, n, delta, rng);
    if (out.fail) {
      res.errors.push_back("node " + std::to_string(nr.id) +
                           " declared failure: " + *out.fail);
      continue;
    }
    if (static_cast<int>(out.e.size()) != nr.degree ||
        static_cast<int>(out.b.size()) != nr.degree) {
      res.errors.push_back("node " + std::to_string(nr.id) +
                           " labeled wrong number of incident elements");
      continue;
    }
    if (alphabets && !alphabets->out_v.contains(out.v))
      res.errors.push_back("node " + std::to_string(nr.id) +
                           " emitted label outside alphabet: out.v");
    res.out.set(kOutV, Carrier::V, nr.id, out.v);
    const auto& inc = g.incident(nr.id);
    for (int p = 1; p <= nr.degree; ++p) {
      auto [ei, side] = inc[p - 1];
      const std::string& el = out.e[p - 1];
      const std::string& bl = out.b[p - 1];
      if (alphabets && !alphabets->out_e.contains(el))
        res.errors.push_back("node " + std::to_string(nr.id) +
                             " emitted label outside alphabet: out.e");
      if (alphabets && !alphabets->out_b.contains(bl))
        res.errors.push_back("node " + std::to_string(nr.id) +
                             " emitted label outside alphabet: out.b");
      auto it = edge_claim.find(ei);
      if (it == edge_claim.end()) {
        edge_claim[ei] = {nr.id, el};
        res.out.set(kOutE, Carrier::E, ei, el);
      } else if (it->second.second != el) {
        res.errors.push_back("edge " + std::to_string(ei) +
                             ": endpoints disagree on edge label (" +
                             std::to_string(it->second.first) + " vs " +
                             std::to_string(nr.id) + ")");
      }
      res.out.set(kOutB, Carrier::B, half_key(ei, side), bl);
    }
  }
  return res;
}

std::optional<int> measure_locality(const PortedMultigraph& g, const Labeling& in,
                                    const NeLclProblem& problem,
                                    const AlgorithmFamily& family, int t_max,
                                    std::uint64_t seed) {
  for (int t = 0; t <= t_max; ++t) {
    LocalAlgorithm alg = family(t);
    RunResult r = run(g, in, alg, seed);
    if (!r.ok()) continue;
    if (verify(problem, g, in, r.out).empty()) return t;
  }
  return std::nullopt;
}

}  // namespace lcl
