#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hcm/graph.hpp"

namespace hcm {

struct ChainConfig {
  double lambda = 1.0;
  std::uint64_t burn_in = 1000;
  std::uint64_t samples = 10000;
  /// Single-site updates between consecutive samples.
  std::uint64_t thinning = 1;
  std::uint64_t seed = 0;
  /// Independent replicas; the standard error is taken across them, so at
  /// least two are required.
  unsigned chains = 8;
  /// Worker threads; results do not depend on it.
  unsigned threads = 1;

  void validate() const {
    if (!(lambda > 0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive and finite");
    if (samples == 0) throw std::invalid_argument("samples must be positive");
    if (thinning == 0) throw std::invalid_argument("thinning must be positive");
    if (chains < 2) throw std::invalid_argument("at least two chains are needed for a standard error");
    if (threads == 0) throw std::invalid_argument("threads must be positive");
  }
};

struct SampleEstimate {
  double mean = 0;       ///< average of per_chain_means
  double std_error = 0;  ///< sd(per_chain_means) / sqrt(chains)
  std::vector<double> per_chain_means;
  std::uint64_t steps = 0;
  std::uint64_t insertions = 0;  ///< accepted moves that added a vertex
  std::uint64_t blocked = 0;     ///< insertion proposals refused by an occupied neighbour
  std::uint64_t removals = 0;

  double acceptance_rate() const noexcept {
    const auto proposals = insertions + blocked;
    return proposals ? static_cast<double>(insertions) / static_cast<double>(proposals) : 0.0;
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t chain_seed(std::uint64_t seed, unsigned chain) {
  return splitmix64(splitmix64(seed) ^ splitmix64(0xc0ffee00ULL + chain));
}

}  // namespace detail

/// Single-site heat-bath (Glauber) dynamics for the hard-core model. Each
/// step picks a uniform vertex v; with probability lambda/(1+lambda) it tries
/// to occupy v (refused if a neighbour is occupied), otherwise it vacates v.
class GlauberChain {
 public:
  GlauberChain(const Graph& g, double lambda, std::uint64_t seed)
      : g_(&g),
        occupied_(g.order(), 0),
        blocking_(g.order(), 0),
        rng_(seed),
        pick_(0, g.order() ? g.order() - 1 : 0),
        insert_prob_(lambda / (1.0 + lambda)) {
    if (g.order() == 0) throw std::invalid_argument("Glauber dynamics needs at least one vertex");
  }

  void step() {
    const Vertex v = static_cast<Vertex>(pick_(rng_));
    if (coin_(rng_) < insert_prob_) {
      if (occupied_[v]) return;
      if (blocking_[v]) {
        ++blocked_;
        return;
      }
      occupied_[v] = 1;
      ++size_;
      ++insertions_;
      for (Vertex u : g_->neighbours(v)) ++blocking_[u];
    } else if (occupied_[v]) {
      occupied_[v] = 0;
      --size_;
      ++removals_;
      for (Vertex u : g_->neighbours(v)) --blocking_[u];
    }
  }

  void run(std::uint64_t steps) {
    for (std::uint64_t i = 0; i < steps; ++i) step();
  }

  std::size_t size() const noexcept { return size_; }
  bool occupied(Vertex v) const { return occupied_.at(v) != 0; }
  std::uint64_t insertions() const noexcept { return insertions_; }
  std::uint64_t blocked() const noexcept { return blocked_; }
  std::uint64_t removals() const noexcept { return removals_; }

  /// One-step transition probability between two independent sets given as
  /// membership vectors. Zero unless they differ in at most one vertex.
  static double transition_probability(const Graph& g, double lambda, const std::vector<bool>& from,
                                       const std::vector<bool>& to) {
    const std::size_t n = g.order();
    const double p = lambda / (1.0 + lambda);
    std::optional<Vertex> diff;
    for (Vertex v = 0; v < n; ++v) {
      if (from[v] != to[v]) {
        if (diff) return 0.0;
        diff = v;
      }
    }
    auto free = [&](Vertex v) {
      for (Vertex u : g.neighbours(v))
        if (from[u]) return false;
      return true;
    };
    if (diff) {
      const Vertex v = *diff;
      if (to[v]) return free(v) ? p / static_cast<double>(n) : 0.0;
      return (1.0 - p) / static_cast<double>(n);
    }
    // Self-loop: every proposal that leaves the state unchanged.
    double stay = 0;
    for (Vertex v = 0; v < n; ++v) {
      if (from[v]) stay += p;                         // insert on an occupied vertex
      else stay += (free(v) ? 0.0 : p) + (1.0 - p);  // blocked insert, or vacate an empty vertex
    }
    return stay / static_cast<double>(n);
  }

 private:
  const Graph* g_;
  std::vector<std::uint8_t> occupied_;
  std::vector<std::uint32_t> blocking_;  ///< number of occupied neighbours
  std::mt19937_64 rng_;
  std::uniform_int_distribution<std::size_t> pick_;
  std::uniform_real_distribution<double> coin_{0.0, 1.0};
  double insert_prob_;
  std::size_t size_ = 0;
  std::uint64_t insertions_ = 0, blocked_ = 0, removals_ = 0;
};

namespace detail {

struct ChainOutcome {
  double mean = 0;
  std::uint64_t steps = 0, insertions = 0, blocked = 0, removals = 0;
};

// Runs every chain from the empty set and averages `observe(chain)` over samples.
template <class Observe>
SampleEstimate run_chains(const Graph& g, const ChainConfig& cfg, Observe observe) {
  cfg.validate();
  std::vector<ChainOutcome> outcomes(cfg.chains);
  auto work = [&](unsigned c) {
    GlauberChain chain(g, cfg.lambda, chain_seed(cfg.seed, c));
    chain.run(cfg.burn_in);
    double total = 0;
    for (std::uint64_t s = 0; s < cfg.samples; ++s) {
      chain.run(cfg.thinning);
      total += observe(chain);
    }
    outcomes[c] = {total / static_cast<double>(cfg.samples), cfg.burn_in + cfg.samples * cfg.thinning,
                   chain.insertions(), chain.blocked(), chain.removals()};
  };
  const unsigned workers = std::min(cfg.threads, cfg.chains);
  if (workers <= 1) {
    for (unsigned c = 0; c < cfg.chains; ++c) work(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (unsigned c = w; c < cfg.chains; c += workers) work(c);
      });
    for (auto& t : pool) t.join();
  }

  SampleEstimate est;
  for (const auto& o : outcomes) {  // fixed order over chain index
    est.per_chain_means.push_back(o.mean);
    est.mean += o.mean;
    est.steps += o.steps;
    est.insertions += o.insertions;
    est.blocked += o.blocked;
    est.removals += o.removals;
  }
  const double k = static_cast<double>(cfg.chains);
  est.mean /= k;
  double ss = 0;
  for (double m : est.per_chain_means) ss += (m - est.mean) * (m - est.mean);
  est.std_error = std::sqrt(ss / (k - 1.0) / k);
  return est;
}

}  // namespace detail

/// Estimates the occupancy fraction E|I|/n.
inline SampleEstimate glauber_run(const Graph& g, const ChainConfig& cfg) {
  const double n = static_cast<double>(g.order());
  return detail::run_chains(g, cfg, [n](const GlauberChain& c) { return static_cast<double>(c.size()) / n; });
}

struct MarginalEstimate {
  double estimate = 0;
  double std_error = 0;
  SampleEstimate detail;
};

/// Estimates Pr(v in I).
inline MarginalEstimate estimate_marginal(const Graph& g, const ChainConfig& cfg, Vertex v) {
  if (v >= g.order()) throw std::out_of_range("vertex " + std::to_string(v) + " not in graph");
  auto est = detail::run_chains(g, cfg, [v](const GlauberChain& c) { return c.occupied(v) ? 1.0 : 0.0; });
  return {est.mean, est.std_error, std::move(est)};
}

}  // namespace hcm
