#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include "secrecy/oracle.hpp"
#include "secrecy/specfun.hpp"

namespace secrecy::oracle {
namespace {

// Running count / mean / sum of squared deviations; merged pairwise.
struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  static Moments merge(const Moments& a, const Moments& b) {
    if (a.n == 0) return b;
    if (b.n == 0) return a;
    Moments out;
    out.n = a.n + b.n;
    const double na = static_cast<double>(a.n);
    const double nb = static_cast<double>(b.n);
    const double delta = b.mean - a.mean;
    out.mean = a.mean + delta * nb / static_cast<double>(out.n);
    out.m2 = a.m2 + b.m2 + delta * delta * na * nb / static_cast<double>(out.n);
    return out;
  }
};

struct BlockPartial {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> outage;
  std::uint64_t positive = 0;
  Moments capacity;

  static BlockPartial merge(const BlockPartial& a, const BlockPartial& b) {
    BlockPartial out;
    out.n = a.n + b.n;
    out.outage.resize(a.outage.size());
    for (std::size_t i = 0; i < out.outage.size(); ++i) {
      out.outage[i] = a.outage[i] + b.outage[i];
    }
    out.positive = a.positive + b.positive;
    out.capacity = Moments::merge(a.capacity, b.capacity);
    return out;
  }
};

BlockPartial reduce_tree(const std::vector<BlockPartial>& parts,
                         std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return BlockPartial::merge(reduce_tree(parts, lo, mid),
                             reduce_tree(parts, mid, hi));
}

EstimateWithCI indicator_estimate(std::uint64_t count, std::uint64_t n) {
  const double dn = static_cast<double>(n);
  const double dc = static_cast<double>(count);
  return EstimateWithCI::from_moments(dc / dn, dc * (dn - dc) / dn, n);
}

double exponential(rng::Xoshiro256& gen, double rate) {
  return -std::log(1.0 - gen.uniform()) / rate;
}

}  // namespace

EstimateWithCI EstimateWithCI::from_moments(double mean, double m2,
                                            std::uint64_t n) {
  EstimateWithCI e;
  e.mean = mean;
  e.n_samples = n;
  if (n > 1) {
    const double dn = static_cast<double>(n);
    const double variance = std::max(m2, 0.0) / (dn - 1.0);
    e.std_error = std::sqrt(variance / dn);
  }
  e.half_width_95 = 1.96 * e.std_error;
  return e;
}

double kth_largest(std::span<const double> values, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > values.size()) {
    throw DomainError("kth_largest: k out of range");
  }
  std::vector<std::size_t> idx(values.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto before = [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  };
  std::nth_element(idx.begin(), idx.begin() + (k - 1), idx.end(), before);
  return values[idx[k - 1]];
}

SirSampler::SirSampler(const ChannelParams& params, const SelectionConfig& sel)
    : rho_(params.power_ratio()),
      lambda_m_(params.lambda_m()),
      beta_m_(params.beta_m()),
      lambda_e_(params.lambda_e()),
      beta_e_(params.beta_e()),
      rank_(sel.rank()),
      eve_antennas_(sel.eve_antennas()),
      scratch_(static_cast<std::size_t>(sel.n_users())) {}

SirDraw SirSampler::draw(rng::Xoshiro256& gen) {
  for (double& z : scratch_) {
    const double h = exponential(gen, lambda_m_);
    const double g = exponential(gen, beta_m_);
    z = rho_ * h / g;
  }
  SirDraw d;
  if (rank_ == 1) {
    d.legit = *std::max_element(scratch_.begin(), scratch_.end());
  } else {
    // Only the value is needed, so ties cannot change the outcome.
    std::nth_element(scratch_.begin(), scratch_.begin() + (rank_ - 1),
                     scratch_.end(), std::greater<>());
    d.legit = scratch_[rank_ - 1];
  }
  double best = 0.0;
  for (int l = 0; l < eve_antennas_; ++l) {
    const double t = exponential(gen, lambda_e_);
    const double e = exponential(gen, beta_e_);
    best = std::max(best, rho_ * t / e);
  }
  d.eve = best;
  return d;
}

McRateSweep mc_estimate_rates(const ChannelParams& params,
                              const SelectionConfig& sel,
                              std::span<const double> rates,
                              const SimConfig& sim) {
  if (sim.n_samples < 1) throw DomainError("n_samples must be at least 1");
  if (sim.batch_size < 1) throw DomainError("batch_size must be at least 1");
  for (double r : rates) {
    if (!(r >= 0.0)) throw DomainError("rate must be nonnegative");
  }

  const std::uint64_t n_blocks = (sim.n_samples + kBlockSamples - 1) / kBlockSamples;
  const std::uint64_t blocks_per_unit =
      std::max<std::uint64_t>(1, (sim.batch_size + kBlockSamples - 1) / kBlockSamples);
  const std::uint64_t n_units = (n_blocks + blocks_per_unit - 1) / blocks_per_unit;
  std::vector<BlockPartial> partials(n_blocks);
  std::atomic<std::uint64_t> next_unit{0};

  auto run_block = [&](SirSampler& sampler, std::uint64_t block) {
    BlockPartial& part = partials[block];
    part.outage.assign(rates.size(), 0);
    const std::uint64_t begin = block * kBlockSamples;
    const std::uint64_t end = std::min(sim.n_samples, begin + kBlockSamples);
    rng::Xoshiro256 gen(rng::stream_key(sim.seed, sim.stream, block));
    for (std::uint64_t s = begin; s < end; ++s) {
      const SirDraw d = sampler.draw(gen);
      // Z = X has zero capacity and is an outage.
      const bool positive = d.legit > d.eve;
      double capacity = 0.0;
      if (positive) {
        capacity = std::max(0.0, (std::log1p(d.legit) - std::log1p(d.eve)) /
                                     specfun::kLn2);
        ++part.positive;
      }
      for (std::size_t i = 0; i < rates.size(); ++i) {
        const bool outage = !positive || (rates[i] > 0.0 && capacity <= rates[i]);
        if (outage) ++part.outage[i];
      }
      part.capacity.add(capacity);
      ++part.n;
    }
  };

  auto worker = [&] {
    SirSampler sampler(params, sel);
    for (;;) {
      const std::uint64_t unit = next_unit.fetch_add(1);
      if (unit >= n_units) return;
      const std::uint64_t first = unit * blocks_per_unit;
      const std::uint64_t last = std::min(n_blocks, first + blocks_per_unit);
      for (std::uint64_t b = first; b < last; ++b) run_block(sampler, b);
    }
  };

  unsigned workers = sim.workers != 0 ? sim.workers : std::thread::hardware_concurrency();
  workers = std::max(1u, workers);
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_units));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  const BlockPartial total = reduce_tree(partials, 0, partials.size());
  McRateSweep out;
  out.sop.reserve(rates.size());
  for (std::uint64_t c : total.outage) out.sop.push_back(indicator_estimate(c, total.n));
  out.spsc = indicator_estimate(total.positive, total.n);
  out.esc = EstimateWithCI::from_moments(total.capacity.mean, total.capacity.m2,
                                         total.capacity.n);
  return out;
}

McEstimate mc_estimate(const ChannelParams& params, const SelectionConfig& sel,
                       const SecrecyTarget& target, const SimConfig& sim) {
  const double rate = target.rate();
  McRateSweep r = mc_estimate_rates(params, sel, std::span<const double>(&rate, 1), sim);
  return {r.sop.front(), r.spsc, r.esc};
}

}  // namespace secrecy::oracle
