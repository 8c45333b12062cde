#include "memoryflow/walker.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "memoryflow/errors.hpp"
#include "memoryflow/kernel.hpp"
#include "memoryflow/memory_op.hpp"
#include "memoryflow/parallel.hpp"

namespace memoryflow {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// substream for one particle; partitioning workers cannot change it
SplitMix64 particle_stream(std::uint64_t seed, long long index) {
  return {mix64(seed) ^ mix64(0xda942042e4dd58b5ull *
                              static_cast<std::uint64_t>(index + 1))};
}

}  // namespace

WaitPMF build_pmf(double alpha, double delta, double tau) {
  auto spec = KernelSpec::normalized_fractional(alpha, delta);
  MemoryWeights w = build_weights(spec, tau);
  WaitPMF pmf;
  pmf.tau = tau;
  pmf.M = w.M;
  pmf.p.resize(w.M);
  for (int k = 0; k < w.M; ++k) pmf.p[k] = w.w[k] / w.W0;
  pmf.omega.resize(w.M + 1);
  pmf.omega[0] = 1.0;
  for (int k = 1; k <= w.M; ++k)
    pmf.omega[k] = std::max(0.0, pmf.omega[k - 1] - pmf.p[k - 1]);
  return pmf;
}

double calibrated_h(double alpha, double delta, double tau) {
  return std::sqrt(2.0 * std::pow(tau, alpha) / c_coefficient(alpha, delta));
}

std::vector<double> WalkResult::density(std::size_t r) const {
  const auto& occ = occupation.at(r);
  std::vector<double> d(occ.size());
  double norm = 1.0 / (static_cast<double>(particles) * h);
  for (std::size_t i = 0; i < occ.size(); ++i)
    d[i] = static_cast<double>(occ[i]) * norm;
  return d;
}

WalkResult simulate(const WalkerConfig& config, const WaitPMF& pmf) {
  if (!(config.h > 0.0)) throw config_error("walker needs lattice spacing h > 0");
  if (config.particles < 1) throw config_error("walker needs at least one particle");
  if (pmf.M < 1 || pmf.p.empty()) throw config_error("empty waiting-time pmf");
  if (!(std::abs(config.tau - pmf.tau) <= 1e-12 * pmf.tau))
    throw config_error("config.tau does not match the pmf step");
  if (config.record_times.empty())
    throw config_error("walker needs at least one record time");

  double tau = pmf.tau;
  std::vector<long long> steps;
  for (double t : config.record_times) {
    if (!steps.empty() && t <= config.record_times[steps.size() - 1])
      throw config_error("record times must be strictly increasing");
    long long n = std::llround(t / tau);
    if (n < 0 || std::abs(n * tau - t) > 1e-9 * std::max(1.0, std::abs(t)))
      throw config_error("record time " + std::to_string(t) +
                         " is not on the step grid");
    steps.push_back(n);
  }
  if (config.T > 0.0 && config.record_times.back() > config.T * (1.0 + 1e-12))
    throw config_error("record times exceed the end time T");

  const std::size_t nrec = steps.size();
  const long long n_max = steps.back();
  const int offset = static_cast<int>(n_max);
  const std::size_t nsites = 2 * static_cast<std::size_t>(n_max) + 1;
  const std::size_t nsteps = static_cast<std::size_t>(n_max) + 1;
  const int M = pmf.M;

  std::vector<double> cum(pmf.p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pmf.p.size(); ++i) {
    acc += pmf.p[i];
    cum[i] = acc;
  }
  cum.back() = 1.0;

  WalkResult out;
  out.tau = tau;
  out.h = config.h;
  out.particles = config.particles;
  out.site_offset = offset;
  out.times = config.record_times;
  out.record_steps = steps;
  out.occupation.assign(nrec, std::vector<std::uint64_t>(nsites, 0));
  out.arrivals.assign(nsteps, std::vector<std::uint64_t>(nsites, 0));
  out.msd.assign(nrec, 0.0);
  out.msd_stderr.assign(nrec, 0.0);
  out.mean.assign(nrec, 0.0);

  std::vector<__int128> j1(nrec, 0), j2(nrec, 0), j4(nrec, 0);
  std::mutex merge_mutex;

  auto worker = [&](std::size_t begin, std::size_t end) {
    std::vector<std::vector<std::uint32_t>> occ(nrec,
                                                std::vector<std::uint32_t>(nsites, 0));
    std::vector<std::vector<std::uint32_t>> arr(nsteps,
                                                std::vector<std::uint32_t>(nsites, 0));
    std::vector<__int128> l1(nrec, 0), l2(nrec, 0), l4(nrec, 0);

    for (std::size_t i = begin; i < end; ++i) {
      SplitMix64 rng = particle_stream(config.seed, static_cast<long long>(i));
      long long pos = 0;
      long long step = 0;
      arr[0][offset] += 1;
      std::size_t r = 0;
      while (r < nrec) {
        double u = rng.uniform();
        int k = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), u) -
                                 cum.begin()) +
                1;
        if (k > M) k = M;
        bool up = rng.uniform() < 0.5;
        long long arrive = step + k;
        while (r < nrec && steps[r] < arrive) {
          occ[r][pos + offset] += 1;
          l1[r] += pos;
          long long sq = pos * pos;
          l2[r] += sq;
          l4[r] += static_cast<__int128>(sq) * sq;
          ++r;
        }
        pos += up ? 1 : -1;
        step = arrive;
        if (step <= n_max) arr[step][pos + offset] += 1;
      }
    }

    std::lock_guard<std::mutex> lock(merge_mutex);
    for (std::size_t rr = 0; rr < nrec; ++rr) {
      for (std::size_t s = 0; s < nsites; ++s) out.occupation[rr][s] += occ[rr][s];
      j1[rr] += l1[rr];
      j2[rr] += l2[rr];
      j4[rr] += l4[rr];
    }
    for (std::size_t n = 0; n < nsteps; ++n)
      for (std::size_t s = 0; s < nsites; ++s) out.arrivals[n][s] += arr[n][s];
  };

  parallel_for(static_cast<std::size_t>(config.particles), 0, worker);

  double N = static_cast<double>(config.particles);
  double h2 = config.h * config.h;
  for (std::size_t r = 0; r < nrec; ++r) {
    double m1 = static_cast<double>(j1[r]) / N;
    double m2 = static_cast<double>(j2[r]) / N;
    double m4 = static_cast<double>(j4[r]) / N;
    out.mean[r] = config.h * m1;
    out.msd[r] = h2 * m2;
    out.msd_stderr[r] = h2 * std::sqrt(std::max(0.0, m4 - m2 * m2) / N);
  }
  return out;
}

double arrival_density_check(const WalkResult& result, const WaitPMF& pmf) {
  if (result.occupation.empty()) throw config_error("empty simulation output");
  double worst = 0.0;
  double N = static_cast<double>(result.particles);
  for (std::size_t r = 0; r < result.record_steps.size(); ++r) {
    long long n = result.record_steps[r];
    const auto& occ = result.occupation[r];
    double l1 = 0.0;
    for (std::size_t s = 0; s < occ.size(); ++s) {
      double recon = 0.0;
      long long kmax = std::min<long long>(n, pmf.M);
      for (long long k = 0; k <= kmax; ++k)
        recon += pmf.omega[k] * static_cast<double>(result.arrivals[n - k][s]);
      l1 += std::abs(static_cast<double>(occ[s]) - recon);
    }
    worst = std::max(worst, l1 / N);
  }
  return worst;
}

}  // namespace memoryflow
