#pragma once

#include <cstdint>
#include <vector>

namespace memoryflow {

// waiting-time distribution on the step grid: P(W = k tau) = p[k-1], k = 1..M,
// survival omega[k] = P(W > k tau)
struct WaitPMF {
  double tau = 0.0;
  int M = 0;
  std::vector<double> p;
  std::vector<double> omega;
};

// p[k-1] proportional to (1/(k tau)) * integral of s^-alpha over ((k-1)tau, k tau)
WaitPMF build_pmf(double alpha, double delta, double tau);

// lattice spacing giving unit diffusivity: h^2 = 2 tau^alpha / c_{delta,alpha}
double calibrated_h(double alpha, double delta, double tau);

struct WalkerConfig {
  double h = 0.0;
  double tau = 0.0;
  double alpha = 0.0;
  double delta = 0.0;
  long long particles = 0;
  std::uint64_t seed = 1;
  double T = 0.0;
  std::vector<double> record_times;
};

struct WalkResult {
  double tau = 0.0;
  double h = 0.0;
  long long particles = 0;
  int site_offset = 0;  // lattice index of x = 0
  std::vector<double> times;
  std::vector<long long> record_steps;
  // occupation[r][site]: particles sitting at the site at record time r
  std::vector<std::vector<std::uint64_t>> occupation;
  // arrivals[n][site]: arrival events at step n (step 0 is the initial placement)
  std::vector<std::vector<std::uint64_t>> arrivals;
  std::vector<double> msd;
  std::vector<double> msd_stderr;
  std::vector<double> mean;

  double x(int site) const { return (site - site_offset) * h; }
  std::vector<double> density(std::size_t r) const;  // occupation / (N h)
};

WalkResult simulate(const WalkerConfig& config, const WaitPMF& pmf);

// max-over-record-times L1 gap between the occupation histogram and its
// reconstruction from arrival events weighted by the survival tail
double arrival_density_check(const WalkResult& result, const WaitPMF& pmf);

}  // namespace memoryflow
