#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pattern_oracle {

enum class StatsErrorKind { EmptySamples, NonPositiveSigma, TooFewPairs, Ties };

class StatsError : public std::invalid_argument {
 public:
  StatsError(StatsErrorKind kind, std::string message)
      : std::invalid_argument(std::move(message)), kind_(kind) {}
  StatsErrorKind kind() const { return kind_; }

 private:
  StatsErrorKind kind_;
};

struct RankedSample {
  double a = 0.0;
  double b = 0.0;
};

// Gaussian kernel density estimate evaluated at each grid value.
std::vector<double> gaussian_kde(std::span<const double> samples, double sigma,
                                 std::span<const double> grid);

// Silverman's rule of thumb, floored at `min_sigma` so constant samples
// still produce a usable kernel.
double silverman_bandwidth(std::span<const double> samples,
                           double min_sigma = 1e-3);

// R = 4P / (n(n-1)) - 1 with P the concordant pair count. Ties in either
// coordinate are rejected.
double kendall_tau(std::span<const RankedSample> pairs);

// rho = 1 - 6 sum d^2 / (N(N^2-1)) on ranks. Ties are rejected.
double spearman_rho(std::span<const RankedSample> pairs);

// Tie-aware variants for data with repeated values: Kendall tau-b and the
// Pearson correlation of average ranks.
double kendall_tau_b(std::span<const RankedSample> pairs);
double spearman_rho_ranked(std::span<const RankedSample> pairs);

// 1-based ranks; tied values share their average rank.
std::vector<double> average_ranks(std::span<const double> values);

}  // namespace pattern_oracle
