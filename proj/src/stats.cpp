#include "pattern_oracle/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace pattern_oracle {

namespace {

void require_pairs(std::span<const RankedSample> pairs) {
  if (pairs.size() < 2)
    throw StatsError(StatsErrorKind::TooFewPairs, "need at least two pairs");
}

int sign(double x) { return (x > 0) - (x < 0); }

void reject_ties(std::span<const double> values, const char* which) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw StatsError(StatsErrorKind::Ties,
                     std::string("tied values in ") + which);
}

std::vector<double> column(std::span<const RankedSample> pairs, bool first) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(first ? p.a : p.b);
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::vector<double> gaussian_kde(std::span<const double> samples, double sigma,
                                 std::span<const double> grid) {
  if (samples.empty())
    throw StatsError(StatsErrorKind::EmptySamples, "no samples");
  if (!(sigma > 0))
    throw StatsError(StatsErrorKind::NonPositiveSigma, "sigma must be > 0");
  const double norm =
      1.0 / (double(samples.size()) * sigma * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> out;
  out.reserve(grid.size());
  for (double g : grid) {
    double sum = 0;
    for (double x : samples) {
      const double z = (g - x) / sigma;
      sum += std::exp(-0.5 * z * z);
    }
    out.push_back(norm * sum);
  }
  return out;
}

double silverman_bandwidth(std::span<const double> samples, double min_sigma) {
  if (samples.empty())
    throw StatsError(StatsErrorKind::EmptySamples, "no samples");
  const double n = double(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double var = 0;
  for (double x : samples) var += (x - mean) * (x - mean);
  const double sd = samples.size() > 1 ? std::sqrt(var / (n - 1)) : 0.0;

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const double pos = q * (n - 1);
    const auto lo = std::size_t(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - double(lo)) * (sorted[hi] - sorted[lo]);
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  double spread = sd;
  if (iqr > 0) spread = std::min(sd, iqr / 1.34);
  return std::max(min_sigma, 0.9 * spread * std::pow(n, -0.2));
}

double kendall_tau(std::span<const RankedSample> pairs) {
  require_pairs(pairs);
  reject_ties(column(pairs, true), "first coordinate");
  reject_ties(column(pairs, false), "second coordinate");
  const std::size_t n = pairs.size();
  std::size_t concordant = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (sign(pairs[i].a - pairs[j].a) == sign(pairs[i].b - pairs[j].b))
        ++concordant;
  return 4.0 * double(concordant) / (double(n) * double(n - 1)) - 1.0;
}

double spearman_rho(std::span<const RankedSample> pairs) {
  require_pairs(pairs);
  const auto xa = column(pairs, true);
  const auto xb = column(pairs, false);
  reject_ties(xa, "first coordinate");
  reject_ties(xb, "second coordinate");
  const auto ra = average_ranks(xa);
  const auto rb = average_ranks(xb);
  double sum_d2 = 0;
  for (std::size_t i = 0; i < ra.size(); ++i)
    sum_d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
  const double n = double(pairs.size());
  return 1.0 - 6.0 * sum_d2 / (n * (n * n - 1.0));
}

double kendall_tau_b(std::span<const RankedSample> pairs) {
  require_pairs(pairs);
  const std::size_t n = pairs.size();
  double concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const int sa = sign(pairs[i].a - pairs[j].a);
      const int sb = sign(pairs[i].b - pairs[j].b);
      if (sa == 0 && sb == 0) continue;
      if (sa == 0) {
        ++ties_a;
      } else if (sb == 0) {
        ++ties_b;
      } else if (sa == sb) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  const double denom = std::sqrt((concordant + discordant + ties_a) *
                                 (concordant + discordant + ties_b));
  if (denom == 0) return 0.0;
  return (concordant - discordant) / denom;
}

double spearman_rho_ranked(std::span<const RankedSample> pairs) {
  require_pairs(pairs);
  const auto ra = average_ranks(column(pairs, true));
  const auto rb = average_ranks(column(pairs, false));
  return pearson(ra, rb);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (double(i) + double(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace pattern_oracle
