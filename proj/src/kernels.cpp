#include "pattern_oracle/kernels.hpp"

#include <cmath>

#include <omp.h>

namespace pattern_oracle {

namespace {

void merge_scan(ComplexityScan& into, const ComplexityScan& part) {
  into.patterns += part.patterns;
  // Ties keep the lexicographically smaller pattern.
  if (part.patterns > 0 &&
      (part.max_score > into.max_score ||
       (part.max_score == into.max_score && part.argmax < into.argmax)))
    into.max_score = part.max_score, into.argmax = part.argmax;
  for (const auto& [bin, n] : part.histogram) into.histogram[bin] += n;
}

ComplexityScan scan_from(int first_key) {
  ComplexityScan scan;
  for_each_pattern_from(first_key, [&](std::span<const int> keys) {
    const Pattern p = Pattern::from_valid(keys);
    const double c = complexity_score(p).score;
    if (scan.patterns == 0 || c > scan.max_score) {
      scan.max_score = c;
      scan.argmax = p;
    }
    ++scan.patterns;
    ++scan.histogram[complexity_bin(c)];
  });
  return scan;
}

std::vector<Pattern> enumerate_from(int first_key, std::optional<int> length) {
  std::vector<Pattern> out;
  for_each_pattern_from(first_key, [&](std::span<const int> keys) {
    if (!length || int(keys.size()) == *length)
      out.push_back(Pattern::from_valid(keys));
  });
  return out;
}

}  // namespace

int complexity_bin(double score) {
  return std::max(1, int(std::ceil(score / kComplexityBinWidth)));
}

LengthCounts count_by_length_serial() {
  LengthCounts counts{};
  for (int k = 1; k <= kGridKeys; ++k)
    for_each_pattern_from(k, [&](std::span<const int> keys) { ++counts[keys.size()]; });
  return counts;
}

LengthCounts count_by_length_parallel() {
  std::array<LengthCounts, kGridKeys> parts{};
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 1; k <= kGridKeys; ++k)
    for_each_pattern_from(k, [&](std::span<const int> keys) { ++parts[k - 1][keys.size()]; });
  LengthCounts counts{};
  for (const auto& part : parts)
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += part[i];
  return counts;
}

std::vector<Pattern> enumerate_patterns_serial(std::optional<int> length) {
  std::vector<Pattern> out;
  for (int k = 1; k <= kGridKeys; ++k) {
    auto part = enumerate_from(k, length);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<Pattern> enumerate_patterns_parallel(std::optional<int> length) {
  std::array<std::vector<Pattern>, kGridKeys> parts;
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 1; k <= kGridKeys; ++k) parts[k - 1] = enumerate_from(k, length);
  std::vector<Pattern> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

ComplexityScan complexity_scan_serial() {
  ComplexityScan scan;
  for (int k = 1; k <= kGridKeys; ++k) merge_scan(scan, scan_from(k));
  return scan;
}

ComplexityScan complexity_scan_parallel() {
  std::array<ComplexityScan, kGridKeys> parts;
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 1; k <= kGridKeys; ++k) parts[k - 1] = scan_from(k);
  ComplexityScan scan;
  for (const auto& part : parts) merge_scan(scan, part);
  return scan;
}

}  // namespace pattern_oracle
