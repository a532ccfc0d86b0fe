#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pattern_oracle/pattern_space.hpp"

namespace pattern_oracle {

// Count per pattern length; index = length, entries 0..3 stay zero.
using LengthCounts = std::array<std::uint64_t, kMaxPatternLength + 1>;

LengthCounts count_by_length_serial();
LengthCounts count_by_length_parallel();

// Every valid pattern (optionally of one length) in lexicographic order.
std::vector<Pattern> enumerate_patterns_serial(std::optional<int> length = std::nullopt);
std::vector<Pattern> enumerate_patterns_parallel(std::optional<int> length = std::nullopt);

inline constexpr double kComplexityBinWidth = 6.0;

struct ComplexityScan {
  std::uint64_t patterns = 0;
  double max_score = 0.0;
  Pattern argmax = Pattern::from_valid(std::array{1, 2, 3, 6});
  // Bin b holds scores in ((b-1)*6, b*6].
  std::map<int, std::uint64_t> histogram;
};

int complexity_bin(double score);

ComplexityScan complexity_scan_serial();
ComplexityScan complexity_scan_parallel();

}  // namespace pattern_oracle
