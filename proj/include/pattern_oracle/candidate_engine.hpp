#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pattern_oracle/cipher_model.hpp"
#include "pattern_oracle/pattern_space.hpp"
#include "pattern_oracle/trajectory.hpp"

namespace pattern_oracle {

struct EngineConfig {
  std::size_t beam_width = 5000;
  double theta = 0.9;
  bool consistency_filter = true;
  // Compare intersection strings by containment instead of equality.
  bool consistency_substring = false;
  // Require touching pattern segments to read as non-crossing in the
  // trajectory too. Off: a touch matches either reading.
  bool strict_contacts = false;
  // Units a candidate must consume to be reported; unset means all units
  // in the window.
  std::optional<std::size_t> min_units_consumed;
  // Leave the first and last polyline segment out of the engine window,
  // treating them as the approach and exit strokes around the drawing.
  bool trim_ends = true;
  // Weight per unit index of the polyline; missing entries weigh 1.0.
  std::vector<double> unit_weights;
  std::optional<double> epsilon;  // RDP threshold override, px
  CheckConfig check;
};

// Inclusive range of polyline segments the engine works on.
struct SegmentWindow {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t unit_count() const { return last - first; }
};

SegmentWindow engine_window(const Polyline& poly, const EngineConfig& cfg);

struct CandidateEntry {
  std::vector<int> keys;  // expanded key sequence
  std::vector<int> dots;  // dot assigned to each consumed turning point
  std::size_t first_unit = 0;
  std::size_t last_unit = 0;
  double confidence = 0.0;
  bool complete = false;

  std::size_t units_consumed() const { return last_unit - first_unit + 1; }
  // Consumed segments are first_unit .. last_unit + 1; dots[0] sits on
  // turning point first_unit.
  std::size_t first_segment() const { return first_unit; }
  std::size_t last_segment() const { return last_unit + 1; }
};

// Middle-out beam search over unit/cipher matches. Throws
// InferenceError(NoCandidates) when the middle unit matches no cipher.
std::vector<CandidateEntry> generate_candidates(const Polyline& poly,
                                                const EngineConfig& cfg = {});

// Keeps candidates whose dot polyline crosses itself exactly where the
// trajectory segments they consumed do.
std::vector<CandidateEntry> consistency_filter(
    std::vector<CandidateEntry> candidates, const Polyline& poly,
    const EngineConfig& cfg = {});

struct Guess {
  Pattern pattern;
  double confidence = 0.0;
};
using GuessList = std::vector<Guess>;

// Valid, deduplicated (highest confidence wins), sorted by descending
// confidence compared at 1e-9 resolution, ties by pattern text.
GuessList rank(std::span<const CandidateEntry> candidates);
GuessList rank_guesses(GuessList guesses);

// Sums each pattern's confidence across lists.
GuessList fuse(std::span<const GuessList> lists);

// 1-based position of `truth`, or 0 when absent.
std::size_t rank_of(const GuessList& list, const Pattern& truth);

// Full per-trajectory pipeline followed by fusion. Trajectories rejected by
// check_track or producing no candidates are skipped with a warning.
GuessList guess(std::span<const Trajectory> trajectories,
                const EngineConfig& cfg = {},
                std::vector<std::string>* warnings = nullptr);

// Single trajectory, no fusion; empty on check failure.
GuessList guess_one(const Trajectory& t, const EngineConfig& cfg,
                    std::vector<std::string>* warnings = nullptr);

std::string guesses_to_json(const GuessList& list, std::size_t top);
std::string guesses_to_text(const GuessList& list, std::size_t top);

}  // namespace pattern_oracle
