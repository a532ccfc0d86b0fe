#include "pattern_oracle/candidate_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string_view>
#include <unordered_map>

#include "json.hpp"
#include "pattern_oracle/errors.hpp"

namespace pattern_oracle {

namespace {

// Compact search state. Every dot is a distinct key, so no more than nine
// dots (seven units) can ever be consumed.
struct State {
  std::array<std::uint8_t, kGridKeys> keys{};
  std::array<std::uint8_t, kGridKeys> dots{};
  std::uint8_t nkeys = 0;
  std::uint8_t ndots = 0;
  bool closed_left = false;
  bool closed_right = false;
  std::uint32_t first_unit = 0;
  std::uint32_t last_unit = 0;
  double confidence = 0.0;

  // Replays the dots in drawing order: a stroke selects an unvisited dot
  // it passes over and glides over a visited one. Fails when a turning dot
  // was already visited. Leftward growth can turn an earlier selection into
  // a pass-over, so keys are always rebuilt from scratch.
  bool replay() {
    unsigned visited = 1u << dots[0];
    keys[0] = dots[0];
    nkeys = 1;
    for (int i = 1; i < ndots; ++i) {
      const int to = dots[i];
      if (visited & (1u << to)) return false;
      const int m = midpoint_key(dots[i - 1], to);
      if (m != 0 && !(visited & (1u << m))) {
        keys[nkeys++] = std::uint8_t(m);
        visited |= 1u << m;
      }
      keys[nkeys++] = std::uint8_t(to);
      visited |= 1u << to;
    }
    return true;
  }

  bool append(int to) {
    if (ndots == kGridKeys) return false;
    dots[ndots++] = std::uint8_t(to);
    return replay();
  }

  bool prepend(int from) {
    if (ndots == kGridKeys) return false;
    std::copy_backward(dots.begin(), dots.begin() + ndots,
                       dots.begin() + ndots + 1);
    dots[0] = std::uint8_t(from);
    ++ndots;
    return replay();
  }
};

// Strict total order used for beam truncation: best confidence first.
bool better(const State& a, const State& b) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  if (a.first_unit != b.first_unit) return a.first_unit < b.first_unit;
  if (a.last_unit != b.last_unit) return a.last_unit < b.last_unit;
  return std::lexicographical_compare(a.dots.begin(), a.dots.begin() + a.ndots,
                                      b.dots.begin(), b.dots.begin() + b.ndots);
}

void truncate(std::vector<State>& states, std::size_t beam) {
  if (states.size() <= beam) return;
  std::nth_element(states.begin(), states.begin() + beam, states.end(), better);
  states.resize(beam);
}

struct Match {
  int dot;  // the dot a join contributes
  double score;
};

// Per-unit cipher matches indexed by the pair of dots a join must agree
// on: (d1,d2) for rightward joins, (d2,d3) for leftward ones.
struct UnitMatches {
  std::vector<std::pair<std::size_t, double>> all;  // cipher index, score
  std::array<std::vector<Match>, 100> by_head;      // key d1*10+d2 -> d3
  std::array<std::vector<Match>, 100> by_tail;      // key d2*10+d3 -> d1
};

UnitMatches match_unit(const Unit& unit, double weight, double theta) {
  UnitMatches m;
  const auto& dict = cipher_dictionary();
  for (std::size_t i = 0; i < dict.size(); ++i) {
    const auto s = unit_similarity(unit, dict[i], {theta});
    if (!s) continue;
    const double score = *s * weight;
    const auto& d = dict[i].dots;
    m.all.emplace_back(i, score);
    m.by_head[d[0] * 10 + d[1]].push_back({d[2], score});
    m.by_tail[d[1] * 10 + d[2]].push_back({d[0], score});
  }
  return m;
}

// Intersection strings of the candidate's dot polyline. With `strict` off,
// pairs that touch without properly crossing read '?': such contacts sit
// on a grid dot and either outcome is observed once the trace is noisy.
IntersectionDict dot_dict(const CandidateEntry& c, bool strict) {
  std::vector<ISegment> segs;
  for (std::size_t i = 1; i < c.dots.size(); ++i)
    segs.push_back({grid_position(c.dots[i - 1]), grid_position(c.dots[i])});
  IntersectionDict dict = parse_intersections(segs);
  if (strict) return dict;
  for (int d = kMinGap; d <= kMaxGap; ++d)
    for (std::size_t i = 0; i < dict[d].size(); ++i)
      if (dict[d][i] == 'F' && touch_or_cross(segs[i], segs[i + d]))
        dict[d][i] = '?';
  return dict;
}

bool same_at(std::string_view t, std::string_view p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != '?' && p[i] != t[i]) return false;
  return true;
}

bool dict_strings_match(const std::string& t, const std::string& p,
                        bool substring) {
  if (!substring) return t.size() == p.size() && same_at(t, p);
  for (std::size_t off = 0; off + p.size() <= t.size(); ++off)
    if (same_at(std::string_view(t).substr(off), p)) return true;
  return false;
}

long long confidence_key(double c) { return std::llround(c * 1e9); }

}  // namespace

SegmentWindow engine_window(const Polyline& poly, const EngineConfig& cfg) {
  const std::size_t n = poly.points.size();
  if (n < 3)
    throw InferenceError(InferenceErrorKind::TooFewTurningPoints,
                         "need at least 3 turning points, got " +
                             std::to_string(n));
  SegmentWindow w{0, n - 2};
  // Trimming needs at least one unit left over.
  if (cfg.trim_ends && n >= 5) w = {1, n - 3};
  return w;
}

std::vector<CandidateEntry> generate_candidates(const Polyline& poly,
                                                const EngineConfig& cfg) {
  if (cfg.beam_width < 1) throw std::invalid_argument("beam width must be >= 1");
  const std::vector<Unit> units = extract_units(poly);
  const SegmentWindow win = engine_window(poly, cfg);
  const std::size_t first = win.first;
  const std::size_t last = win.last - 1;  // last unit index in the window
  const std::size_t total = win.unit_count();
  const std::size_t required =
      std::min(total, std::max<std::size_t>(1, cfg.min_units_consumed.value_or(total)));
  const bool keep_partial = required < total;

  std::vector<UnitMatches> matches(units.size());
  for (std::size_t j = first; j <= last; ++j) {
    const double w = j < cfg.unit_weights.size() ? cfg.unit_weights[j] : 1.0;
    matches[j] = match_unit(units[j], w, cfg.theta);
  }

  const std::size_t mid = first + (total - 1) / 2;
  const auto& dict = cipher_dictionary();
  std::vector<State> states;
  for (const auto& [ci, score] : matches[mid].all) {
    const Cipher& c = dict[ci];
    State s;
    s.dots[s.ndots++] = std::uint8_t(c.dots[0]);
    if (!s.append(c.dots[1]) || !s.append(c.dots[2])) continue;
    s.first_unit = s.last_unit = std::uint32_t(mid);
    s.confidence = score;
    states.push_back(s);
  }
  if (states.empty())
    throw InferenceError(InferenceErrorKind::NoCandidates,
                         "no cipher matches the middle unit");
  truncate(states, cfg.beam_width);

  std::size_t right = mid + 1;
  std::ptrdiff_t left = std::ptrdiff_t(mid) - 1;
  bool go_right = true;
  std::vector<State> next;
  while (right <= last || left >= std::ptrdiff_t(first)) {
    const bool step_right =
        right <= last && (go_right || left < std::ptrdiff_t(first));
    go_right = !step_right;
    const std::size_t j = step_right ? right++ : std::size_t(left--);
    const UnitMatches& m = matches[j];

    next.clear();
    for (const State& s : states) {
      if (step_right ? s.closed_right : s.closed_left) {
        next.push_back(s);
        continue;
      }
      if (step_right) {
        const int d1 = s.dots[s.ndots - 2], d2 = s.dots[s.ndots - 1];
        for (const Match& mt : m.by_head[d1 * 10 + d2]) {
          State t = s;
          if (!t.append(mt.dot)) continue;
          t.last_unit = std::uint32_t(j);
          t.confidence += mt.score;
          next.push_back(t);
        }
      } else {
        const int d2 = s.dots[0], d3 = s.dots[1];
        for (const Match& mt : m.by_tail[d2 * 10 + d3]) {
          State t = s;
          if (!t.prepend(mt.dot)) continue;
          t.first_unit = std::uint32_t(j);
          t.confidence += mt.score;
          next.push_back(t);
        }
      }
      if (keep_partial) {
        State t = s;
        (step_right ? t.closed_right : t.closed_left) = true;
        next.push_back(t);
      }
    }
    truncate(next, cfg.beam_width);
    states.swap(next);
  }

  std::sort(states.begin(), states.end(), better);
  std::vector<CandidateEntry> out;
  for (const State& s : states) {
    CandidateEntry c;
    c.keys.assign(s.keys.begin(), s.keys.begin() + s.nkeys);
    c.dots.assign(s.dots.begin(), s.dots.begin() + s.ndots);
    c.first_unit = s.first_unit;
    c.last_unit = s.last_unit;
    c.confidence = s.confidence;
    c.complete = c.units_consumed() >= required;
    if (c.complete) out.push_back(std::move(c));
  }
  return out;
}

std::vector<CandidateEntry> consistency_filter(
    std::vector<CandidateEntry> candidates, const Polyline& poly,
    const EngineConfig& cfg) {
  if (!cfg.consistency_filter) return candidates;
  const std::vector<FSegment> traj = segments_of(poly.points);
  std::map<std::pair<std::size_t, std::size_t>, IntersectionDict> cache;
  auto traj_dict = [&](std::size_t a, std::size_t b) -> const IntersectionDict& {
    auto it = cache.find({a, b});
    if (it == cache.end()) {
      std::span<const FSegment> window(traj.data() + a, b - a + 1);
      it = cache.emplace(std::pair{a, b}, parse_intersections(window)).first;
    }
    return it->second;
  };

  std::vector<CandidateEntry> kept;
  for (auto& c : candidates) {
    const IntersectionDict& t = traj_dict(c.first_segment(), c.last_segment());
    const IntersectionDict p = dot_dict(c, cfg.strict_contacts);
    bool match = true;
    for (int d = kMinGap; d <= kMaxGap && match; ++d)
      match = dict_strings_match(t[d], p[d], cfg.consistency_substring);
    if (match) kept.push_back(std::move(c));
  }
  return kept;
}

GuessList rank_guesses(GuessList guesses) {
  std::map<Pattern, double> best;
  for (const Guess& g : guesses) {
    auto [it, inserted] = best.emplace(g.pattern, g.confidence);
    if (!inserted) it->second = std::max(it->second, g.confidence);
  }
  GuessList out;
  out.reserve(best.size());
  for (const auto& [p, c] : best) out.push_back({p, c});
  // std::map iteration is already lexicographic, which equals text order
  // for single-digit keys; stable_sort keeps it for equal confidence.
  std::stable_sort(out.begin(), out.end(), [](const Guess& a, const Guess& b) {
    return confidence_key(a.confidence) > confidence_key(b.confidence);
  });
  return out;
}

GuessList rank(std::span<const CandidateEntry> candidates) {
  GuessList valid;
  for (const auto& c : candidates) {
    if (find_violation(c.keys)) continue;
    valid.push_back({Pattern::from_valid(c.keys), c.confidence});
  }
  return rank_guesses(std::move(valid));
}

GuessList fuse(std::span<const GuessList> lists) {
  std::map<Pattern, double> sum;
  for (const auto& list : lists)
    for (const Guess& g : list) sum[g.pattern] += g.confidence;
  GuessList merged;
  for (const auto& [p, c] : sum) merged.push_back({p, c});
  return rank_guesses(std::move(merged));
}

std::size_t rank_of(const GuessList& list, const Pattern& truth) {
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i].pattern == truth) return i + 1;
  return 0;
}

namespace {

// nullopt when the track check rejects `t`.
std::optional<GuessList> run_pipeline(const Trajectory& t,
                                      const EngineConfig& cfg,
                                      std::vector<std::string>* warnings) {
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(t.source + ": " + msg);
  };
  const CheckResult check = check_track(t, cfg.check);
  if (!check.valid) {
    warn(std::string("track check failed (") + to_string(check.reason) + ")");
    return std::nullopt;
  }
  const Polyline poly = rdp_simplify(t, default_epsilon(t, cfg.epsilon));
  try {
    auto cands = generate_candidates(poly, cfg);
    cands = consistency_filter(std::move(cands), poly, cfg);
    return rank(cands);
  } catch (const InferenceError& e) {
    warn(e.what());
    return GuessList{};
  }
}

}  // namespace

GuessList guess_one(const Trajectory& t, const EngineConfig& cfg,
                    std::vector<std::string>* warnings) {
  return run_pipeline(t, cfg, warnings).value_or(GuessList{});
}

GuessList guess(std::span<const Trajectory> trajectories,
                const EngineConfig& cfg, std::vector<std::string>* warnings) {
  std::vector<GuessList> lists;
  for (const Trajectory& t : trajectories)
    if (auto list = run_pipeline(t, cfg, warnings)) lists.push_back(std::move(*list));
  if (lists.empty())
    throw InferenceError(InferenceErrorKind::AllTrajectoriesInvalid,
                         "no trajectory passed the track check");
  return fuse(lists);
}

std::string guesses_to_json(const GuessList& list, std::size_t top) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < list.size() && i < top; ++i) {
    nlohmann::ordered_json e;
    e["pattern"] = to_string(list[i].pattern);
    e["confidence"] = list[i].confidence;
    e["rank"] = i + 1;
    arr.push_back(std::move(e));
  }
  return arr.dump(2) + "\n";
}

std::string guesses_to_text(const GuessList& list, std::size_t top) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < list.size() && i < top; ++i) {
    std::snprintf(buf, sizeof buf, "%.6f", list[i].confidence);
    out += std::to_string(i + 1) + "\t" + to_string(list[i].pattern) + "\t" +
           buf + "\n";
  }
  return out;
}

}  // namespace pattern_oracle
