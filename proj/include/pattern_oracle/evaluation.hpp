#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pattern_oracle/candidate_engine.hpp"
#include "pattern_oracle/synth.hpp"

namespace pattern_oracle {

// Parameters of a randomly drawn synthetic corpus.
struct CorpusSpec {
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  double tilt_max_deg = 0.0;    // total tilt drawn uniformly in [0, max]
  double noise_fraction = 0.0;  // sigma as a fraction of grid spacing
  double grid_spacing_px = 120.0;
  int samples_per_segment = 30;
  std::optional<double> head_tail_px;
  // Tracked hand keypoints per drawing, fused at guess time.
  int keypoints = 3;
  // Draw a complexity bin uniformly first, then a pattern within it.
  bool complexity_stratified = false;
};

struct CorpusSample {
  std::string id;
  SynthConfig config;
  int keypoints = 1;
};

std::vector<CorpusSample> generate_corpus(const CorpusSpec& spec);

struct LabeledSample {
  std::string id;
  Pattern truth;
  std::vector<Trajectory> trajectories;
};

LabeledSample render(const CorpusSample& sample);
std::vector<LabeledSample> render_corpus(std::span<const CorpusSample> corpus);

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kManifestName = "manifest.json";

// Trajectory CSVs `<id>_<keypoint>.csv` plus manifest.json.
void write_corpus(const std::filesystem::path& dir,
                  std::span<const CorpusSample> corpus);
std::vector<LabeledSample> load_corpus(const std::filesystem::path& dir);

inline constexpr std::size_t kDefaultAttempts = 20;

struct EvalReport {
  std::string label;
  std::size_t max_attempts = kDefaultAttempts;
  std::vector<double> curve;  // curve[a - 1] = fraction with rank <= a
  std::vector<std::string> ids;
  std::vector<std::size_t> ranks;  // 0 = truth not in the list
  std::optional<double> seconds;

  double success(std::size_t attempts) const { return curve.at(attempts - 1); }
};

EvalReport report_from_ranks(std::vector<std::string> ids,
                             std::vector<std::size_t> ranks,
                             std::size_t max_attempts = kDefaultAttempts);

// Rank of the truth in the fused guess list; 0 when the list is empty or
// misses it.
std::size_t evaluate_sample(const LabeledSample& s, const EngineConfig& cfg);

EvalReport success_curve_serial(std::span<const LabeledSample> corpus,
                                const EngineConfig& cfg = {},
                                std::size_t max_attempts = kDefaultAttempts);
// Samples are distributed over `jobs` OpenMP threads; the result matches
// the serial version exactly.
EvalReport success_curve(std::span<const LabeledSample> corpus,
                         const EngineConfig& cfg = {},
                         std::size_t max_attempts = kDefaultAttempts,
                         int jobs = 1);

std::string curve_csv(const EvalReport& r);
// {"reports": [...]}; timing only when requested.
std::string reports_json(std::span<const EvalReport> reports, bool timing);

struct SweepSpec {
  std::string parameter;  // tilt, noise, keypoints or spacing
  std::vector<double> values;
};

// "tilt=0,15,25"
SweepSpec parse_sweep(const std::string& text);
CorpusSpec apply_sweep_value(CorpusSpec base, const std::string& parameter,
                             double value);

struct KdeCurve {
  double standard = 0.0;
  std::size_t samples = 0;
  double sigma = 0.0;
  double mode = 0.0;
  std::vector<double> grid;
  std::vector<double> density;
};

struct Correlation {
  double kendall = 0.0;
  double spearman = 0.0;
  std::size_t n = 0;
};

struct FeatureReport {
  std::vector<KdeCurve> lengths;  // grid units
  std::vector<KdeCurve> angles;   // degrees
  Correlation length;             // measured vs standard length
  Correlation angle;              // measured vs standard angle
  Correlation length_angle;       // measured length vs measured angle
  std::size_t samples_used = 0;
  std::size_t samples_skipped = 0;
};

// Measured features are rounded to this resolution so that equal standard
// values measure as equal values.
inline constexpr double kFeatureResolution = 1e-9;

// Uses the first trajectory of each sample. Segment lengths are scaled by
// the measured length of the segment whose standard length is the
// pattern's shortest. Samples whose simplified polyline does not have the
// expected number of turning points are skipped.
FeatureReport feature_correlation_experiment(std::span<const LabeledSample> corpus,
                                             const EngineConfig& cfg = {});

std::string feature_report_json(const FeatureReport& r);

}  // namespace pattern_oracle
