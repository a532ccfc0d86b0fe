#include "pattern_oracle/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <omp.h>

#include "json.hpp"
#include "pattern_oracle/errors.hpp"
#include "pattern_oracle/kernels.hpp"
#include "pattern_oracle/stats.hpp"

namespace pattern_oracle {

namespace {

using ojson = nlohmann::ordered_json;

const std::vector<Pattern>& all_patterns() {
  static const std::vector<Pattern> patterns = enumerate_patterns_serial();
  return patterns;
}

const std::vector<std::vector<std::size_t>>& patterns_by_bin() {
  static const std::vector<std::vector<std::size_t>> bins = [] {
    std::map<int, std::vector<std::size_t>> m;
    const auto& all = all_patterns();
    for (std::size_t i = 0; i < all.size(); ++i)
      m[complexity_bin(complexity_score(all[i]).score)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [bin, idx] : m) out.push_back(std::move(idx));
    return out;
  }();
  return bins;
}

std::string sample_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%04zu", i);
  return buf;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

double quantize(double v) {
  return std::round(v / kFeatureResolution) * kFeatureResolution;
}

double interior_angle_deg(Vec2 a, Vec2 b) {
  const Vec2 back{-a.x, -a.y};
  return std::atan2(std::abs(cross(back, b)), dot(back, b)) * 180.0 /
         std::numbers::pi;
}

Correlation correlate(const std::vector<RankedSample>& pairs) {
  Correlation c;
  c.n = pairs.size();
  if (pairs.size() < 2) return c;
  c.kendall = kendall_tau_b(pairs);
  c.spearman = spearman_rho_ranked(pairs);
  return c;
}

std::vector<KdeCurve> kde_curves(const std::map<double, std::vector<double>>& groups,
                                 double lo, double hi, double step) {
  std::vector<double> grid;
  const auto n = std::size_t(std::llround((hi - lo) / step));
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(lo + double(i) * step);
  std::vector<KdeCurve> out;
  for (const auto& [standard, samples] : groups) {
    KdeCurve k;
    k.standard = standard;
    k.samples = samples.size();
    k.sigma = silverman_bandwidth(samples, step);
    k.grid = grid;
    k.density = gaussian_kde(samples, k.sigma, grid);
    k.mode = grid[std::size_t(std::max_element(k.density.begin(), k.density.end()) -
                              k.density.begin())];
    out.push_back(std::move(k));
  }
  return out;
}

ojson correlation_json(const Correlation& c) {
  return ojson{{"kendall_tau_b", c.kendall}, {"spearman_rho", c.spearman}, {"n", c.n}};
}

ojson kde_json(const std::vector<KdeCurve>& curves) {
  ojson arr = ojson::array();
  for (const auto& k : curves)
    arr.push_back({{"standard", k.standard},
                   {"samples", k.samples},
                   {"sigma", k.sigma},
                   {"mode", k.mode},
                   {"grid", k.grid},
                   {"density", k.density}});
  return arr;
}

}  // namespace

std::vector<CorpusSample> generate_corpus(const CorpusSpec& spec) {
  if (spec.tilt_max_deg < 0) throw std::invalid_argument("tilt must be >= 0");
  if (spec.noise_fraction < 0) throw std::invalid_argument("noise must be >= 0");
  const auto& patterns = all_patterns();
  const auto& bins = patterns_by_bin();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<CorpusSample> out;
  out.reserve(spec.samples);
  for (std::size_t i = 0; i < spec.samples; ++i) {
    // A fixed number of draws per sample keeps patterns and seeds aligned
    // across sweeps that only change tilt or noise.
    const std::uint64_t pick = rng();
    const std::uint64_t pick_in_bin = rng();
    const double magnitude = unit(rng) * spec.tilt_max_deg;
    const double phi = unit(rng) * 2.0 * std::numbers::pi;
    const std::uint64_t seed = rng();

    std::size_t index = pick % patterns.size();
    if (spec.complexity_stratified) {
      const auto& bin = bins[pick % bins.size()];
      index = bin[pick_in_bin % bin.size()];
    }
    SynthConfig cfg(patterns[index]);
    cfg.grid_spacing_px = spec.grid_spacing_px;
    cfg.samples_per_segment = spec.samples_per_segment;
    cfg.tilt_deg = {magnitude * std::cos(phi), magnitude * std::sin(phi), 0.0};
    cfg.noise_sigma_px = spec.noise_fraction * spec.grid_spacing_px;
    cfg.head_tail_px = spec.head_tail_px;
    cfg.seed = seed;
    out.push_back({sample_id(i), cfg, spec.keypoints});
  }
  return out;
}

LabeledSample render(const CorpusSample& sample) {
  LabeledSample s{sample.id, sample.config.pattern, {}};
  for (const SynthConfig& c : keypoint_configs(sample.config, sample.keypoints))
    s.trajectories.push_back(synthesize_trajectory(c));
  return s;
}

std::vector<LabeledSample> render_corpus(std::span<const CorpusSample> corpus) {
  std::vector<LabeledSample> out;
  out.reserve(corpus.size());
  for (const auto& c : corpus) out.push_back(render(c));
  return out;
}

void write_corpus(const std::filesystem::path& dir,
                  std::span<const CorpusSample> corpus) {
  std::filesystem::create_directories(dir);
  ojson samples = ojson::array();
  for (const auto& sample : corpus) {
    ojson files = ojson::array();
    for (const SynthConfig& c : keypoint_configs(sample.config, sample.keypoints)) {
      const std::string name = sample.id + "_" + c.keypoint_id + ".csv";
      Trajectory t = synthesize_trajectory(c);
      t.scenario = "synthetic";
      write_trajectory(dir / name, t);
      files.push_back(name);
    }
    const SynthConfig& c = sample.config;
    samples.push_back({
        {"id", sample.id},
        {"pattern", to_string(c.pattern)},
        {"files", files},
        {"config",
         {{"grid_spacing_px", c.grid_spacing_px},
          {"samples_per_segment", c.samples_per_segment},
          {"tilt_deg", c.tilt_deg},
          {"noise_sigma_px", c.noise_sigma_px},
          {"head_tail_px", c.head_tail()},
          {"seed", c.seed},
          {"keypoints", sample.keypoints}}},
    });
  }
  std::ofstream out(dir / kManifestName);
  if (!out) throw ManifestError("cannot write " + (dir / kManifestName).string());
  out << ojson{{"version", 1}, {"samples", samples}}.dump(2) << "\n";
}

std::vector<LabeledSample> load_corpus(const std::filesystem::path& dir) {
  const auto path = dir / kManifestName;
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot read " + path.string());
  ojson m;
  try {
    m = ojson::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(path.string() + ": " + e.what());
  }
  if (!m.is_object() || !m.contains("samples") || !m["samples"].is_array())
    throw ManifestError(path.string() + ": missing samples array");

  std::vector<LabeledSample> out;
  for (const auto& e : m["samples"]) {
    if (!e.is_object() || !e.contains("pattern") || !e["pattern"].is_string() ||
        !e.contains("files") || !e["files"].is_array() || e["files"].empty())
      throw ManifestError(path.string() + ": malformed sample entry");
    const std::string text = e["pattern"].get<std::string>();
    std::optional<Pattern> truth;
    try {
      truth = parse_pattern(text);
    } catch (const PatternError& err) {
      throw ManifestError(path.string() + ": pattern " + text + ": " + err.what());
    }
    LabeledSample s{e.value("id", text), *truth, {}};
    for (const auto& f : e["files"]) {
      if (!f.is_string()) throw ManifestError(path.string() + ": file names must be strings");
      try {
        s.trajectories.push_back(load_trajectory(dir / f.get<std::string>()));
      } catch (const TrajectoryError& err) {
        throw ManifestError(err.what());
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

EvalReport report_from_ranks(std::vector<std::string> ids,
                             std::vector<std::size_t> ranks,
                             std::size_t max_attempts) {
  EvalReport r;
  r.max_attempts = max_attempts;
  r.curve.assign(max_attempts, 0.0);
  std::vector<std::size_t> hits(max_attempts + 1, 0);
  for (std::size_t rank : ranks)
    if (rank >= 1 && rank <= max_attempts) ++hits[rank];
  std::size_t cumulative = 0;
  for (std::size_t a = 1; a <= max_attempts; ++a) {
    cumulative += hits[a];
    r.curve[a - 1] = ranks.empty() ? 0.0 : double(cumulative) / double(ranks.size());
  }
  r.ids = std::move(ids);
  r.ranks = std::move(ranks);
  return r;
}

std::size_t evaluate_sample(const LabeledSample& s, const EngineConfig& cfg) {
  try {
    return rank_of(guess(s.trajectories, cfg), s.truth);
  } catch (const InferenceError&) {
    return 0;
  }
}

EvalReport success_curve_serial(std::span<const LabeledSample> corpus,
                                const EngineConfig& cfg,
                                std::size_t max_attempts) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> ids;
  std::vector<std::size_t> ranks;
  for (const auto& s : corpus) {
    ids.push_back(s.id);
    ranks.push_back(evaluate_sample(s, cfg));
  }
  EvalReport r = report_from_ranks(std::move(ids), std::move(ranks), max_attempts);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

EvalReport success_curve(std::span<const LabeledSample> corpus,
                         const EngineConfig& cfg, std::size_t max_attempts,
                         int jobs) {
  const auto start = std::chrono::steady_clock::now();
  const auto n = std::ptrdiff_t(corpus.size());
  std::vector<std::string> ids(corpus.size());
  std::vector<std::size_t> ranks(corpus.size(), 0);
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, jobs))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    ids[i] = corpus[i].id;
    try {
      ranks[i] = evaluate_sample(corpus[i], cfg);
    } catch (const std::exception&) {
      ranks[i] = 0;
    }
  }
  EvalReport r = report_from_ranks(std::move(ids), std::move(ranks), max_attempts);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string curve_csv(const EvalReport& r) {
  std::string out = "attempts,success_rate\n";
  for (std::size_t a = 1; a <= r.curve.size(); ++a)
    out += std::to_string(a) + "," + fixed6(r.curve[a - 1]) + "\n";
  return out;
}

std::string reports_json(std::span<const EvalReport> reports, bool timing) {
  ojson arr = ojson::array();
  for (const auto& r : reports) {
    ojson curve = ojson::array();
    for (std::size_t a = 1; a <= r.curve.size(); ++a)
      curve.push_back({{"attempts", a}, {"success_rate", r.curve[a - 1]}});
    ojson ranks = ojson::array();
    for (std::size_t i = 0; i < r.ranks.size(); ++i)
      ranks.push_back({{"id", r.ids[i]}, {"rank", r.ranks[i]}});
    ojson e{{"label", r.label},
            {"samples", r.ranks.size()},
            {"max_attempts", r.max_attempts},
            {"success_curve", curve},
            {"ranks", ranks}};
    if (timing && r.seconds) e["seconds"] = *r.seconds;
    arr.push_back(std::move(e));
  }
  return ojson{{"reports", arr}}.dump(2) + "\n";
}

SweepSpec parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
    throw std::invalid_argument("sweep must look like name=v1,v2,...");
  SweepSpec s;
  s.parameter = text.substr(0, eq);
  if (s.parameter != "tilt" && s.parameter != "noise" &&
      s.parameter != "keypoints" && s.parameter != "spacing")
    throw std::invalid_argument("sweep parameter must be tilt, noise, keypoints or spacing");
  std::stringstream ss(text.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size())
      throw std::invalid_argument("bad sweep value '" + item + "'");
    s.values.push_back(v);
  }
  return s;
}

CorpusSpec apply_sweep_value(CorpusSpec base, const std::string& parameter,
                             double value) {
  if (parameter == "tilt") {
    base.tilt_max_deg = value;
  } else if (parameter == "noise") {
    base.noise_fraction = value;
  } else if (parameter == "keypoints") {
    base.keypoints = int(value);
  } else if (parameter == "spacing") {
    base.grid_spacing_px = value;
  } else {
    throw std::invalid_argument("unknown sweep parameter " + parameter);
  }
  return base;
}

FeatureReport feature_correlation_experiment(std::span<const LabeledSample> corpus,
                                             const EngineConfig& cfg) {
  FeatureReport report;
  std::vector<RankedSample> length_pairs, angle_pairs, cross_pairs;
  std::map<double, std::vector<double>> length_groups, angle_groups;

  for (const auto& sample : corpus) {
    if (sample.trajectories.empty()) {
      ++report.samples_skipped;
      continue;
    }
    const Trajectory& t = sample.trajectories.front();
    const Polyline poly = rdp_simplify(t, default_epsilon(t, cfg.epsilon));
    const SegmentList truth = pattern_to_segments(sample.truth);
    const std::size_t m = truth.size();
    std::size_t offset = 0;
    if (poly.points.size() == m + 3) {
      offset = 1;  // approach and exit strokes
    } else if (poly.points.size() != m + 1) {
      ++report.samples_skipped;
      continue;
    }
    ++report.samples_used;

    std::size_t ref = 0;
    for (std::size_t i = 1; i < m; ++i) {
      const IPoint d = truth[i].b - truth[i].a, r = truth[ref].b - truth[ref].a;
      if (dot(d, d) < dot(r, r)) ref = i;
    }
    auto measured = [&](std::size_t i) {
      return poly.points[offset + i + 1] - poly.points[offset + i];
    };
    const double ref_std = norm(to_vec(truth[ref].b - truth[ref].a));
    const double ref_measured = norm(measured(ref));

    std::vector<double> lengths(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double standard = quantize(norm(to_vec(truth[i].b - truth[i].a)));
      lengths[i] = quantize(norm(measured(i)) / ref_measured * ref_std);
      length_pairs.push_back({lengths[i], standard});
      length_groups[standard].push_back(lengths[i]);
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double standard = quantize(interior_angle_deg(
          to_vec(truth[i].b - truth[i].a), to_vec(truth[i + 1].b - truth[i + 1].a)));
      const double angle = quantize(interior_angle_deg(measured(i), measured(i + 1)));
      angle_pairs.push_back({angle, standard});
      angle_groups[standard].push_back(angle);
      cross_pairs.push_back({lengths[i], angle});
    }
  }

  report.length = correlate(length_pairs);
  report.angle = correlate(angle_pairs);
  report.length_angle = correlate(cross_pairs);
  report.lengths = kde_curves(length_groups, 0.0, 3.5, 0.005);
  report.angles = kde_curves(angle_groups, 0.0, 180.0, 0.25);
  return report;
}

std::string feature_report_json(const FeatureReport& r) {
  ojson j{{"samples_used", r.samples_used},
          {"samples_skipped", r.samples_skipped},
          {"correlation",
           {{"length", correlation_json(r.length)},
            {"angle", correlation_json(r.angle)},
            {"length_angle", correlation_json(r.length_angle)}}},
          {"length_kde", kde_json(r.lengths)},
          {"angle_kde", kde_json(r.angles)}};
  return j.dump(2) + "\n";
}

}  // namespace pattern_oracle
