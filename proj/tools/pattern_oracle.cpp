#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pattern_oracle/candidate_engine.hpp"
#include "pattern_oracle/cipher_model.hpp"
#include "pattern_oracle/config.hpp"
#include "pattern_oracle/errors.hpp"
#include "pattern_oracle/evaluation.hpp"
#include "pattern_oracle/kernels.hpp"
#include "pattern_oracle/synth.hpp"

namespace fs = std::filesystem;
using namespace pattern_oracle;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Pattern pattern_arg(const std::string& text) {
  try {
    return parse_pattern(text);
  } catch (const PatternError& e) {
    throw UsageError("invalid pattern '" + text + "': " + e.what());
  }
}

OutputFormat format_arg(const std::optional<std::string>& flag,
                        const GlobalConfig& cfg, OutputFormat fallback) {
  if (flag) {
    auto f = parse_format(*flag);
    if (!f) throw UsageError("format must be json, text or csv");
    return *f;
  }
  return cfg.format.value_or(fallback);
}

std::array<double, 3> tilt_arg(const std::string& text) {
  std::array<double, 3> out{};
  std::stringstream ss(text);
  std::string item;
  std::size_t i = 0;
  while (std::getline(ss, item, ',')) {
    if (i == 3) throw UsageError("tilt takes pitch,yaw,roll");
    try {
      std::size_t used = 0;
      out[i] = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad tilt value '" + item + "'");
    }
    ++i;
  }
  if (i != 3) throw UsageError("tilt takes pitch,yaw,roll");
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
}

// Options every inference-running command shares.
struct EngineFlags {
  std::optional<double> epsilon;
  std::optional<double> theta;
  std::optional<std::size_t> beam;
  bool no_filter = false;
  bool include_ends = false;
  bool substring = false;
  bool strict_contacts = false;

  void attach(CLI::App* app) {
    app->add_option("--epsilon", epsilon, "RDP threshold in px (default: 5% of the bounding-box diagonal)")
        ->check(CLI::PositiveNumber);
    app->add_option("--theta", theta, "Weight of the direction terms in unit similarity")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--beam", beam, "Candidates kept per step")->check(CLI::PositiveNumber);
    app->add_flag("--no-filter", no_filter, "Skip the intersection consistency filter");
    app->add_flag("--include-ends", include_ends, "Use the first and last stroke too");
    app->add_flag("--substring", substring, "Match intersection strings by containment");
    app->add_flag("--strict-contacts", strict_contacts,
                  "Touching pattern segments must read as non-crossing");
  }

  EngineConfig resolve(const GlobalConfig& global) const {
    GlobalConfig flags;
    flags.epsilon = epsilon;
    flags.theta = theta;
    flags.beam_width = beam;
    if (no_filter) flags.consistency_filter = false;
    EngineConfig cfg = merge(global, flags).engine_config();
    cfg.trim_ends = !include_ends;
    cfg.consistency_substring = substring;
    cfg.strict_contacts = strict_contacts;
    return cfg;
  }
};

int cmd_enumerate(bool count_only, std::optional<int> length) {
  if (length && (*length < kMinPatternLength || *length > kMaxPatternLength))
    throw UsageError("length must be 4..9");
  if (count_only) {
    const LengthCounts counts = count_by_length_serial();
    std::uint64_t total = 0;
    for (int l = kMinPatternLength; l <= kMaxPatternLength; ++l)
      if (!length || *length == l) total += counts[l];
    std::cout << total << "\n";
    return kOk;
  }
  std::string buf;
  for (int k = 1; k <= kGridKeys; ++k) {
    for_each_pattern_from(k, [&](std::span<const int> keys) {
      if (length && int(keys.size()) != *length) return;
      buf += format_keys(keys);
      buf += '\n';
      if (buf.size() > (1 << 16)) {
        std::cout << buf;
        buf.clear();
      }
    });
  }
  std::cout << buf;
  return kOk;
}

ojson score_json(const Pattern& p, const ComplexityScore& c) {
  return {{"pattern", to_string(p)},
          {"connected_dots", c.connected_dots},
          {"total_length", c.total_length},
          {"intersections", c.intersections},
          {"overlaps", c.overlaps},
          {"score", c.score}};
}

int cmd_complexity(const std::vector<std::string>& patterns, bool all, bool max,
                   bool histogram, OutputFormat fmt) {
  if (!all && patterns.empty()) throw UsageError("give a pattern or --all");
  if (all && !patterns.empty()) throw UsageError("--all takes no pattern");
  if ((max || histogram) && !all) throw UsageError("--max and --histogram need --all");
  const bool json = fmt == OutputFormat::Json;

  if (!all) {
    ojson arr = ojson::array();
    for (const auto& text : patterns) {
      const Pattern p = pattern_arg(text);
      const ComplexityScore c = complexity_score(p);
      if (json) {
        arr.push_back(score_json(p, c));
      } else {
        std::cout << (patterns.size() > 1 ? to_string(p) + "\t" : "") << fixed(c.score, 4) << "\n";
      }
    }
    if (json) std::cout << arr.dump(2) << "\n";
    return kOk;
  }

  if (max || histogram) {
    const ComplexityScan scan = complexity_scan_serial();
    ojson j;
    if (max) {
      if (json) {
        j["max"] = score_json(scan.argmax, complexity_score(scan.argmax));
      } else {
        std::cout << fixed(scan.max_score, 4) << "\t" << to_string(scan.argmax) << "\n";
      }
    }
    if (histogram) {
      ojson bins = ojson::array();
      const int last = scan.histogram.empty() ? 0 : scan.histogram.rbegin()->first;
      for (int b = 1; b <= last; ++b) {
        const auto it = scan.histogram.find(b);
        const std::uint64_t n = it == scan.histogram.end() ? 0 : it->second;
        const int lo = int(kComplexityBinWidth) * (b - 1) + 1;
        const int hi = int(kComplexityBinWidth) * b;
        if (json) {
          bins.push_back({{"from", lo}, {"to", hi}, {"patterns", n}});
        } else {
          std::cout << lo << "-" << hi << "\t" << n << "\n";
        }
      }
      if (json) j["histogram"] = bins;
    }
    if (json) std::cout << j.dump(2) << "\n";
    return kOk;
  }

  std::string buf = json ? "[" : "";
  bool first = true;
  for (int k = 1; k <= kGridKeys; ++k) {
    for_each_pattern_from(k, [&](std::span<const int> keys) {
      const Pattern p = Pattern::from_valid(keys);
      if (json) {
        buf += (first ? "\n  " : ",\n  ") + score_json(p, complexity_score(p)).dump();
        first = false;
      } else {
        buf += format_keys(keys) + "\t" + fixed(complexity_score(p).score, 4) + "\n";
      }
      if (buf.size() > (1 << 16)) {
        std::cout << buf;
        buf.clear();
      }
    });
  }
  if (json) buf += "\n]\n";
  std::cout << buf;
  return kOk;
}

int cmd_guess(const std::vector<std::string>& files, std::size_t top,
              const EngineConfig& cfg, OutputFormat fmt) {
  std::vector<Trajectory> tracks;
  for (const auto& f : files) {
    try {
      tracks.push_back(load_trajectory(f));
    } catch (const TrajectoryError& e) {
      throw UsageError(f + ": " + e.what());
    }
  }
  std::vector<std::string> warnings;
  GuessList list;
  try {
    list = guess(tracks, cfg, &warnings);
  } catch (const InferenceError& e) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    throw DomainFailure(e.what());
  }
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  if (list.empty()) throw DomainFailure("no candidate pattern fits the trajectory");
  std::cout << (fmt == OutputFormat::Json ? guesses_to_json(list, top)
                                          : guesses_to_text(list, top));
  return kOk;
}

struct SynthFlags {
  std::optional<std::string> pattern;
  std::uint64_t seed = 0;
  double noise = 0.0;
  std::string tilt = "0,0,0";
  std::optional<double> head_tail;
  double spacing = 120.0;
  int samples = 30;
  int keypoints = 1;
  std::optional<std::string> out;
  std::optional<std::size_t> corpus;
  double tilt_max = 0.0;
  double noise_frac = 0.0;
  bool stratified = false;
};

int cmd_synth(const SynthFlags& f) {
  if (f.corpus) {
    if (f.pattern) throw UsageError("--corpus draws its own patterns; drop --pattern");
    if (!f.out) throw UsageError("--corpus needs --out DIR");
    CorpusSpec spec;
    spec.samples = *f.corpus;
    spec.seed = f.seed;
    spec.tilt_max_deg = f.tilt_max;
    spec.noise_fraction = f.noise_frac;
    spec.grid_spacing_px = f.spacing;
    spec.samples_per_segment = f.samples;
    spec.head_tail_px = f.head_tail;
    spec.keypoints = f.keypoints;
    spec.complexity_stratified = f.stratified;
    const auto corpus = generate_corpus(spec);
    write_corpus(*f.out, corpus);
    std::cout << (fs::path(*f.out) / kManifestName).string() << "\n";
    return kOk;
  }
  if (!f.pattern) throw UsageError("--pattern is required");
  SynthConfig cfg(pattern_arg(*f.pattern));
  cfg.seed = f.seed;
  cfg.noise_sigma_px = f.noise;
  cfg.tilt_deg = tilt_arg(f.tilt);
  cfg.head_tail_px = f.head_tail;
  cfg.grid_spacing_px = f.spacing;
  cfg.samples_per_segment = f.samples;

  const fs::path out = f.out.value_or("synth.csv");
  const auto configs = keypoint_configs(cfg, f.keypoints);
  for (const auto& c : configs) {
    fs::path path = out;
    if (configs.size() > 1)
      path = out.parent_path() / (out.stem().string() + "_" + c.keypoint_id + ".csv");
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    Trajectory t = synthesize_trajectory(c);
    t.scenario = "synthetic";
    write_trajectory(path, t);
    std::cout << path.string() << "\n";
  }
  return kOk;
}

struct EvalFlags {
  std::optional<std::string> manifest;
  std::size_t samples = 300;
  double tilt_max = 0.0;
  double noise_frac = 0.0;
  int keypoints = 3;
  std::optional<double> head_tail;
  bool stratified = false;
  std::optional<std::string> sweep;
  int jobs = 1;
  std::size_t attempts = kDefaultAttempts;
  std::optional<std::string> out;
  bool timing = false;
  bool features = false;
};

int cmd_eval(const EvalFlags& f, const EngineConfig& cfg, std::uint64_t seed,
             OutputFormat fmt) {
  if (f.manifest && f.sweep) throw UsageError("--sweep generates corpora; drop --manifest");
  std::vector<EvalReport> reports;
  std::optional<FeatureReport> features;

  auto run = [&](std::span<const LabeledSample> corpus, std::string label) {
    EvalReport r = success_curve(corpus, cfg, f.attempts, f.jobs);
    r.label = std::move(label);
    reports.push_back(std::move(r));
    if (f.features && !features) features = feature_correlation_experiment(corpus, cfg);
  };

  if (f.manifest) {
    std::vector<LabeledSample> corpus;
    try {
      corpus = load_corpus(*f.manifest);
    } catch (const ManifestError& e) {
      throw UsageError(e.what());
    }
    run(corpus, fs::path(*f.manifest).filename().string());
  } else {
    CorpusSpec base;
    base.samples = f.samples;
    base.seed = seed;
    base.tilt_max_deg = f.tilt_max;
    base.noise_fraction = f.noise_frac;
    base.keypoints = f.keypoints;
    base.head_tail_px = f.head_tail;
    base.complexity_stratified = f.stratified;
    if (f.sweep) {
      SweepSpec sweep;
      try {
        sweep = parse_sweep(*f.sweep);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      for (double v : sweep.values) {
        const CorpusSpec spec = apply_sweep_value(base, sweep.parameter, v);
        const auto corpus = render_corpus(generate_corpus(spec));
        std::ostringstream label;
        label << sweep.parameter << "=" << v;
        run(corpus, label.str());
      }
    } else {
      const auto corpus = render_corpus(generate_corpus(base));
      run(corpus, "corpus");
    }
  }

  const std::string json = reports_json(reports, f.timing);
  if (f.out) {
    const fs::path dir = *f.out;
    write_text(dir / "report.json", json);
    for (const auto& r : reports) {
      std::string name = "curve_" + r.label + ".csv";
      for (char& c : name)
        if (c == '=' || c == '/') c = '_';
      write_text(dir / name, curve_csv(r));
    }
    if (features) write_text(dir / "features.json", feature_report_json(*features));
  }
  switch (fmt) {
    case OutputFormat::Json:
      std::cout << json;
      break;
    case OutputFormat::Csv:
      for (const auto& r : reports) {
        if (reports.size() > 1) std::cout << "# " << r.label << "\n";
        std::cout << curve_csv(r);
      }
      break;
    case OutputFormat::Text:
      for (const auto& r : reports) {
        std::cout << r.label << "\tsamples=" << r.ranks.size();
        for (std::size_t a : {std::size_t(1), std::size_t(5), r.max_attempts})
          if (a <= r.curve.size()) std::cout << "\t@" << a << "=" << fixed(r.success(a), 4);
        std::cout << "\n";
      }
      break;
  }
  if (features && !f.out) std::cerr << feature_report_json(*features);
  return kOk;
}

int cmd_dict_dump() {
  ojson arr = ojson::array();
  for (const Cipher& c : cipher_dictionary()) {
    const auto keys = c.keys();
    arr.push_back({{"dots", c.dots},
                   {"expansion", std::vector<int>(keys.begin(), keys.end())},
                   {"u", {c.u.x, c.u.y}},
                   {"v", {c.v.x, c.v.y}},
                   {"w", {c.w.x, c.w.y}},
                   {"interior_angle_deg", c.interior_angle_deg},
                   {"collinear", c.collinear},
                   {"drawable", c.drawable}});
  }
  std::cout << arr.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pattern-lock inference from hand trajectories"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pattern_oracle 1.0");

  std::optional<std::string> config_path;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path,
                 "key = value settings file (default: $PATTERN_ORACLE_CONFIG)");

  auto* enumerate = app.add_subcommand("enumerate", "List valid patterns");
  bool count_only = false;
  std::optional<int> length;
  enumerate->add_flag("--count", count_only, "Print the number of patterns only");
  enumerate->add_option("--length", length, "Only patterns with this many keys");

  auto* complexity = app.add_subcommand("complexity", "Pattern complexity scores");
  std::vector<std::string> cx_patterns;
  bool cx_all = false, cx_max = false, cx_hist = false;
  complexity->add_option("pattern", cx_patterns, "Patterns such as 1-2-3-6");
  complexity->add_flag("--all", cx_all, "Score the whole pattern space");
  complexity->add_flag("--max", cx_max, "With --all: the highest score");
  complexity->add_flag("--histogram", cx_hist, "With --all: counts per score band of 6");
  complexity->add_option("--format", format, "json or text");

  auto* guess_cmd = app.add_subcommand("guess", "Rank candidate patterns for trajectory files");
  std::vector<std::string> files;
  std::size_t top = kDefaultAttempts;
  EngineFlags guess_engine;
  guess_cmd->add_option("files", files, "Trajectory CSVs of one drawing")->required();
  guess_cmd->add_option("--top", top, "Guesses to print")->check(CLI::PositiveNumber);
  guess_cmd->add_option("--format", format, "json or text");
  guess_engine.attach(guess_cmd);

  auto* synth = app.add_subcommand("synth", "Write synthetic trajectories");
  SynthFlags sf;
  synth->add_option("--pattern", sf.pattern, "Pattern to draw");
  synth->add_option("--seed", seed, "Random seed");
  synth->add_option("--noise", sf.noise, "Gaussian noise sigma, px")->check(CLI::NonNegativeNumber);
  synth->add_option("--tilt", sf.tilt, "Camera tilt pitch,yaw,roll in degrees");
  synth->add_option("--head-tail", sf.head_tail, "Approach/exit stroke length, px (default 0.75 spacing)")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--spacing", sf.spacing, "Grid spacing, px")->check(CLI::PositiveNumber);
  synth->add_option("--samples", sf.samples, "Samples per key-to-key stroke")->check(CLI::Range(2, 100000));
  synth->add_option("--keypoints", sf.keypoints, "Hand keypoints to render")->check(CLI::Range(1, 5));
  synth->add_option("--out", sf.out, "Output CSV (or directory with --corpus)");
  synth->add_option("--corpus", sf.corpus, "Write a random corpus of N drawings");
  synth->add_option("--tilt-max", sf.tilt_max, "Corpus: maximum tilt, degrees")->check(CLI::NonNegativeNumber);
  synth->add_option("--noise-frac", sf.noise_frac, "Corpus: noise sigma as a fraction of spacing")
      ->check(CLI::NonNegativeNumber);
  synth->add_flag("--stratified", sf.stratified, "Corpus: sample complexity bands uniformly");

  auto* eval = app.add_subcommand("eval", "Success rate over a labelled corpus");
  EvalFlags ef;
  EngineFlags eval_engine;
  eval->add_option("--manifest", ef.manifest, "Corpus directory with manifest.json");
  eval->add_option("--samples", ef.samples, "Generated corpus size");
  eval->add_option("--seed", seed, "Generated corpus seed");
  eval->add_option("--tilt-max", ef.tilt_max, "Maximum tilt, degrees")->check(CLI::NonNegativeNumber);
  eval->add_option("--noise-frac", ef.noise_frac, "Noise sigma as a fraction of spacing")
      ->check(CLI::NonNegativeNumber);
  eval->add_option("--keypoints", ef.keypoints, "Keypoint tracks per drawing")->check(CLI::Range(1, 5));
  eval->add_option("--head-tail", ef.head_tail, "Approach/exit stroke length, px")
      ->check(CLI::NonNegativeNumber);
  eval->add_flag("--stratified", ef.stratified, "Sample complexity bands uniformly");
  eval->add_option("--sweep", ef.sweep, "name=v1,v2,... over tilt, noise, keypoints or spacing");
  eval->add_option("--jobs", ef.jobs, "Worker threads")->check(CLI::PositiveNumber);
  eval->add_option("--attempts", ef.attempts, "Attempt budget of the curve")->check(CLI::PositiveNumber);
  eval->add_option("--out", ef.out, "Directory for report.json and curve CSVs");
  eval->add_flag("--timing", ef.timing, "Include wall time in the report");
  eval->add_flag("--features", ef.features, "Also run the length/angle feature analysis");
  eval->add_option("--format", format, "json, text or csv");
  eval_engine.attach(eval);

  auto* dict = app.add_subcommand("dict", "Cipher dictionary");
  dict->require_subcommand(1);
  auto* dump = dict->add_subcommand("dump", "Print all ciphers as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    GlobalConfig global;
    try {
      global = config_from_env();
      if (config_path) global = merge(global, load_config(*config_path));
    } catch (const ConfigError& e) {
      throw UsageError(std::string("config: ") + e.what() +
                       (e.line() ? " (line " + std::to_string(e.line()) + ")" : ""));
    }
    const std::uint64_t run_seed = seed.value_or(global.seed.value_or(0));

    if (*enumerate) return cmd_enumerate(count_only, length);
    if (*complexity)
      return cmd_complexity(cx_patterns, cx_all, cx_max, cx_hist,
                            format_arg(format, global, OutputFormat::Text));
    if (*guess_cmd)
      return cmd_guess(files, top, guess_engine.resolve(global),
                       format_arg(format, global, OutputFormat::Text));
    if (*synth) {
      sf.seed = run_seed;
      return cmd_synth(sf);
    }
    if (*eval)
      return cmd_eval(ef, eval_engine.resolve(global), run_seed,
                      format_arg(format, global, OutputFormat::Json));
    if (*dump) return cmd_dict_dump();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  return kUsage;
}
