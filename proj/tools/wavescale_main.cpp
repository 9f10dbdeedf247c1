// wavescale: Hurst exponent estimation from wavelet spectra.
//
// Subcommands: dwt, synth, spectrum, estimate, simstudy, classify.
// Exit codes: 0 success, 2 invalid input, 3 numeric failure.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "wavescale/classify.hpp"
#include "wavescale/errors.hpp"
#include "wavescale/estimators.hpp"
#include "wavescale/io.hpp"
#include "wavescale/simulation.hpp"
#include "wavescale/spectrum.hpp"
#include "wavescale/synthesis.hpp"
#include "wavescale/transform.hpp"

namespace ws = wavescale;

namespace {

ws::LevelRange parse_level_range(const std::string& token) {
  const auto colon = token.find(':');
  if (colon == std::string::npos) {
    throw ws::InvalidLevelRange("level range must look like j1:j2, got '" + token + "'");
  }
  try {
    return {std::stoi(token.substr(0, colon)), std::stoi(token.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ws::InvalidLevelRange("cannot parse level range '" + token + "'");
  }
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto pos = csv.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(csv.substr(start));
      break;
    }
    out.push_back(csv.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

// ---- dwt ------------------------------------------------------------------

struct DwtArgs {
  std::string input, output_dir, filter = "haar", boundary = "periodic";
  int j0 = 0;
  bool center = false;
};

void run_dwt(const DwtArgs& args) {
  if (args.boundary != "periodic") {
    throw ws::Error(ws::Error::Kind::invalid_input,
                    "only periodic boundary handling is supported");
  }
  const ws::Image image = ws::read_pgm(args.input);
  if (image.rows != image.cols || !ws::is_power_of_two(image.rows)) {
    throw ws::InvalidShape("dwt input must be a square power-of-two PGM");
  }
  ws::Grid2D grid(image.rows);
  grid.samples = image.pixels;
  if (args.center) {
    double mean = 0.0;
    for (double v : grid.samples) mean += v;
    mean /= static_cast<double>(grid.samples.size());
    for (double& v : grid.samples) v -= mean;
  }
  const ws::WaveletFilter filter = ws::make_filter(ws::parse_filter_name(args.filter));
  const ws::Decomposition2D decomp = ws::dwt2d(grid, filter, args.j0);
  std::filesystem::create_directories(args.output_dir);
  ws::write_decomposition_dir(args.output_dir, decomp);
  std::cout << "wrote levels " << decomp.coarsest_level << ".." << decomp.finest_level
            << " to " << args.output_dir << "\n";
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  int dim = 2;
  double hurst = 0.5;
  std::size_t size = 512;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  std::string output;
};

void run_synth(const SynthArgs& args) {
  ws::SynthesisSpec spec{args.hurst, args.dim, args.size, args.sigma, args.seed};
  const bool pgm = args.output.size() >= 4 &&
                   args.output.compare(args.output.size() - 4, 4, ".pgm") == 0;
  if (args.dim == 1) {
    if (pgm) {
      throw ws::Error(ws::Error::Kind::invalid_input, "PGM output requires --dim 2");
    }
    const std::vector<double> series = ws::synth_fbm_1d(spec);
    ws::write_csv_matrix(args.output, series, series.size(), 1);
  } else {
    const ws::Grid2D field = ws::synth_fbf_2d(spec);
    if (pgm) {
      std::cerr << "note: PGM output rescales intensities and is lossy\n";
      ws::write_pgm(args.output, field);
    } else {
      ws::write_grid_csv(args.output, field);
    }
  }
  std::cout << "wrote " << args.output << "\n";
}

// ---- spectrum ---------------------------------------------------------------

struct SpectrumArgs {
  std::string input_dir, direction = "d", levels = "3:7", bias = "none", output;
};

void run_spectrum(const SpectrumArgs& args) {
  const ws::LevelRange range = parse_level_range(args.levels);
  const ws::Direction dir = ws::parse_direction(args.direction);
  if (dir == ws::Direction::signal) {
    throw ws::Error(ws::Error::Kind::invalid_input, "spectrum --dir must be h, v or d");
  }
  ws::WaveletSpectrum spectrum;
  spectrum.direction = dir;
  spectrum.dimension = 2;
  for (int level = range.first; level <= range.last; ++level) {
    const std::string path = args.input_dir + "/d_" + ws::direction_token(dir) + "_" +
                             std::to_string(level) + ".csv";
    const auto rows = ws::read_csv_matrix(path);
    double energy = 0.0;
    std::size_t count = 0;
    for (const auto& row : rows) {
      for (double v : row) {
        energy += v * v;
        ++count;
      }
    }
    const double mu = energy / static_cast<double>(count);
    if (mu <= 0.0) {
      throw ws::DegenerateLevel("zero mean energy at level " + std::to_string(level));
    }
    spectrum.points.push_back({level, count, mu, std::log2(mu)});
  }
  const ws::BiasMode mode = ws::parse_bias_mode(args.bias);
  if (mode != ws::BiasMode::none) {
    spectrum = ws::apply_bias_correction(spectrum, mode);
  }
  ws::write_spectrum_csv(args.output, spectrum);
  std::cout << "wrote " << args.output << "\n";
}

// ---- estimate ---------------------------------------------------------------

struct EstimateArgs {
  std::string input, method = "ols";
  int dim = 2;
};

void run_estimate(const EstimateArgs& args) {
  const ws::WaveletSpectrum spectrum = ws::read_spectrum_csv(args.input);
  const ws::HurstEstimate est =
      ws::estimate(ws::parse_method(args.method), spectrum, args.dim);
  std::cout << ws::method_token(est.method) << ',' << ws::direction_token(est.direction)
            << ',' << ws::format_double(est.slope) << ',' << ws::format_double(est.hurst)
            << ',' << (est.out_of_range ? "out_of_range" : "") << "\n";
}

// ---- simstudy ---------------------------------------------------------------

struct SimstudyArgs {
  std::string config_path, output;
  unsigned threads = 0;
};

ws::ExperimentConfig parse_experiment_config(const std::string& path) {
  const auto kv = ws::read_config_kv(path);
  ws::ExperimentConfig config;
  config.filters.clear();
  config.methods.clear();
  config.hurst_targets.clear();
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  try {
    if (const auto v = get("dim")) config.dimension = std::stoi(*v);
    if (const auto v = get("size")) config.size = std::stoull(*v);
    if (const auto v = get("replicates")) config.replicates = std::stoi(*v);
    if (const auto v = get("seed")) config.base_seed = std::stoull(*v);
    if (const auto v = get("hurst")) {
      for (const auto& h : split_list(*v)) config.hurst_targets.push_back(std::stod(h));
    }
    if (const auto v = get("levels")) config.levels = parse_level_range(*v);
    if (const auto v = get("contaminate"); v && *v == "true") {
      ws::ContaminationConfig cc;
      if (const auto lv = get("contaminate_level")) cc.level = std::stoi(*lv);
      if (const auto vr = get("contaminate_variance")) {
        cc.scale_rule = ws::ScaleRule::explicit_variance;
        cc.variance = std::stod(*vr);
      }
      if (const auto em = get("contaminate_ensemble"); em && *em == "true") {
        cc.ensemble_variance = true;
      }
      if (const auto ds = get("contaminate_directions")) {
        cc.directions.clear();
        for (const auto& d : split_list(*ds)) {
          cc.directions.push_back(ws::parse_direction(d));
        }
      }
      config.contamination = cc;
    }
  } catch (const ws::Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ws::IoError("bad config value in " + path + ": " + e.what());
  }
  if (const auto v = get("filters")) {
    for (const auto& f : split_list(*v)) config.filters.push_back(ws::parse_filter_name(f));
  }
  if (const auto v = get("methods")) {
    for (const auto& m : split_list(*v)) config.methods.push_back(ws::parse_method(m));
  }
  if (config.hurst_targets.empty()) config.hurst_targets = {0.5};
  if (config.filters.empty()) config.filters = ws::all_filters();
  if (config.methods.empty()) {
    config.methods = {ws::EstimatorMethod::ols, ws::EstimatorMethod::av,
                      ws::EstimatorMethod::tt};
  }
  return config;
}

void run_simstudy(const SimstudyArgs& args) {
  ws::ExperimentConfig config = parse_experiment_config(args.config_path);
  config.threads = args.threads;
  const ws::ExperimentReport report = ws::run_simulation(config);
  std::ofstream out(args.output, std::ios::binary);
  if (!out) throw ws::IoError("cannot open for writing: " + args.output);
  out << "hurst,filter,method,direction,replicates,mean_h,bias,variance,mse\n";
  for (const auto& c : report.cells) {
    out << ws::format_double(c.hurst_target) << ',' << ws::filter_token(c.filter) << ','
        << ws::method_token(c.method) << ',' << ws::direction_token(c.direction) << ','
        << c.replicates << ',' << ws::format_double(c.mean_h) << ','
        << ws::format_double(c.bias) << ',' << ws::format_double(c.variance) << ','
        << ws::format_double(c.mse) << '\n';
  }
  if (!out) throw ws::IoError("write failed: " + args.output);
  std::cout << "wrote " << report.cells.size() << " cells to " << args.output << "\n";
}

// ---- classify ---------------------------------------------------------------

struct ClassifyArgs {
  std::string records_path, features = "hd", output;
  int folds = 4;
  int reps = 30;
  std::uint64_t seed = 0;
  bool global_threshold = false;
  unsigned threads = 0;
};

void run_classify(const ClassifyArgs& args) {
  const auto records = ws::read_records_csv(args.records_path);
  std::vector<ws::Feature> features;
  for (const auto& f : split_list(args.features)) {
    features.push_back(ws::parse_feature(f));
  }
  ws::CvOptions options;
  options.folds = args.folds;
  options.repetitions = args.reps;
  options.seed = args.seed;
  options.global_threshold = args.global_threshold;
  options.threads = args.threads;
  const ws::CvReport report = ws::classify_cv(records, features, options);
  std::ofstream out(args.output, std::ios::binary);
  if (!out) throw ws::IoError("cannot open for writing: " + args.output);
  out << "features,folds,repetitions,subjects,total,specificity,sensitivity,auc\n";
  out << args.features << ',' << report.folds << ',' << report.repetitions << ','
      << report.subjects << ',' << ws::format_double(report.total) << ','
      << ws::format_double(report.specificity) << ','
      << ws::format_double(report.sensitivity) << ',' << ws::format_double(report.auc)
      << '\n';
  if (!out) throw ws::IoError("write failed: " + args.output);
  std::cout << "wrote " << args.output << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelet-based self-similarity (Hurst) analysis toolkit"};
  app.require_subcommand(1);

  DwtArgs dwt_args;
  auto* dwt = app.add_subcommand("dwt", "2-D wavelet transform of a PGM image");
  dwt->add_option("--in", dwt_args.input, "input PGM (P5, square power-of-two)")
      ->required();
  dwt->add_option("--filter", dwt_args.filter, "haar|daub6|coif4|sym8");
  dwt->add_option("--j0", dwt_args.j0, "coarsest level");
  dwt->add_option("--boundary", dwt_args.boundary, "boundary rule (periodic)");
  dwt->add_flag("--center", dwt_args.center, "subtract the mean before transforming");
  dwt->add_option("--out", dwt_args.output_dir, "output directory")->required();

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "synthesize fBm (1-D) or fBf (2-D)");
  synth->add_option("--dim", synth_args.dim, "1 or 2");
  synth->add_option("--hurst", synth_args.hurst, "Hurst exponent in (0,1)");
  synth->add_option("--size", synth_args.size, "length or side (power of two)");
  synth->add_option("--sigma", synth_args.sigma, "scale");
  synth->add_option("--seed", synth_args.seed, "random seed");
  synth->add_option("--out", synth_args.output, "output .csv or .pgm")->required();

  SpectrumArgs spectrum_args;
  auto* spectrum = app.add_subcommand("spectrum", "level log-energies of a decomposition");
  spectrum->add_option("--in", spectrum_args.input_dir, "decomposition directory")
      ->required();
  spectrum->add_option("--dir", spectrum_args.direction, "h|v|d");
  spectrum->add_option("--levels", spectrum_args.levels, "j1:j2");
  spectrum->add_option("--bias", spectrum_args.bias, "none|av|digamma");
  spectrum->add_option("--out", spectrum_args.output, "output CSV")->required();

  EstimateArgs estimate_args;
  auto* estimate = app.add_subcommand("estimate", "Hurst estimate from a spectrum CSV");
  estimate->add_option("--in", estimate_args.input, "spectrum CSV")->required();
  estimate->add_option("--method", estimate_args.method, "ols|av|tt");
  estimate->add_option("--dim", estimate_args.dim, "1 or 2");

  SimstudyArgs simstudy_args;
  auto* simstudy = app.add_subcommand("simstudy", "Monte-Carlo estimator benchmark");
  simstudy->add_option("--config", simstudy_args.config_path, "key=value config file")
      ->required();
  simstudy->add_option("--out", simstudy_args.output, "report CSV")->required();
  simstudy->add_option("--threads", simstudy_args.threads, "worker threads (0 = auto)");

  ClassifyArgs classify_args;
  auto* classify = app.add_subcommand("classify", "cross-validated logistic classification");
  classify->add_option("--records", classify_args.records_path, "records CSV")->required();
  classify->add_option("--features", classify_args.features, "hd[,hh,hv]");
  classify->add_option("--folds", classify_args.folds, "CV folds");
  classify->add_option("--reps", classify_args.reps, "repetitions");
  classify->add_option("--seed", classify_args.seed, "shuffle seed");
  classify->add_flag("--global-threshold", classify_args.global_threshold,
                     "pick the Youden threshold once on all data");
  classify->add_option("--threads", classify_args.threads, "worker threads (0 = auto)");
  classify->add_option("--out", classify_args.output, "metrics CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*dwt) run_dwt(dwt_args);
    if (*synth) run_synth(synth_args);
    if (*spectrum) run_spectrum(spectrum_args);
    if (*estimate) run_estimate(estimate_args);
    if (*simstudy) run_simstudy(simstudy_args);
    if (*classify) run_classify(classify_args);
  } catch (const ws::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ws::Error::Kind::invalid_input ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
