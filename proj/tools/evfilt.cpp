// evfilt: event-camera denoising toolkit front end.
//
//   evfilt scene --out scene.evt
//   evfilt add-noise --rate 1 --seed 3 --like scene.evt --out noise.evt
//   evfilt mix --clean scene.evt --noise noise.evt --out mixed.evt
//   evfilt filter --in mixed.evt --algo dif --emit-scores scores.csv
//   evfilt eval --scores scores.csv --out roc.csv
//   evfilt sweep --rates 0.01,0.1,1,5 --algos dif,nnb,stcf2 --out summary.csv
//   evfilt pipeline --clock-mhz 312.70 --width 1280 --height 720
//   evfilt bench --synthetic-events 1000000 --algo dif
//
// Exit codes: 0 ok, 2 input format, 3 configuration, 4 internal invariant.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "evfilt/baselines.hpp"
#include "evfilt/dif_core.hpp"
#include "evfilt/events.hpp"
#include "evfilt/hw_model.hpp"
#include "evfilt/metrics.hpp"
#include "evfilt/noise.hpp"
#include "evfilt/pipeline.hpp"
#include "evfilt/run.hpp"
#include "evfilt/scene.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace evfilt;

enum ExitCode : int { kOk = 0, kInputFormat = 2, kConfig = 3, kInternal = 4 };

struct FilterFlags {
  FilterConfig cfg;
  HwParams hw;
  std::string algo = "dif";
  int support = 2;

  void add_to(CLI::App* sub, bool with_algo = true) {
    if (with_algo) sub->add_option("--algo", algo, "dif|bif|dif-hw|nnb|stcf|stcfN")->capture_default_str();
    sub->add_option("--scale", cfg.scale, "Subarea side in pixels (8, 16, 32)")->capture_default_str();
    sub->add_option("--update-shift", cfg.update_shift, "IIR update factor u = 2^-shift")->capture_default_str();
    sub->add_option("--filter-len-us", cfg.filter_length_us, "Filter length / baseline window")->capture_default_str();
    sub->add_option("--global-update-us", cfg.global_update_period_us, "Global update period, 0 disables")
        ->capture_default_str();
    sub->add_option("--init-interval-us", cfg.init_interval_us, "Initial area interval")->capture_default_str();
    sub->add_option("--init-timestamp-us", cfg.init_timestamp_us, "Initial area timestamp")->capture_default_str();
    sub->add_option("--trunc-bits", hw.trunc_bits, "dif-hw: bits dropped from K")->capture_default_str();
    sub->add_option("--sat-bits", hw.k_sat_bits, "dif-hw: K saturation width")->capture_default_str();
    sub->add_option("--iv-bits", hw.iv_bits, "dif-hw: stored interval width")->capture_default_str();
    sub->add_option("--n", support, "STCF support count")->capture_default_str();
  }

  AlgoSpec spec() const { return AlgoSpec::parse(algo, support); }

  json to_json() const {
    return json{{"algo", algo},
                {"support", support},
                {"scale", cfg.scale},
                {"update_shift", cfg.update_shift},
                {"filter_length_us", cfg.filter_length_us},
                {"global_update_period_us", cfg.global_update_period_us},
                {"init_interval_us", cfg.init_interval_us},
                {"init_timestamp_us", cfg.init_timestamp_us},
                {"trunc_bits", hw.trunc_bits},
                {"k_sat_bits", hw.k_sat_bits},
                {"dt_bits", hw.dt_bits},
                {"dist_frac_bits", hw.dist_frac_bits},
                {"iv_bits", hw.iv_bits}};
  }
};

/// Sidecar JSON describing how an output was produced.
class Manifest {
 public:
  explicit Manifest(std::string command) : start_(std::chrono::steady_clock::now()) {
    doc_["tool"] = "evfilt";
    doc_["version"] = kToolVersion;
    doc_["command"] = std::move(command);
    doc_["config"] = json::object();
    doc_["inputs"] = json::array();
    doc_["seeds"] = json::object();
  }

  json& config() { return doc_["config"]; }
  void seed(const std::string& name, std::uint64_t v) { doc_["seeds"][name] = v; }
  void input(const std::string& path) {
    doc_["inputs"].push_back({{"path", path}, {"fnv1a64", file_digest(path).value_or("unreadable")}});
  }
  void set(const std::string& key, json value) { doc_[key] = std::move(value); }

  void write(const std::string& output_path) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    doc_["wall_clock_s"] = secs;
    if (!output_path.empty()) {
      doc_["output"] = {{"path", output_path}, {"fnv1a64", file_digest(output_path).value_or("unreadable")}};
    }
    const std::string path = (output_path.empty() ? std::string("evfilt") : output_path) + ".manifest.json";
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest " + path);
    out << doc_.dump(2) << '\n';
  }

 private:
  json doc_;
  std::chrono::steady_clock::time_point start_;
};

/// key=value lines (optionally under [subcommand] sections); applied only to
/// options the command line left unset.
void apply_config_file(const std::string& path, CLI::App* sub) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    if (!section.empty() && section != sub->get_name()) continue;
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    std::replace(key.begin(), key.end(), '_', '-');
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      if (!section.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
      continue;  // unsectioned keys may belong to other subcommands
    }
    if (opt->count() > 0) continue;  // command line wins
    opt->add_result(value);
    opt->run_callback();
  }
}

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      if constexpr (std::is_same_v<T, double>) {
        out.push_back(std::stod(item));
      } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        out.push_back(std::stoull(item));
      } else if constexpr (std::is_same_v<T, int>) {
        out.push_back(std::stoi(item));
      } else {
        out.push_back(item);
      }
    } catch (const std::logic_error&) {
      throw ConfigError("bad list element '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty list '" + text + "'");
  return out;
}

void add_scene_options(CLI::App* sub, SceneConfig& sc) {
  sub->add_option("--width", sc.width, "Scene width")->capture_default_str();
  sub->add_option("--height", sc.height, "Scene height")->capture_default_str();
  sub->add_option("--duration-us", sc.duration_us, "Scene duration")->capture_default_str();
  sub->add_option("--bars", sc.bars)->capture_default_str();
  sub->add_option("--bar-width", sc.bar_width)->capture_default_str();
  sub->add_option("--speed", sc.speed_px_per_s, "Bar speed in pixels per second")->capture_default_str();
  sub->add_option("--fire-probability", sc.fire_probability, "Chance a crossed pixel reports the edge")
      ->capture_default_str();
  sub->add_option("--jitter-us", sc.jitter_us, "Per-event latency spread")->capture_default_str();
  sub->add_option("--scene-seed", sc.seed)->capture_default_str();
}

json scene_json(const SceneConfig& sc) {
  return json{{"width", sc.width},
              {"height", sc.height},
              {"duration_us", sc.duration_us},
              {"time_step_us", sc.time_step_us},
              {"bars", sc.bars},
              {"bar_width", sc.bar_width},
              {"speed_px_per_s", sc.speed_px_per_s},
              {"fire_probability", sc.fire_probability},
              {"jitter_us", sc.jitter_us}};
}

EventStream load_stream(const std::string& path, std::optional<Geometry> geometry = std::nullopt) {
  return read_events(path, format_from_path(path), geometry);
}

void store_stream(const EventStream& s, const std::string& path) {
  write_events(s, path, format_from_path(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evfilt - event camera denoising filters, hardware model and evaluation"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key=value defaults file; flags override it");

  // scene
  auto* scene_cmd = app.add_subcommand("scene", "Generate the synthetic moving-bar clean recording");
  SceneConfig scene_cfg;
  std::string scene_out;
  add_scene_options(scene_cmd, scene_cfg);
  scene_cmd->add_option("--out", scene_out)->required();

  // add-noise
  auto* add_noise = app.add_subcommand("add-noise", "Generate labeled background-activity noise");
  NoiseConfig noise_cfg;
  std::string noise_out, noise_like;
  add_noise->add_option("--rate", noise_cfg.rate_hz, "Noise rate in Hz per pixel")->capture_default_str();
  add_noise->add_option("--seed", noise_cfg.seed, "RNG seed")->capture_default_str();
  add_noise->add_option("--step-us", noise_cfg.time_step_us, "Bernoulli time step")->capture_default_str();
  add_noise->add_option("--width", noise_cfg.width)->capture_default_str();
  add_noise->add_option("--height", noise_cfg.height)->capture_default_str();
  add_noise->add_option("--duration-us", noise_cfg.duration_us)->capture_default_str();
  add_noise->add_option("--like", noise_like, "Take geometry and duration from this stream");
  add_noise->add_option("--out", noise_out, "Output stream (.csv or EVT64)")->required();

  // mix
  auto* mix = app.add_subcommand("mix", "Merge a clean stream with labeled noise");
  std::string mix_clean, mix_noise, mix_out;
  mix->add_option("--clean", mix_clean)->required();
  mix->add_option("--noise", mix_noise, "Noise stream; polarity 0/1 is relabeled to 2/3")->required();
  mix->add_option("--out", mix_out)->required();

  // filter
  auto* filter = app.add_subcommand("filter", "Run a filter over a stream");
  FilterFlags filter_flags;
  std::string filter_in, filter_out, filter_scores;
  filter_flags.add_to(filter);
  filter->add_option("--in", filter_in)->required();
  filter->add_option("--out", filter_out, "Write passed events as a stream");
  filter->add_option("--emit-scores", filter_scores, "Write t,x,y,p,score,decision CSV");

  // eval
  auto* eval = app.add_subcommand("eval", "ROC/PR evaluation of a scores CSV");
  std::string eval_scores, eval_out, eval_pr_out;
  std::int64_t eval_skip = 0;
  eval->add_option("--scores", eval_scores)->required();
  eval->add_option("--out", eval_out, "ROC points CSV (fpr,tpr)");
  eval->add_option("--pr-out", eval_pr_out, "PR points CSV (recall,precision)");
  eval->add_option("--skip-us", eval_skip, "Ignore events before this time")->capture_default_str();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "AUROC/AUPRC over a parameter and noise grid");
  FilterFlags sweep_flags;
  sweep_flags.add_to(sweep, false);
  std::string sweep_rates = "0.01,0.1,0.25,0.5,1,2.5,5", sweep_algos = "dif,nnb,stcf2", sweep_scales = "16",
              sweep_shifts = "2", sweep_seeds = "1", sweep_out, sweep_clean;
  std::int64_t sweep_skip = 0;
  int sweep_jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  SceneConfig scene;
  sweep->add_option("--rates", sweep_rates)->capture_default_str();
  sweep->add_option("--algos", sweep_algos)->capture_default_str();
  sweep->add_option("--scales", sweep_scales)->capture_default_str();
  sweep->add_option("--shifts", sweep_shifts)->capture_default_str();
  sweep->add_option("--seeds", sweep_seeds)->capture_default_str();
  sweep->add_option("--clean", sweep_clean, "Clean recording (default: synthetic moving bars)");
  add_scene_options(sweep, scene);
  sweep->add_option("--skip-us", sweep_skip)->capture_default_str();
  sweep->add_option("--jobs", sweep_jobs)->capture_default_str();
  sweep->add_option("--out", sweep_out, "Summary CSV; existing rows are kept and skipped")->required();

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "FPGA pipeline throughput/latency model");
  double clock_mhz = 312.70;
  std::uint16_t pipe_w = 1280, pipe_h = 720;
  FilterFlags pipe_flags;
  PipelineOptions pipe_opt;
  std::string pipe_in, pipe_scores;
  bool pipe_csv = false;
  pipe_flags.add_to(pipe, false);
  pipe->add_option("--clock-mhz", clock_mhz)->capture_default_str();
  pipe->add_option("--width", pipe_w)->capture_default_str();
  pipe->add_option("--height", pipe_h)->capture_default_str();
  pipe->add_option("--overhead-cycles", pipe_opt.overhead_cycles, "Fixed cycles per global update")
      ->capture_default_str();
  pipe->add_option("--in", pipe_in, "Simulate this stream cycle by cycle");
  pipe->add_option("--emit-scores", pipe_scores, "Decisions from the simulation");
  pipe->add_flag("--csv", pipe_csv, "CSV report");

  // bench
  auto* bench = app.add_subcommand("bench", "Software throughput of a filter");
  FilterFlags bench_flags;
  std::string bench_in, bench_out;
  std::uint64_t bench_events = 1'000'000, bench_seed = 1;
  bool bench_compare = false;
  bench_flags.add_to(bench);
  bench->add_option("--in", bench_in, "Input stream (default: synthetic)");
  bench->add_option("--synthetic-events", bench_events)->capture_default_str();
  bench->add_option("--seed", bench_seed)->capture_default_str();
  bench->add_flag("--compare-hw", bench_compare, "Report decision agreement with dif-hw");
  bench->add_option("--out", bench_out, "Report path; manifest is written next to it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) apply_config_file(config_path, active);

    if (active == scene_cmd) {
      Manifest m("scene");
      const EventStream clean = generate_moving_bars(scene_cfg);
      store_stream(clean, scene_out);
      m.config() = scene_json(scene_cfg);
      m.seed("scene", scene_cfg.seed);
      m.set("events", clean.size());
      m.write(scene_out);
      std::cout << "wrote " << clean.size() << " events to " << scene_out << '\n';
    } else if (active == add_noise) {
      Manifest m("add-noise");
      if (!noise_like.empty()) {
        const EventStream like = load_stream(noise_like);
        noise_cfg.width = like.width;
        noise_cfg.height = like.height;
        const std::int64_t end = like.empty() ? noise_cfg.time_step_us : like.events.back().t + 1;
        noise_cfg.duration_us = ((end + noise_cfg.time_step_us - 1) / noise_cfg.time_step_us) * noise_cfg.time_step_us;
        m.input(noise_like);
      }
      const EventStream noise = generate_noise(noise_cfg);
      store_stream(noise, noise_out);
      m.config() = {{"rate_hz", noise_cfg.rate_hz},     {"time_step_us", noise_cfg.time_step_us},
                    {"width", noise_cfg.width},         {"height", noise_cfg.height},
                    {"duration_us", noise_cfg.duration_us}, {"rng", kNoiseRngAlgorithm}};
      m.seed("noise", noise_cfg.seed);
      m.set("events", noise.size());
      m.write(noise_out);
      std::cout << "wrote " << noise.size() << " noise events to " << noise_out << '\n';
    } else if (active == mix) {
      Manifest m("mix");
      const EventStream clean = load_stream(mix_clean);
      EventStream noise = load_stream(mix_noise, Geometry{clean.width, clean.height});
      const bool unlabeled = std::all_of(noise.events.begin(), noise.events.end(),
                                         [](const Event& e) { return e.p <= 1; });
      if (unlabeled) noise = relabel_noise(noise);
      if (std::any_of(noise.events.begin(), noise.events.end(), [](const Event& e) { return e.p <= 1; })) {
        throw StreamError("noise stream mixes labeled and unlabeled records");
      }
      if (std::any_of(clean.events.begin(), clean.events.end(), [](const Event& e) { return e.p > 1; })) {
        throw StreamError("clean stream contains noise-labeled records");
      }
      const EventStream mixed = merge_streams(clean, noise);
      store_stream(mixed, mix_out);
      m.input(mix_clean);
      m.input(mix_noise);
      m.set("relabeled_noise", unlabeled);
      m.set("events", mixed.size());
      m.write(mix_out);
      std::cout << "wrote " << mixed.size() << " events (" << clean.size() << " clean, " << noise.size()
                << " noise) to " << mix_out << '\n';
    } else if (active == filter) {
      Manifest m("filter");
      const EventStream in = load_stream(filter_in);
      const auto start = std::chrono::steady_clock::now();
      const auto scored = run_filter(in, filter_flags.spec(), filter_flags.cfg, filter_flags.hw);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::uint64_t passed = 0;
      EventStream kept{in.width, in.height, {}};
      for (const ScoredEvent& s : scored) {
        if (!s.pass) continue;
        ++passed;
        if (!filter_out.empty()) kept.events.push_back(s.event);
      }
      if (!filter_scores.empty()) write_scores(scored, filter_scores);
      if (!filter_out.empty()) store_stream(kept, filter_out);
      m.input(filter_in);
      m.config() = filter_flags.to_json();
      m.set("events", scored.size());
      m.set("passed", passed);
      m.set("meps", secs > 0 ? static_cast<double>(scored.size()) / secs / 1e6 : 0.0);
      m.write(!filter_scores.empty() ? filter_scores : filter_out);
      std::cout << "events=" << scored.size() << " passed=" << passed << '\n';
    } else if (active == eval) {
      Manifest m("eval");
      const auto scored = read_scores(eval_scores);
      const MetricOptions mo{eval_skip};
      const RocCurve roc = roc_from_scores(scored, mo);
      const PrCurve pr = auprc_from_scores(scored, mo);
      auto write_points = [](const std::string& path, const char* header, const std::vector<CurvePoint>& pts) {
        std::ofstream out(path);
        if (!out) throw IoError("cannot open " + path);
        out << header << '\n';
        out.precision(17);
        for (const CurvePoint& p : pts) out << p.x << ',' << p.y << '\n';
      };
      if (!eval_out.empty()) write_points(eval_out, "fpr,tpr", roc.points);
      if (!eval_pr_out.empty()) write_points(eval_pr_out, "recall,precision", pr.points);
      m.input(eval_scores);
      m.config() = {{"skip_us", eval_skip}};
      m.set("auroc", roc.auroc);
      m.set("auprc", pr.auprc);
      if (!eval_out.empty()) m.write(eval_out);
      std::cout.precision(6);
      std::cout << std::fixed << "auroc=" << roc.auroc << "\nauprc=" << pr.auprc << '\n';
    } else if (active == sweep) {
      Manifest m("sweep");
      SweepGrid grid;
      grid.algos.clear();
      for (const std::string& a : parse_list<std::string>(sweep_algos)) {
        grid.algos.push_back(AlgoSpec::parse(a, sweep_flags.support));
      }
      grid.scales = parse_list<int>(sweep_scales);
      grid.update_shifts = parse_list<int>(sweep_shifts);
      grid.rates = parse_list<double>(sweep_rates);
      grid.seeds = parse_list<std::uint64_t>(sweep_seeds);
      grid.base = sweep_flags.cfg;
      grid.hw = sweep_flags.hw;
      grid.skip_us = sweep_skip;
      grid.jobs = sweep_jobs;
      grid.scene = scene;
      if (!sweep_clean.empty()) {
        grid.clean = load_stream(sweep_clean);
        m.input(sweep_clean);
      }
      std::vector<SweepRow> done;
      if (std::ifstream prev(sweep_out); prev) {
        std::stringstream ss;
        ss << prev.rdbuf();
        if (!ss.str().empty()) done = parse_sweep_csv(ss.str());
      }
      const auto rows = cmd_sweep(grid, done);
      {
        std::ofstream out(sweep_out, std::ios::trunc);
        if (!out) throw IoError("cannot open " + sweep_out);
        out << sweep_csv_header();
        for (const SweepRow& r : rows) out << format_sweep_row(r);
      }
      json cfg = sweep_flags.to_json();
      cfg.erase("algo");
      cfg["algos"] = sweep_algos;
      cfg["rates"] = sweep_rates;
      cfg["scales"] = sweep_scales;
      cfg["shifts"] = sweep_shifts;
      cfg["skip_us"] = sweep_skip;
      if (sweep_clean.empty()) {
        cfg["scene"] = scene_json(scene);
        m.seed("scene", scene.seed);
      }
      m.config() = cfg;
      m.set("noise_seeds", sweep_seeds);
      m.set("rng", kNoiseRngAlgorithm);
      m.set("resumed_rows", done.size());
      m.write(sweep_out);
      std::cout << rows.size() << " rows (" << done.size() << " reused) -> " << sweep_out << '\n';
      for (const StabilityRow& s : sweep_stability(rows)) {
        std::cout << "stability " << s.algo;
        if (s.scale) std::cout << "(scale=" << s.scale << ",shift=" << s.update_shift << ")";
        std::cout << " seed=" << s.seed << " drop=" << s.drop_percent << "%\n";
      }
    } else if (active == pipe) {
      pipe_opt.clock_hz = clock_mhz * 1e6;
      if (pipe_in.empty()) {
        const PipelineStats st = pipeline_model(pipe_w, pipe_h, pipe_flags.cfg.scale,
                                                pipe_flags.cfg.global_update_period_us, pipe_opt);
        std::cout << throughput_report(st, pipe_csv);
      } else {
        Manifest m("pipeline");
        const EventStream in = load_stream(pipe_in);
        const PipelineResult r = pipeline_simulate(in, pipe_flags.cfg, pipe_flags.hw, pipe_opt);
        if (!pipe_scores.empty()) write_scores(r.decisions, pipe_scores);
        std::cout << throughput_report(r.stats, pipe_csv);
        m.input(pipe_in);
        m.config() = pipe_flags.to_json();
        m.set("clock_mhz", clock_mhz);
        m.set("overhead_cycles", pipe_opt.overhead_cycles);
        m.set("effective_meps", r.stats.effective_meps);
        m.write(pipe_scores);
      }
    } else if (active == bench) {
      Manifest m("bench");
      EventStream in;
      if (bench_in.empty()) {
        in = synthetic_stream(bench_events, 1.0, bench_seed);
        m.seed("synthetic", bench_seed);
      } else {
        in = load_stream(bench_in);
        m.input(bench_in);
      }
      const BenchReport r = cmd_bench(in, bench_flags.spec(), bench_flags.cfg, bench_flags.hw, bench_compare);
      std::cout << r.to_text();
      if (!bench_out.empty()) {
        std::ofstream out(bench_out);
        if (!out) throw IoError("cannot open " + bench_out);
        out << r.to_text();
      }
      m.config() = bench_flags.to_json();
      m.set("events", r.events);
      m.set("meps", r.meps);
      m.set("output_digest", r.output_digest);
      if (r.hw_agreement) m.set("hw_agreement", *r.hw_agreement);
      if (!bench_out.empty()) m.write(bench_out);
    }
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kInputFormat;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kInputFormat;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const StreamError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputFormat;
  } catch (const MetricError& e) {
    std::cerr << "metric error: " << e.what() << '\n';
    return kInputFormat;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
