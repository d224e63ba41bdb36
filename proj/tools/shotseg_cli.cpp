// Command-line front end over the shotseg C API.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "shotseg/shotseg.h"

namespace {

struct CString {
  char* ptr = nullptr;
  ~CString() { shotseg_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

struct VideoDeleter {
  void operator()(shotseg_video* v) const { shotseg_video_free(v); }
};
struct DetectionDeleter {
  void operator()(shotseg_detection* d) const { shotseg_detection_free(d); }
};

int report_failure(shotseg_status status, const std::string& context) {
  std::cerr << "error: " << context << ": " << shotseg_status_name(status);
  const std::string detail = shotseg_last_error();
  if (!detail.empty()) std::cerr << ": " << detail;
  std::cerr << "\n";
  return static_cast<int>(status);
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

// Flags > config file > defaults.
struct ConfigFlags {
  std::string config_path;
  int k = 0;
  int gray_levels = 0;
  std::size_t min_seg_len = 0;
  std::uint64_t seed = 0;
  std::size_t tolerance = 0;
  std::string orientations;
  unsigned threads = 0;
  CLI::Option* k_opt = nullptr;
  CLI::Option* levels_opt = nullptr;
  CLI::Option* min_len_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
  CLI::Option* orient_opt = nullptr;
  CLI::Option* threads_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file (flags override its values)");
    k_opt = cmd->add_option("--k", k, "clusters per frame (2..64, default 6)");
    levels_opt = cmd->add_option("--graylevels", gray_levels, "quantized gray levels (2..256, default 8)");
    min_len_opt = cmd->add_option("--min-seg-len", min_seg_len, "shortest shot in frames (default 2)");
    seed_opt = cmd->add_option("--seed", seed, "clustering seed (default 42)");
    tol_opt = cmd->add_option("--tolerance", tolerance, "boundary match window in frames (default 5)");
    orient_opt = cmd->add_option("--orientations", orientations, "GLCM orientations, e.g. 0,45,90,135");
    threads_opt = cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
  }

  shotseg_status resolve(shotseg_config& cfg, std::string& context) const {
    shotseg_config_default(&cfg);
    if (!config_path.empty()) {
      const auto text = read_file(config_path);
      if (!text) {
        context = "cannot read config '" + config_path + "'";
        return SHOTSEG_ERR_IO;
      }
      if (auto s = shotseg_config_merge_json(&cfg, text->c_str()); s != SHOTSEG_OK) {
        context = "config '" + config_path + "'";
        return s;
      }
    }
    if (k_opt->count()) cfg.k = k;
    if (levels_opt->count()) cfg.gray_levels = gray_levels;
    if (min_len_opt->count()) cfg.min_seg_len = min_seg_len;
    if (seed_opt->count()) cfg.seed = seed;
    if (tol_opt->count()) cfg.tolerance = tolerance;
    if (threads_opt->count()) cfg.threads = threads;
    if (orient_opt->count()) {
      if (auto s = shotseg_config_set_orientations(&cfg, orientations.c_str()); s != SHOTSEG_OK) {
        context = "--orientations";
        return s;
      }
    }
    context = "configuration";
    return shotseg_config_validate(&cfg);
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int open_video(const std::string& input, std::unique_ptr<shotseg_video, VideoDeleter>& video) {
  shotseg_video* raw = nullptr;
  const auto s = shotseg_video_open(input.c_str(), &raw);
  video.reset(raw);
  if (s != SHOTSEG_OK) return report_failure(s, "reading '" + input + "'");
  return 0;
}

int run_detect(const std::string& input, const std::string& output, const std::string& rm_dump,
               const ConfigFlags& flags, bool quiet) {
  shotseg_config cfg;
  std::string context;
  if (auto s = flags.resolve(cfg, context); s != SHOTSEG_OK) return report_failure(s, context);

  const auto t0 = Clock::now();
  std::unique_ptr<shotseg_video, VideoDeleter> video;
  if (int rc = open_video(input, video)) return rc;
  const double decode_s = seconds_since(t0);

  shotseg_detection* raw = nullptr;
  const auto s = shotseg_detect(video.get(), &cfg, &raw);
  std::unique_ptr<shotseg_detection, DetectionDeleter> detection(raw);
  if (s != SHOTSEG_OK) return report_failure(s, "detecting shots in '" + input + "'");

  CString json;
  if (auto js = shotseg_detection_shots_json(detection.get(), &json.ptr); js != SHOTSEG_OK) {
    return report_failure(js, "serializing shots");
  }
  if (!write_output(output, json.str())) return report_failure(SHOTSEG_ERR_IO, "writing '" + output + "'");
  if (!rm_dump.empty()) {
    CString rms;
    if (auto rs = shotseg_detection_representatives_json(detection.get(), &rms.ptr); rs != SHOTSEG_OK) {
      return report_failure(rs, "serializing representative matrices");
    }
    if (!write_output(rm_dump, rms.str())) return report_failure(SHOTSEG_ERR_IO, "writing '" + rm_dump + "'");
  }
  if (!quiet) {
    std::fprintf(stderr,
                 "frames %zu  shots %zu  transitions %zu\n"
                 "timing: decode %.3fs  representation %.3fs  segmentation %.3fs  total %.3fs\n",
                 shotseg_video_frame_count(video.get()), shotseg_detection_shot_count(detection.get()),
                 shotseg_detection_transition_count(detection.get()), decode_s,
                 shotseg_detection_stage_seconds(detection.get(), SHOTSEG_STAGE_REPRESENTATION),
                 shotseg_detection_stage_seconds(detection.get(), SHOTSEG_STAGE_SEGMENTATION), seconds_since(t0));
  }
  return 0;
}

int run_features(const std::string& input, const std::string& output, const ConfigFlags& flags) {
  shotseg_config cfg;
  std::string context;
  if (auto s = flags.resolve(cfg, context); s != SHOTSEG_OK) return report_failure(s, context);
  std::unique_ptr<shotseg_video, VideoDeleter> video;
  if (int rc = open_video(input, video)) return rc;
  CString csv;
  if (auto s = shotseg_features_csv(video.get(), &cfg, &csv.ptr); s != SHOTSEG_OK) {
    return report_failure(s, "computing features");
  }
  if (!write_output(output, csv.str())) return report_failure(SHOTSEG_ERR_IO, "writing '" + output + "'");
  return 0;
}

int run_eval(const std::string& detected_path, const std::string& truth_path, const std::string& output,
             const ConfigFlags& flags) {
  shotseg_config cfg;
  std::string context;
  if (auto s = flags.resolve(cfg, context); s != SHOTSEG_OK) return report_failure(s, context);
  const auto detected = read_file(detected_path);
  if (!detected) return report_failure(SHOTSEG_ERR_IO, "cannot read '" + detected_path + "'");
  const auto truth = read_file(truth_path);
  if (!truth) return report_failure(SHOTSEG_ERR_IO, "cannot read '" + truth_path + "'");

  shotseg_report report{};
  if (auto s = shotseg_evaluate_json(detected->c_str(), truth->c_str(), cfg.tolerance, &report); s != SHOTSEG_OK) {
    return report_failure(s, "evaluating '" + detected_path + "' against '" + truth_path + "'");
  }
  CString table, json;
  shotseg_report_table(&report, &table.ptr);
  shotseg_report_json(&report, &json.ptr);
  std::cout << table.str();
  if (!output.empty() && !write_output(output, json.str())) {
    return report_failure(SHOTSEG_ERR_IO, "writing '" + output + "'");
  }
  return 0;
}

int run_synth(const std::string& spec_path, const std::string& output, std::string truth_path) {
  const auto spec = read_file(spec_path);
  if (!spec) return report_failure(SHOTSEG_ERR_IO, "cannot read '" + spec_path + "'");
  CString truth;
  if (auto s = shotseg_synth(spec->c_str(), output.c_str(), &truth.ptr); s != SHOTSEG_OK) {
    return report_failure(s, "synthesizing '" + output + "'");
  }
  if (truth_path.empty()) truth_path = output + ".truth.json";
  if (!write_output(truth_path, truth.str())) return report_failure(SHOTSEG_ERR_IO, "writing '" + truth_path + "'");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shotseg: shot-boundary detection with block texture descriptors and split-and-merge"};
  app.require_subcommand(1);

  std::string input, output, truth, rm_dump;
  bool quiet = false;

  ConfigFlags detect_flags;
  auto* detect = app.add_subcommand("detect", "detect shot boundaries and write the shots JSON");
  detect->add_option("--input,-i", input, "Y4M file, image directory, or image glob")->required();
  detect->add_option("--output,-o", output, "shots JSON path (default: stdout)");
  detect->add_option("--rm-dump", rm_dump, "write per-frame representative matrices as JSON");
  detect->add_flag("--quiet,-q", quiet, "suppress the timing summary");
  detect_flags.attach(detect);

  ConfigFlags feature_flags;
  auto* features = app.add_subcommand("features", "write per-block texture features as CSV");
  features->add_option("--input,-i", input, "Y4M file, image directory, or image glob")->required();
  features->add_option("--output,-o", output, "CSV path (default: stdout)");
  feature_flags.attach(features);

  ConfigFlags eval_flags;
  auto* eval = app.add_subcommand("eval", "score detected transitions against ground truth");
  eval->add_option("--input,-i", input, "detected shots JSON")->required();
  eval->add_option("--truth,-t", truth, "ground-truth JSON")->required();
  eval->add_option("--output,-o", output, "report JSON path");
  eval_flags.attach(eval);

  auto* synth = app.add_subcommand("synth", "render a synthetic Y4M video and its ground truth");
  synth->add_option("--input,-i", input, "shot list JSON")->required();
  synth->add_option("--output,-o", output, "Y4M output path")->required();
  synth->add_option("--truth,-t", truth, "ground-truth JSON path (default: <output>.truth.json)");

  CLI11_PARSE(app, argc, argv);

  if (detect->parsed()) return run_detect(input, output, rm_dump, detect_flags, quiet);
  if (features->parsed()) return run_features(input, output, feature_flags);
  if (eval->parsed()) return run_eval(input, truth, output, eval_flags);
  return run_synth(input, output, truth);
}
