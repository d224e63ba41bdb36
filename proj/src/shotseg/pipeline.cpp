#include "shotseg/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "shotseg/error.hpp"

namespace shotseg {

using nlohmann::json;
using nlohmann::ordered_json;

void validate(const Config& config) {
  if (config.repr.clusters < 2 || config.repr.clusters > repr::kMaxClusters) {
    throw Error(ErrorCode::InvalidArgument, "k must lie in [2, 64], got " + std::to_string(config.repr.clusters));
  }
  texture::validate(config.repr.texture);
  if (config.segmenter.min_seg_len < 1) throw Error(ErrorCode::InvalidArgument, "min_seg_len must be at least 1");
}

std::vector<texture::Orientation> parse_orientations(const std::string& text) {
  std::vector<texture::Orientation> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item == "0") out.push_back(texture::Orientation::Deg0);
    else if (item == "45") out.push_back(texture::Orientation::Deg45);
    else if (item == "90") out.push_back(texture::Orientation::Deg90);
    else if (item == "135") out.push_back(texture::Orientation::Deg135);
    else throw Error(ErrorCode::InvalidArgument, "orientation must be one of 0,45,90,135; got '" + item + "'");
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "orientation set is empty");
  return out;
}

Detection detect_shots(std::span<const ingest::GrayFrame> frames, const Config& config) {
  validate(config);
  if (frames.empty()) throw Error(ErrorCode::NoFrames, "no frames");
  if (frames.size() < config.segmenter.min_seg_len) {
    throw Error(ErrorCode::TooFewFrames, "video has " + std::to_string(frames.size()) +
                                             " frames, fewer than min_seg_len " +
                                             std::to_string(config.segmenter.min_seg_len));
  }
  using Clock = std::chrono::steady_clock;
  Detection d;
  const auto t0 = Clock::now();
  d.representatives = repr::represent_frames(frames, config.repr, config.threads);
  const auto t1 = Clock::now();

  std::vector<linalg::Matrix> rows;
  rows.reserve(d.representatives.size());
  for (const auto& rm : d.representatives) rows.push_back(rm.rows);
  d.segmentation = seg::Segmenter(rows, config.segmenter).run();
  const auto t2 = Clock::now();

  d.timings.representation_seconds = std::chrono::duration<double>(t1 - t0).count();
  d.timings.segmentation_seconds = std::chrono::duration<double>(t2 - t1).count();
  return d;
}

namespace documents {

namespace {

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidJson, std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string shots_json(const seg::Segmentation& segmentation) {
  ordered_json doc;
  doc["total_frames"] = segmentation.total_frames;
  doc["shots"] = ordered_json::array();
  for (const auto& s : segmentation.segments) doc["shots"].push_back({{"start", s.start}, {"end", s.end}});
  doc["transitions"] = segmentation.transitions();
  return doc.dump(2) + "\n";
}

eval::GroundTruth parse_transitions_json(const std::string& text) {
  const json doc = parse_json(text, "transitions document");
  eval::GroundTruth truth;
  try {
    truth.total_frames = doc.at("total_frames").get<std::size_t>();
    truth.transitions = doc.at("transitions").get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidJson, std::string("transitions document: ") + e.what());
  }
  eval::validate(truth);
  return truth;
}

std::string truth_json(const eval::GroundTruth& truth) {
  ordered_json doc;
  doc["total_frames"] = truth.total_frames;
  doc["transitions"] = truth.transitions;
  return doc.dump(2) + "\n";
}

std::string report_json(const eval::EvalReport& report) {
  ordered_json doc;
  doc["D"] = report.counts.detected;
  doc["MD"] = report.counts.missed;
  doc["FA"] = report.counts.false_alarms;
  doc["precision"] = report.precision;
  doc["recall"] = report.recall;
  doc["f_measure"] = report.f_measure;
  return doc.dump(2) + "\n";
}

std::string features_csv_header() {
  std::string h = "frame,block_row,block_col";
  for (int f = 1; f <= texture::kFeatureCount; ++f) h += ",f" + std::to_string(f);
  return h + "\n";
}

std::string features_csv_rows(const repr::FrameFeatureMatrix& fm) {
  std::string out;
  char buf[64];
  for (std::size_t b = 0; b < fm.features.rows(); ++b) {
    out += std::to_string(fm.frame_index) + "," + std::to_string(b / ingest::kBlocksPerSide) + "," +
           std::to_string(b % ingest::kBlocksPerSide);
    for (double v : fm.features.row(b)) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

std::string representatives_json(std::span<const repr::RepresentativeMatrix> rms) {
  ordered_json doc = ordered_json::array();
  for (const auto& rm : rms) {
    ordered_json rows = ordered_json::array();
    for (std::size_t r = 0; r < rm.rows.rows(); ++r) {
      const auto row = rm.rows.row(r);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    doc.push_back({{"frame", rm.frame_index}, {"rm", rows}});
  }
  return doc.dump() + "\n";
}

Config config_from_json(const std::string& text, Config base) {
  const json doc = parse_json(text, "config");
  if (!doc.is_object()) throw Error(ErrorCode::InvalidJson, "config: expected a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "k") base.repr.clusters = value.get<int>();
      else if (key == "graylevels") base.repr.texture.gray_levels = value.get<int>();
      else if (key == "distance") base.repr.texture.distance = value.get<int>();
      else if (key == "min_seg_len") base.segmenter.min_seg_len = value.get<std::size_t>();
      else if (key == "seed") base.repr.seed = value.get<std::uint64_t>();
      else if (key == "tolerance") base.tolerance = value.get<std::size_t>();
      else if (key == "threads") base.threads = value.get<unsigned>();
      else if (key == "orientations") {
        if (value.is_string()) {
          base.repr.texture.orientations = parse_orientations(value.get<std::string>());
        } else {
          std::string joined;
          for (const auto& v : value) joined += (joined.empty() ? "" : ",") + std::to_string(v.get<int>());
          base.repr.texture.orientations = parse_orientations(joined);
        }
      } else {
        throw Error(ErrorCode::ValidationError, "config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidJson, std::string("config: ") + e.what());
  }
  return base;
}

}  // namespace documents

}  // namespace shotseg
