#include "shotseg/synth.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <vector>

#include "shotseg/error.hpp"

namespace shotseg::synth {

using nlohmann::json;

namespace {

Generator parse_generator(const std::string& name) {
  if (name == "constant") return Generator::Constant;
  if (name == "checkerboard") return Generator::Checkerboard;
  if (name == "noise" || name == "seeded-noise") return Generator::Noise;
  if (name == "gradient") return Generator::Gradient;
  throw Error(ErrorCode::ValidationError, "synth: unknown generator '" + name + "'");
}

}  // namespace

VideoSpec parse_spec(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidJson, std::string("synth spec: ") + e.what());
  }
  VideoSpec spec;
  try {
    const json& shots = doc.is_array() ? doc : doc.at("shots");
    if (doc.is_object()) {
      spec.width = doc.value("width", spec.width);
      spec.height = doc.value("height", spec.height);
      if (doc.contains("frame_rate")) {
        const auto rate = doc.at("frame_rate").get<std::string>();
        const auto colon = rate.find(':');
        if (colon == std::string::npos) throw Error(ErrorCode::ValidationError, "synth: frame_rate must be 'num:den'");
        spec.frame_rate = {static_cast<std::uint32_t>(std::stoul(rate.substr(0, colon))),
                           static_cast<std::uint32_t>(std::stoul(rate.substr(colon + 1)))};
      }
    }
    for (const json& s : shots) {
      ShotSpec shot;
      shot.generator = parse_generator(s.at("generator").get<std::string>());
      shot.length = s.at("length").get<std::size_t>();
      shot.value = s.value("value", shot.value);
      shot.period = s.value("period", shot.period);
      shot.seed = s.value("seed", shot.seed);
      shot.tile = s.value("tile", shot.tile);
      if (shot.length == 0) throw Error(ErrorCode::ValidationError, "synth: shot length must be positive");
      if (shot.value < 0 || shot.value > 255) throw Error(ErrorCode::ValidationError, "synth: value must lie in [0,255]");
      if (shot.period < 1) throw Error(ErrorCode::ValidationError, "synth: period must be positive");
      if (shot.tile < 0) throw Error(ErrorCode::ValidationError, "synth: tile must be non-negative");
      spec.shots.push_back(shot);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidJson, std::string("synth spec: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::ValidationError, std::string("synth spec: ") + e.what());
  }
  if (spec.shots.empty()) throw Error(ErrorCode::EmptySpec, "synth: spec lists no shots");
  if (spec.width < 1 || spec.height < 1) throw Error(ErrorCode::ValidationError, "synth: frame size must be positive");
  if (spec.frame_rate.num == 0 || spec.frame_rate.den == 0) {
    throw Error(ErrorCode::ValidationError, "synth: frame rate terms must be positive");
  }
  return spec;
}

ingest::Plane render(const ShotSpec& shot, int width, int height) {
  ingest::Plane plane(width, height);
  switch (shot.generator) {
    case Generator::Constant:
      std::fill(plane.pixels.begin(), plane.pixels.end(), static_cast<std::uint8_t>(shot.value));
      break;
    case Generator::Checkerboard:
      for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) plane.at(r, c) = ((r / shot.period + c / shot.period) % 2) ? 255 : 0;
      break;
    case Generator::Noise: {
      std::mt19937_64 rng(shot.seed);
      if (shot.tile == 0) {
        for (auto& px : plane.pixels) px = static_cast<std::uint8_t>(rng() >> 56);
        break;
      }
      std::vector<std::uint8_t> patch(static_cast<std::size_t>(shot.tile) * shot.tile);
      for (auto& px : patch) px = static_cast<std::uint8_t>(rng() >> 56);
      for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c)
          plane.at(r, c) = patch[static_cast<std::size_t>(r % shot.tile) * shot.tile + c % shot.tile];
      break;
    }
    case Generator::Gradient:
      for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c)
          plane.at(r, c) = width == 1 ? 0 : static_cast<std::uint8_t>((255 * c + (width - 1) / 2) / (width - 1));
      break;
  }
  return plane;
}

eval::GroundTruth ground_truth(const VideoSpec& spec) {
  eval::GroundTruth truth;
  for (std::size_t i = 0; i < spec.shots.size(); ++i) {
    if (i > 0) truth.transitions.push_back(truth.total_frames);
    truth.total_frames += spec.shots[i].length;
  }
  return truth;
}

eval::GroundTruth write_video(const VideoSpec& spec, std::ostream& y4m) {
  ingest::StreamInfo info;
  info.width = spec.width;
  info.height = spec.height;
  info.frame_rate = spec.frame_rate;
  info.chroma = ingest::ChromaMode::Mono;
  ingest::write_y4m_header(y4m, info);
  for (const ShotSpec& shot : spec.shots) {
    const auto plane = render(shot, spec.width, spec.height);
    for (std::size_t f = 0; f < shot.length; ++f) ingest::write_y4m_frame(y4m, info, plane);
  }
  if (!y4m) throw Error(ErrorCode::UnreadableFile, "synth: failed writing video stream");
  return ground_truth(spec);
}

eval::GroundTruth write_video(const VideoSpec& spec, const std::filesystem::path& y4m_path) {
  std::ofstream out(y4m_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::UnreadableFile, "cannot write '" + y4m_path.string() + "'");
  return write_video(spec, out);
}

}  // namespace shotseg::synth
