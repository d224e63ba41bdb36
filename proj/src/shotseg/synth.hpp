#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shotseg/eval.hpp"
#include "shotseg/ingest.hpp"

namespace shotseg::synth {

enum class Generator { Constant, Checkerboard, Noise, Gradient };

struct ShotSpec {
  Generator generator = Generator::Constant;
  std::size_t length = 0;
  int value = 128;        // constant
  int period = 8;         // checkerboard
  std::uint64_t seed = 0;  // noise
  int tile = ingest::kBlockSide;  // noise patch side, 0 = independent pixels over the whole frame
};

struct VideoSpec {
  int width = ingest::kFrameSide;
  int height = ingest::kFrameSide;
  ingest::Rational frame_rate{25, 1};
  std::vector<ShotSpec> shots;
};

// {"width":256,"height":256,"frame_rate":"25:1",
//  "shots":[{"generator":"constant","value":32,"length":50}, ...]}
VideoSpec parse_spec(const std::string& json_text);

ingest::Plane render(const ShotSpec& shot, int width, int height);

eval::GroundTruth ground_truth(const VideoSpec& spec);

// Writes a MONO Y4M stream; returns its ground truth.
eval::GroundTruth write_video(const VideoSpec& spec, std::ostream& y4m);
eval::GroundTruth write_video(const VideoSpec& spec, const std::filesystem::path& y4m_path);

}  // namespace shotseg::synth
