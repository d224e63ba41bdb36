#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace shotseg::ingest {

inline constexpr int kFrameSide = 256;
inline constexpr int kBlockSide = 32;
inline constexpr int kBlocksPerSide = kFrameSide / kBlockSide;
inline constexpr int kBlockCount = kBlocksPerSide * kBlocksPerSide;
inline constexpr int kFramePixels = kFrameSide * kFrameSide;
inline constexpr int kBlockPixels = kBlockSide * kBlockSide;

enum class ChromaMode { C420, C422, C444, Mono };

struct Rational {
  std::uint32_t num = 1;
  std::uint32_t den = 1;
  bool operator==(const Rational&) const = default;
};

struct StreamInfo {
  int width = 0;
  int height = 0;
  Rational frame_rate;
  ChromaMode chroma = ChromaMode::C420;
  std::optional<std::size_t> frame_count;
};

// Row-major 8-bit plane of arbitrary size.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  Plane() = default;
  Plane(int w, int h, std::uint8_t fill = 0);

  std::uint8_t at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
  std::uint8_t& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }
  bool operator==(const Plane&) const = default;
};

// A 256x256 luma frame; immutable once built.
class GrayFrame {
 public:
  GrayFrame(std::size_t index, std::vector<std::uint8_t> pixels);

  std::size_t index() const noexcept { return index_; }
  std::uint8_t at(int row, int col) const { return pixels_[static_cast<std::size_t>(row) * kFrameSide + col]; }
  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

  bool operator==(const GrayFrame&) const = default;

 private:
  std::size_t index_;
  std::vector<std::uint8_t> pixels_;
};

struct Block {
  std::size_t frame_index = 0;
  int block_row = 0;
  int block_col = 0;
  std::array<std::uint8_t, kBlockPixels> pixels{};

  std::uint8_t at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * kBlockSide + col]; }
};

StreamInfo parse_y4m_header(std::istream& in);

// Bytes of a single frame payload (all planes) for the given geometry.
std::size_t y4m_frame_bytes(const StreamInfo& info);
std::size_t y4m_luma_bytes(const StreamInfo& info);

// Reads the next FRAME record, returning its Y plane at native resolution.
std::optional<Plane> next_luma_plane(std::istream& in, const StreamInfo& info);

std::optional<GrayFrame> next_frame(std::istream& in, const StreamInfo& info, std::size_t index);

class Y4mReader {
 public:
  explicit Y4mReader(std::istream& in);

  const StreamInfo& info() const noexcept { return info_; }
  std::optional<GrayFrame> next_frame();
  std::optional<Plane> next_luma_plane();

 private:
  std::istream& in_;
  StreamInfo info_;
  std::size_t next_index_ = 0;
};

void write_y4m_header(std::ostream& out, const StreamInfo& info);
// Writes one FRAME record; chroma planes (if any) are filled with 128.
void write_y4m_frame(std::ostream& out, const StreamInfo& info, const Plane& luma);

std::vector<GrayFrame> read_y4m_file(const std::filesystem::path& path);

std::uint8_t rgb_to_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

Plane read_pgm(const std::filesystem::path& path);
Plane read_png_gray(const std::filesystem::path& path);
Plane read_image_gray(const std::filesystem::path& path);

// Directory (every .pgm/.png inside) or a file-name glob such as "dir/frame_*.png".
std::vector<std::filesystem::path> expand_image_pattern(const std::string& pattern);
std::vector<GrayFrame> load_image_sequence(const std::string& pattern);

// Dispatches on the input kind: Y4M file, single image, directory or glob.
std::vector<GrayFrame> load_video(const std::string& input);

Plane resize_bilinear(const Plane& src, int out_width = kFrameSide, int out_height = kFrameSide);

GrayFrame to_frame(const Plane& plane, std::size_t index);

std::array<Block, kBlockCount> partition_blocks(const GrayFrame& frame);

GrayFrame assemble_blocks(std::span<const Block> blocks);

}  // namespace shotseg::ingest
