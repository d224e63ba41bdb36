#include "shotseg/ingest.hpp"

#include <png.h>
#include <fnmatch.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "shotseg/error.hpp"

namespace shotseg::ingest {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kSignature = "YUV4MPEG2";
constexpr std::size_t kMaxHeaderBytes = 4096;

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

std::uint32_t parse_uint(std::string_view text, const std::string& token) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    fail(ErrorCode::BadParameter, "y4m: malformed header parameter '" + token + "'");
  }
  return value;
}

Rational parse_ratio(std::string_view text, const std::string& token) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    fail(ErrorCode::BadParameter, "y4m: expected ratio in '" + token + "'");
  }
  return {parse_uint(text.substr(0, colon), token), parse_uint(text.substr(colon + 1), token)};
}

ChromaMode parse_chroma(std::string_view tag) {
  if (tag == "420jpeg" || tag == "420paldv" || tag == "420mpeg2" || tag == "420") return ChromaMode::C420;
  if (tag == "422") return ChromaMode::C422;
  if (tag == "444") return ChromaMode::C444;
  if (tag == "mono") return ChromaMode::Mono;
  fail(ErrorCode::UnsupportedChroma, "y4m: unsupported chroma tag 'C" + std::string(tag) + "'");
}

const char* chroma_tag(ChromaMode mode) {
  switch (mode) {
    case ChromaMode::C420: return "420jpeg";
    case ChromaMode::C422: return "422";
    case ChromaMode::C444: return "444";
    case ChromaMode::Mono: return "mono";
  }
  return "420jpeg";
}

// Round half away from zero, clamped to the byte range.
std::uint8_t to_byte(double v) {
  double r = v < 0 ? -std::floor(-v + 0.5) : std::floor(v + 0.5);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

bool read_exact(std::istream& in, char* dst, std::size_t n) {
  in.read(dst, static_cast<std::streamsize>(n));
  return static_cast<std::size_t>(in.gcount()) == n;
}

bool has_glob_chars(const std::string& s) { return s.find_first_of("*?[") != std::string::npos; }

std::string lower_ext(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

bool is_image_ext(const fs::path& p) {
  auto ext = lower_ext(p);
  return ext == ".pgm" || ext == ".png";
}

}  // namespace

Plane::Plane(int w, int h, std::uint8_t fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

GrayFrame::GrayFrame(std::size_t index, std::vector<std::uint8_t> pixels)
    : index_(index), pixels_(std::move(pixels)) {
  if (pixels_.size() != static_cast<std::size_t>(kFramePixels)) {
    throw Error(ErrorCode::InvalidArgument, "GrayFrame requires exactly 256x256 pixels");
  }
}

StreamInfo parse_y4m_header(std::istream& in) {
  std::string line;
  char c = 0;
  bool terminated = false;
  while (line.size() < kMaxHeaderBytes && in.get(c)) {
    if (c == '\n') {
      terminated = true;
      break;
    }
    line.push_back(c);
  }
  if (line.empty() && !terminated) fail(ErrorCode::NoFrames, "y4m: empty stream, no frames");
  if (line.compare(0, kSignature.size(), kSignature) != 0 ||
      (line.size() > kSignature.size() && line[kSignature.size()] != ' ')) {
    fail(ErrorCode::MissingSignature, "y4m: missing YUV4MPEG2 signature");
  }
  if (!terminated) fail(ErrorCode::BadParameter, "y4m: unterminated stream header");

  StreamInfo info;
  bool have_w = false, have_h = false, have_f = false;
  std::istringstream tokens(line.substr(kSignature.size()));
  std::string token;
  while (tokens >> token) {
    std::string_view value = std::string_view(token).substr(1);
    switch (token[0]) {
      case 'W':
        info.width = static_cast<int>(parse_uint(value, token));
        have_w = true;
        break;
      case 'H':
        info.height = static_cast<int>(parse_uint(value, token));
        have_h = true;
        break;
      case 'F':
        info.frame_rate = parse_ratio(value, token);
        have_f = true;
        break;
      case 'I':
        if (value.size() != 1 || std::string_view("ptbm?").find(value[0]) == std::string_view::npos) {
          fail(ErrorCode::BadParameter, "y4m: bad interlace parameter '" + token + "'");
        }
        break;
      case 'A':
        parse_ratio(value, token);
        break;
      case 'C':
        info.chroma = parse_chroma(value);
        break;
      case 'X':
        break;
      default:
        fail(ErrorCode::UnknownParameter, "y4m: unknown header parameter '" + token + "'");
    }
  }
  if (!have_w || !have_h || !have_f) {
    fail(ErrorCode::MissingParameter, "y4m: header lacks one of the mandatory W/H/F parameters");
  }
  if (info.width < 1 || info.height < 1) fail(ErrorCode::BadParameter, "y4m: frame size must be positive");
  if (info.frame_rate.num == 0 || info.frame_rate.den == 0) {
    fail(ErrorCode::BadParameter, "y4m: frame rate terms must be positive");
  }
  return info;
}

std::size_t y4m_luma_bytes(const StreamInfo& info) {
  return static_cast<std::size_t>(info.width) * static_cast<std::size_t>(info.height);
}

std::size_t y4m_frame_bytes(const StreamInfo& info) {
  const std::size_t w = info.width, h = info.height;
  const std::size_t cw = (w + 1) / 2, ch = (h + 1) / 2;
  switch (info.chroma) {
    case ChromaMode::C420: return w * h + 2 * cw * ch;
    case ChromaMode::C422: return w * h + 2 * cw * h;
    case ChromaMode::C444: return 3 * w * h;
    case ChromaMode::Mono: return w * h;
  }
  return w * h;
}

std::optional<Plane> next_luma_plane(std::istream& in, const StreamInfo& info) {
  char marker[5];
  in.read(marker, 5);
  const auto got = in.gcount();
  if (got == 0) return std::nullopt;
  if (got < 5 || std::string_view(marker, 5) != "FRAME") {
    fail(ErrorCode::MalformedFrameMarker, "y4m: malformed FRAME marker");
  }
  char c = 0;
  if (!in.get(c) || (c != ' ' && c != '\n')) fail(ErrorCode::MalformedFrameMarker, "y4m: malformed FRAME marker");
  std::size_t param_bytes = 0;
  while (c != '\n') {
    if (!in.get(c) || ++param_bytes > kMaxHeaderBytes) {
      fail(ErrorCode::MalformedFrameMarker, "y4m: unterminated FRAME parameters");
    }
  }

  Plane luma(info.width, info.height);
  if (!read_exact(in, reinterpret_cast<char*>(luma.pixels.data()), luma.pixels.size())) {
    fail(ErrorCode::TruncatedFrame, "y4m: truncated frame payload");
  }
  const std::size_t chroma = y4m_frame_bytes(info) - y4m_luma_bytes(info);
  if (chroma > 0) {
    in.ignore(static_cast<std::streamsize>(chroma));
    if (static_cast<std::size_t>(in.gcount()) != chroma) fail(ErrorCode::TruncatedFrame, "y4m: truncated frame payload");
  }
  return luma;
}

std::optional<GrayFrame> next_frame(std::istream& in, const StreamInfo& info, std::size_t index) {
  auto plane = next_luma_plane(in, info);
  if (!plane) return std::nullopt;
  return to_frame(*plane, index);
}

Y4mReader::Y4mReader(std::istream& in) : in_(in), info_(parse_y4m_header(in)) {}

std::optional<GrayFrame> Y4mReader::next_frame() {
  auto frame = ingest::next_frame(in_, info_, next_index_);
  if (frame) ++next_index_;
  return frame;
}

std::optional<Plane> Y4mReader::next_luma_plane() {
  auto plane = ingest::next_luma_plane(in_, info_);
  if (plane) ++next_index_;
  return plane;
}

void write_y4m_header(std::ostream& out, const StreamInfo& info) {
  out << kSignature << " W" << info.width << " H" << info.height << " F" << info.frame_rate.num << ':'
      << info.frame_rate.den << " Ip A1:1 C" << chroma_tag(info.chroma) << '\n';
}

void write_y4m_frame(std::ostream& out, const StreamInfo& info, const Plane& luma) {
  if (luma.width != info.width || luma.height != info.height) {
    throw Error(ErrorCode::InvalidArgument, "y4m: plane size does not match stream header");
  }
  out << "FRAME\n";
  out.write(reinterpret_cast<const char*>(luma.pixels.data()), static_cast<std::streamsize>(luma.pixels.size()));
  const std::size_t chroma = y4m_frame_bytes(info) - y4m_luma_bytes(info);
  if (chroma > 0) {
    std::vector<char> neutral(chroma, static_cast<char>(128));
    out.write(neutral.data(), static_cast<std::streamsize>(neutral.size()));
  }
}

std::vector<GrayFrame> read_y4m_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot open '" + path.string() + "'");
  Y4mReader reader(in);
  std::vector<GrayFrame> frames;
  while (auto frame = reader.next_frame()) frames.push_back(std::move(*frame));
  return frames;
}

std::uint8_t rgb_to_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  // 0.299/0.587/0.114 in thousandths; all terms nonnegative so +500 rounds half up.
  const unsigned weighted = 299u * r + 587u * g + 114u * b;
  return static_cast<std::uint8_t>(std::min(255u, (weighted + 500u) / 1000u));
}

Plane read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot open '" + path.string() + "'");
  auto next_field = [&]() -> std::string {
    std::string field;
    char c = 0;
    while (in.get(c)) {
      if (c == '#') {
        in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (!field.empty()) break;
      } else {
        field.push_back(c);
      }
    }
    return field;
  };
  if (next_field() != "P5") throw Error(ErrorCode::UnsupportedFormat, "'" + path.string() + "' is not a binary P5 PGM");
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(next_field());
    height = std::stoi(next_field());
    maxval = std::stoi(next_field());
  } catch (const std::exception&) {
    throw Error(ErrorCode::UnsupportedFormat, "'" + path.string() + "' has a malformed PGM header");
  }
  if (width < 1 || height < 1) throw Error(ErrorCode::UnsupportedFormat, "'" + path.string() + "' has no pixels");
  if (maxval != 255) {
    throw Error(ErrorCode::UnsupportedBitDepth, "'" + path.string() + "': only 8-bit PGM (maxval 255) is supported");
  }
  Plane plane(width, height);
  if (!read_exact(in, reinterpret_cast<char*>(plane.pixels.data()), plane.pixels.size())) {
    throw Error(ErrorCode::UnreadableFile, "'" + path.string() + "': truncated PGM payload");
  }
  return plane;
}

Plane read_png_gray(const fs::path& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "rb"), &std::fclose);
  if (!file) throw Error(ErrorCode::UnreadableFile, "cannot open '" + path.string() + "'");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::UnreadableFile, "libpng initialisation failed");
  }
  // Everything written after setjmp lives behind a pointer that setjmp never sees change.
  struct Decoded {
    std::vector<png_bytep> rows;
    std::vector<std::uint8_t> raw;
    Plane plane;
    bool bad_depth = false;
  };
  const auto state = std::make_unique<Decoded>();
  auto& [rows, raw, plane, bad_depth] = *state;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::UnreadableFile, "'" + path.string() + "' is not a readable PNG");
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  const auto width = png_get_image_width(png, info);
  const auto height = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(png);
  } else if (depth != 8) {
    bad_depth = true;
  }
  if (!bad_depth) {
    png_set_strip_alpha(png);
    png_read_update_info(png, info);
    const std::size_t channels = png_get_channels(png, info);
    const std::size_t stride = png_get_rowbytes(png, info);
    raw.resize(stride * height);
    rows.resize(height);
    for (std::size_t r = 0; r < height; ++r) rows[r] = raw.data() + r * stride;
    png_read_image(png, rows.data());
    plane = Plane(static_cast<int>(width), static_cast<int>(height));
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        const std::uint8_t* px = rows[r] + c * channels;
        plane.at(static_cast<int>(r), static_cast<int>(c)) = channels >= 3 ? rgb_to_luma(px[0], px[1], px[2]) : px[0];
      }
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (bad_depth) {
    throw Error(ErrorCode::UnsupportedBitDepth, "'" + path.string() + "': only 8-bit PNG is supported");
  }
  return std::move(plane);
}

Plane read_image_gray(const fs::path& path) {
  const auto ext = lower_ext(path);
  if (ext == ".pgm") return read_pgm(path);
  if (ext == ".png") return read_png_gray(path);
  throw Error(ErrorCode::UnsupportedFormat, "'" + path.string() + "': unsupported image type");
}

std::vector<fs::path> expand_image_pattern(const std::string& pattern) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(pattern, ec)) {
    for (const auto& entry : fs::directory_iterator(pattern, ec)) {
      if (entry.is_regular_file() && is_image_ext(entry.path())) files.push_back(entry.path());
    }
  } else if (has_glob_chars(pattern)) {
    const fs::path p(pattern);
    const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    const std::string name_glob = p.filename().string();
    if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::UnreadableFile, "no such directory '" + dir.string() + "'");
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      if (entry.is_regular_file() && fnmatch(name_glob.c_str(), entry.path().filename().c_str(), 0) == 0) {
        files.push_back(entry.path());
      }
    }
  } else if (fs::is_regular_file(pattern, ec)) {
    files.emplace_back(pattern);
  } else {
    throw Error(ErrorCode::UnreadableFile, "cannot read input '" + pattern + "'");
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<GrayFrame> load_image_sequence(const std::string& pattern) {
  std::vector<GrayFrame> frames;
  for (const auto& file : expand_image_pattern(pattern)) {
    frames.push_back(to_frame(read_image_gray(file), frames.size()));
  }
  return frames;
}

std::vector<GrayFrame> load_video(const std::string& input) {
  std::error_code ec;
  if (fs::is_directory(input, ec) || has_glob_chars(input)) return load_image_sequence(input);
  if (!fs::exists(input, ec)) throw Error(ErrorCode::UnreadableFile, "cannot read input '" + input + "'");
  if (is_image_ext(input)) return load_image_sequence(input);
  if (fs::is_regular_file(input, ec) && fs::file_size(input, ec) == 0) {
    throw Error(ErrorCode::NoFrames, "'" + input + "' is empty: no frames");
  }
  return read_y4m_file(input);
}

Plane resize_bilinear(const Plane& src, int out_width, int out_height) {
  if (src.width < 1 || src.height < 1) throw Error(ErrorCode::InvalidArgument, "resize: empty source plane");
  Plane dst(out_width, out_height);

  struct Tap {
    int lo, hi;
    double frac;
  };
  auto taps = [](int out_size, int in_size) {
    std::vector<Tap> result(out_size);
    const double scale = static_cast<double>(in_size) / out_size;
    for (int d = 0; d < out_size; ++d) {
      double s = (d + 0.5) * scale - 0.5;
      s = std::clamp(s, 0.0, static_cast<double>(in_size - 1));
      const int lo = static_cast<int>(std::floor(s));
      result[d] = {lo, std::min(lo + 1, in_size - 1), s - lo};
    }
    return result;
  };
  const auto xs = taps(out_width, src.width);
  const auto ys = taps(out_height, src.height);

  for (int r = 0; r < out_height; ++r) {
    const Tap& ty = ys[r];
    for (int c = 0; c < out_width; ++c) {
      const Tap& tx = xs[c];
      const double top = src.at(ty.lo, tx.lo) * (1.0 - tx.frac) + src.at(ty.lo, tx.hi) * tx.frac;
      const double bottom = src.at(ty.hi, tx.lo) * (1.0 - tx.frac) + src.at(ty.hi, tx.hi) * tx.frac;
      dst.at(r, c) = to_byte(top * (1.0 - ty.frac) + bottom * ty.frac);
    }
  }
  return dst;
}

GrayFrame to_frame(const Plane& plane, std::size_t index) {
  if (plane.width == kFrameSide && plane.height == kFrameSide) return GrayFrame(index, plane.pixels);
  return GrayFrame(index, resize_bilinear(plane).pixels);
}

std::array<Block, kBlockCount> partition_blocks(const GrayFrame& frame) {
  std::array<Block, kBlockCount> blocks;
  for (int br = 0; br < kBlocksPerSide; ++br) {
    for (int bc = 0; bc < kBlocksPerSide; ++bc) {
      Block& block = blocks[static_cast<std::size_t>(br) * kBlocksPerSide + bc];
      block.frame_index = frame.index();
      block.block_row = br;
      block.block_col = bc;
      for (int r = 0; r < kBlockSide; ++r) {
        const auto row = frame.pixels().subspan(static_cast<std::size_t>(br * kBlockSide + r) * kFrameSide + bc * kBlockSide,
                                                kBlockSide);
        std::copy(row.begin(), row.end(), block.pixels.begin() + static_cast<std::ptrdiff_t>(r) * kBlockSide);
      }
    }
  }
  return blocks;
}

GrayFrame assemble_blocks(std::span<const Block> blocks) {
  if (blocks.size() != static_cast<std::size_t>(kBlockCount)) {
    throw Error(ErrorCode::InvalidArgument, "assemble_blocks: expected 64 blocks");
  }
  std::vector<std::uint8_t> pixels(kFramePixels);
  for (const Block& block : blocks) {
    for (int r = 0; r < kBlockSide; ++r) {
      for (int c = 0; c < kBlockSide; ++c) {
        pixels[static_cast<std::size_t>(block.block_row * kBlockSide + r) * kFrameSide + block.block_col * kBlockSide + c] =
            block.at(r, c);
      }
    }
  }
  return GrayFrame(blocks.front().frame_index, std::move(pixels));
}

}  // namespace shotseg::ingest
