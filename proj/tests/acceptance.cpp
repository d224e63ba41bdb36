// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "shotseg/eval.hpp"
#include "shotseg/fld.hpp"
#include "shotseg/frame_repr.hpp"
#include "shotseg/ingest.hpp"
#include "shotseg/linalg.hpp"
#include "shotseg/pipeline.hpp"
#include "shotseg/synth.hpp"
#include "shotseg/texture.hpp"
#include "test_util.hpp"

using namespace shotseg;
using linalg::Matrix;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

ingest::Block block_from(const std::vector<std::uint8_t>& px) {
  ingest::Block b;
  std::copy(px.begin(), px.end(), b.pixels.begin());
  return b;
}

Outcome haralick_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  double worst_rel = 0.0, worst_f14 = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto px = oracle::random_block(rng);
    const auto got = texture::block_texture(block_from(px), texture::TextureConfig{});
    const auto want = oracle::block_features(px, 32, 8);
    for (int f = 0; f < 13; ++f) {
      const double scale = std::max(std::abs(got[f]), std::abs(want[f]));
      const double err = std::abs(got[f] - want[f]);
      o.require(oracle::close_rel(got[f], want[f], 1e-9), fmt("block %d f%d: %.17g vs %.17g", trial, f + 1, got[f], want[f]));
      if (scale > 0) worst_rel = std::max(worst_rel, err / scale);
    }
    worst_f14 = std::max(worst_f14, std::abs(got[13] - want[13]));
    o.require(std::abs(got[13] - want[13]) <= 1e-7, fmt("block %d f14: %.17g vs %.17g", trial, got[13], want[13]));
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 10.0, fmt("runtime %.2fs", elapsed));
  if (o.pass) o.detail = fmt("200 blocks, max rel err f1..f13 %.2e, max abs err f14 %.2e, %.2fs", worst_rel, worst_f14, elapsed);
  return o;
}

Outcome degenerate_textures() {
  Outcome o;
  const auto c = texture::block_texture(block_from(std::vector<std::uint8_t>(1024, 128)), texture::TextureConfig{});
  o.require(c[0] == 1.0 && c[1] == 0.0 && c[7] == 0.0 && c[8] == 0.0 && c[10] == 0.0 && c[13] == 0.0,
            "constant block features");
  const std::vector<double> p{0.5, 0.0, 0.0, 0.5};
  const auto d = texture::haralick_features(texture::Glcm::from_probabilities(2, p));
  o.require(std::abs(d[0] - 0.5) <= 1e-12, fmt("f1 = %.17g", d[0]));
  o.require(std::abs(d[2] - 1.0) <= 1e-12, fmt("f3 = %.17g", d[2]));
  o.require(std::abs(d[4] - 1.0) <= 1e-12, fmt("f5 = %.17g", d[4]));
  o.require(std::abs(d[8] - std::log(2.0)) <= 1e-12, fmt("f9 = %.17g", d[8]));
  if (o.pass) o.detail = "constant block and diagonal matrix fixtures";
  return o;
}

Outcome eigen_kmeans() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + (trial * 37) % 64;
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = g(rng);
    const auto e = linalg::jacobi_eigh(a);
    Matrix lambda(n, n);
    for (std::size_t i = 0; i < n; ++i) lambda(i, i) = e.values[i];
    const double ratio = (e.vectors * lambda * e.vectors.transposed() - a).frobenius_norm() / a.frobenius_norm();
    worst = std::max(worst, ratio);
    o.require(ratio <= 1e-9, fmt("n=%zu reconstruction %.3e", n, ratio));
  }

  for (int trial = 0; trial < 20; ++trial) {
    Matrix pts(64, 4);
    for (auto& v : pts.data()) v = g(rng);
    const auto r = linalg::kmeans(pts, 6, trial);
    for (std::size_t i = 1; i < r.inertia_trace.size(); ++i)
      o.require(r.inertia_trace[i] <= r.inertia_trace[i - 1] * (1 + 1e-12), fmt("inertia rose at iteration %zu", i));
  }

  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Matrix blobs(20, 2);
  for (std::size_t i = 0; i < 20; ++i) {
    blobs(i, 0) = (i < 10 ? 0.0 : 100.0) + u(rng);
    blobs(i, 1) = u(rng);
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = linalg::kmeans(blobs, 2, seed);
    for (std::size_t i = 0; i < 20; ++i)
      o.require((r.labels[i] == r.labels[0]) == (i < 10), fmt("two-blob split wrong for seed %llu",
                                                               static_cast<unsigned long long>(seed)));
  }
  if (o.pass) o.detail = fmt("max reconstruction %.2e; inertia monotone; two blobs split for 20 seeds", worst);
  return o;
}

Outcome spectral_recovery() {
  Outcome o;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed * 7919 + 1);
    std::uniform_real_distribution<double> within(0.5, 1.0), cross(0.0, 1e-6);
    Matrix w(64, 64);
    for (std::size_t i = 0; i < 64; ++i)
      for (std::size_t j = i + 1; j < 64; ++j) w(i, j) = w(j, i) = ((i < 32) == (j < 32)) ? within(rng) : cross(rng);
    const auto labels = repr::spectral_cluster(w, 2, seed);
    for (std::size_t i = 0; i < 64; ++i)
      o.require((labels[i] == labels[0]) == (i < 32), fmt("seed %llu mislabels node %zu",
                                                           static_cast<unsigned long long>(seed), i));
  }
  if (o.pass) o.detail = "exact 2-partition for 20 seeds";
  return o;
}

Outcome criterion_suite() {
  Outcome o;
  const std::vector<Matrix> a{Matrix{{0}}, Matrix{{2}}}, b{Matrix{{4}}, Matrix{{6}}};
  const double scalar = fld::criterion_J(a, b, fld::FldOptions{0.0, 1e-12}).j;
  o.require(std::abs(scalar - 8.0) <= 1e-6, fmt("scalar J = %.12g", scalar));

  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  auto make = [&](std::size_t n, double shift) {
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < n; ++i) {
      Matrix m(6, 14);
      for (auto& v : m.data()) v = shift + g(rng);
      out.push_back(m);
    }
    return out;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const auto c1 = make(5, 0.0), c2 = make(7, 1.0);
    const double j = fld::criterion_J(c1, c2).j;
    o.require(fld::criterion_J(c2, c1).j == j, "label swap changed J");
    Matrix t(6, 14);
    for (auto& v : t.data()) v = 10.0 * g(rng);
    auto s1 = c1, s2 = c2;
    for (auto& m : s1) m += t;
    for (auto& m : s2) m += t;
    o.require(std::abs(fld::criterion_J(s1, s2).j - j) <= 1e-9 * j, "translation changed J");
    o.require(std::abs(fld::criterion_J(c1, c1).j) <= 1e-12, "equal means gave non-zero J");
    const double single = fld::criterion_J(std::span(c1).first(1), std::span(c2).first(1)).j;
    o.require(std::isfinite(single) && single >= 0.0, "singleton classes gave non-finite J");
  }
  if (o.pass) o.detail = fmt("scalar J = %.9f; swap, translation, equal-mean, singleton checks", scalar);
  return o;
}

Outcome table_arithmetic() {
  Outcome o;
  struct Row {
    std::size_t d, md, fa;
    double p, r, f;
  };
  const Row rows[] = {{3, 2, 0, 100, 60, 75},
                      {3, 0, 0, 100, 100, 100},
                      {5, 1, 2, 71.42, 83.33, 76.91},
                      {4, 2, 3, 57.14, 66.66, 61.53}};
  double sp = 0, sr = 0, sf = 0;
  for (const auto& row : rows) {
    const auto s = eval::score({row.d, row.md, row.fa});
    o.require(std::abs(s.precision - row.p) <= 0.02 && std::abs(s.recall - row.r) <= 0.02 &&
                  std::abs(s.f_measure - row.f) <= 0.02,
              fmt("row D=%zu: %.4f/%.4f/%.4f", row.d, s.precision, s.recall, s.f_measure));
    sp += s.precision;
    sr += s.recall;
    sf += s.f_measure;
  }
  sp /= 4;
  sr /= 4;
  sf /= 4;
  o.require(std::abs(sp - 82.14) <= 0.01 && std::abs(sr - 77.4975) <= 0.01 && std::abs(sf - 78.36) <= 0.01,
            fmt("averages %.4f/%.4f/%.4f", sp, sr, sf));
  if (o.pass) o.detail = fmt("four rows within 0.02; averages %.4f / %.4f / %.4f", sp, sr, sf);
  return o;
}

Outcome end_to_end(const std::filesystem::path& dir) {
  Outcome o;
  const auto t0 = Clock::now();
  const auto spec = synth::parse_spec(R"({"shots":[
      {"generator":"constant","value":32,"length":50},
      {"generator":"checkerboard","period":8,"length":50},
      {"generator":"noise","seed":7,"length":50}]})");
  const auto path = dir / "three.y4m";
  const auto truth = synth::write_video(spec, path);
  const auto frames = ingest::load_video(path.string());
  const auto detection = detect_shots(frames, Config{});
  const auto found = detection.transitions();
  const auto report = eval::score(eval::match_boundaries(found, truth.transitions, 2));
  const double elapsed = seconds_since(t0);
  std::string list;
  for (auto t : found) list += (list.empty() ? "" : ",") + std::to_string(t);
  o.require(report.precision == 100.0 && report.recall == 100.0 && report.f_measure == 100.0,
            "transitions {" + list + "} " + fmt("P/R/F %.2f/%.2f/%.2f", report.precision, report.recall,
                                                 report.f_measure));
  o.require(elapsed < 60.0, fmt("wall time %.1fs", elapsed));

  const auto constant = synth::parse_spec(R"([{"generator":"constant","value":64,"length":100}])");
  const auto cpath = dir / "constant.y4m";
  synth::write_video(constant, cpath);
  const auto single = detect_shots(ingest::load_video(cpath.string()), Config{});
  o.require(single.segmentation.segments.size() == 1,
            fmt("constant video gave %zu shots", single.segmentation.segments.size()));
  if (o.pass) o.detail = "transitions {" + list + "}, P=R=F=100, " + fmt("%.1fs; constant video 1 shot", elapsed);
  return o;
}

int run_cli(const std::string& args, std::string& out) {
  const std::string cmd = std::string("'") + SHOTSEG_CLI_PATH + "' " + args;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  char buf[4096];
  std::size_t n = 0;
  out.clear();
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int raw = pclose(pipe);
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Outcome determinism(const std::filesystem::path& dir) {
  Outcome o;
  const auto spec = dir / "det_spec.json";
  test_util::spit(spec, R"({"shots":[{"generator":"checkerboard","period":4,"length":20},
      {"generator":"noise","seed":3,"length":20},{"generator":"gradient","length":20}]})");
  const auto video = dir / "det.y4m";
  std::string ignored, first, second, serial;
  o.require(run_cli("synth -i '" + spec.string() + "' -o '" + video.string() + "'", ignored) == 0, "synth failed");
  o.require(run_cli("detect -q -i '" + video.string() + "'", first) == 0, "first detect failed");
  o.require(run_cli("detect -q -i '" + video.string() + "'", second) == 0, "second detect failed");
  o.require(run_cli("detect -q --threads 1 -i '" + video.string() + "'", serial) == 0, "serial detect failed");
  o.require(!first.empty() && first == second, "repeated runs differ");
  o.require(first == serial, "thread count changed the output");
  if (o.pass) o.detail = fmt("%zu-byte shots JSON identical across 3 runs (incl. 1 thread)", first.size());
  return o;
}

Outcome y4m_round_trip(const std::filesystem::path& dir) {
  Outcome o;
  const auto spec = synth::parse_spec(R"({"width":256,"height":256,"shots":[
      {"generator":"constant","value":17,"length":4},{"generator":"checkerboard","period":5,"length":3},
      {"generator":"noise","seed":11,"tile":0,"length":3},{"generator":"gradient","length":2}]})");
  const auto path = dir / "rt.y4m";
  synth::write_video(spec, path);
  const auto frames = ingest::load_video(path.string());
  std::size_t expected_count = 0;
  for (const auto& s : spec.shots) expected_count += s.length;
  o.require(frames.size() == expected_count, fmt("frame count %zu vs %zu", frames.size(), expected_count));
  std::size_t f = 0;
  for (const auto& shot : spec.shots) {
    const auto plane = synth::render(shot, spec.width, spec.height);
    for (std::size_t i = 0; i < shot.length && f < frames.size(); ++i, ++f)
      o.require(std::equal(plane.pixels.begin(), plane.pixels.end(), frames[f].pixels().begin()),
                fmt("frame %zu differs", f));
  }
  if (o.pass) o.detail = fmt("%zu frames bit-identical", frames.size());
  return o;
}

}  // namespace

int main() {
  test_util::TempDir dir;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Haralick oracle equivalence", haralick_oracle},
      {"Degenerate texture fixtures", degenerate_textures},
      {"Eigen / k-means suite", eigen_kmeans},
      {"Spectral clustering recovery", spectral_recovery},
      {"Criterion J suite", criterion_suite},
      {"Results-table arithmetic", table_arithmetic},
      {"End-to-end synthetic detection", [&] { return end_to_end(dir.path); }},
      {"Detect determinism", [&] { return determinism(dir.path); }},
      {"Y4M round trip", [&] { return y4m_round_trip(dir.path); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
