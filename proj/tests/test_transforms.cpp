#include "saleval/io.hpp"
#include "saleval/rng.hpp"
#include "saleval/transforms.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace saleval;

namespace {

SaliencyMap grid(int w, int h, std::initializer_list<double> v) {
  return SaliencyMap::from_row_major(w, h, std::span<const double>(v.begin(), v.size()));
}

SaliencyMap random_map(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  SaliencyMap::Grid g(h, w);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = rng.uniform();
  return SaliencyMap(g);
}

// Smooth test field: a few anisotropic bumps.
SaliencyMap smooth_map(int w, int h) {
  SaliencyMap::Grid g(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double u = (x + 0.5) / w, v = (y + 0.5) / h;
      g(y, x) = std::exp(-40 * ((u - 0.3) * (u - 0.3) + (v - 0.4) * (v - 0.4))) +
                0.6 * std::exp(-25 * ((u - 0.75) * (u - 0.75) + 2 * (v - 0.7) * (v - 0.7)));
    }
  return SaliencyMap(g);
}

std::filesystem::path temp_dir(const char* name) {
  auto p = std::filesystem::temp_directory_path() / ("saleval_test_" + std::string(name));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("map construction rejects bad values") {
  SaliencyMap::Grid g(1, 2);
  g << 0.5, -0.1;
  CHECK_THROWS_AS(SaliencyMap{g}, std::invalid_argument);
  g << 0.5, std::nan("");
  CHECK_THROWS_AS(SaliencyMap{g}, std::invalid_argument);
  CHECK_THROWS_AS(SaliencyMap(SaliencyMap::Grid(0, 3)), std::invalid_argument);
  const SaliencyMap m = grid(2, 1, {0.25, 1.0});
  CHECK(m(1, 0) == 1.0);
  CHECK(m.at({0, 0}) == 0.25);
}

TEST_CASE("normalize_map") {
  CHECK(normalize_map(grid(2, 2, {0, 2, 4, 8})) == grid(2, 2, {0, 0.25, 0.5, 1}));
  CHECK(normalize_map(SaliencyMap::constant(3, 3, 0.0)) == SaliencyMap::constant(3, 3, 0.0));

  const SaliencyMap r = random_map(16, 16, 7);
  Eigen::Index r0, c0, r1, c1;
  r.values().maxCoeff(&r0, &c0);
  const SaliencyMap n = normalize_map(r);
  n.values().maxCoeff(&r1, &c1);
  CHECK(r0 == r1);
  CHECK(c0 == c1);
  CHECK(n.max() == 1.0);
  CHECK(normalize_map(n) == n);  // idempotent, exactly
}

TEST_CASE("resize_map") {
  const SaliencyMap m = grid(2, 2, {0.1, 0.2, 0.3, 0.4});
  CHECK(resize_map(m, 2, 2) == m);
  const SaliencyMap c = resize_map(SaliencyMap::constant(4, 4, 0.37), 8, 8);
  CHECK(c.width() == 8);
  CHECK(c.height() == 8);
  CHECK((c.values() - 0.37).abs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(resize_map(m, 0, 3), std::invalid_argument);

  SUBCASE("matches an independent bilinear sampler") {
    const SaliencyMap src = random_map(7, 5, 3);
    const SaliencyMap out = resize_map(src, 17, 11);
    const auto sample = [&](double sx, double sy) {
      sx = std::clamp(sx, 0.0, 6.0);
      sy = std::clamp(sy, 0.0, 4.0);
      const int x0 = static_cast<int>(sx), y0 = static_cast<int>(sy);
      const int x1 = std::min(x0 + 1, 6), y1 = std::min(y0 + 1, 4);
      const double fx = sx - x0, fy = sy - y0;
      return (1 - fy) * ((1 - fx) * src(x0, y0) + fx * src(x1, y0)) + fy * ((1 - fx) * src(x0, y1) + fx * src(x1, y1));
    };
    double worst = 0;
    for (int y = 0; y < 11; ++y)
      for (int x = 0; x < 17; ++x)
        worst = std::max(worst, std::abs(out(x, y) - sample((x + 0.5) * 7 / 17.0 - 0.5, (y + 0.5) * 5 / 11.0 - 0.5)));
    CHECK(worst < 1e-12);
  }

  SUBCASE("64x48 -> 768x512 -> 64x48 round trip") {
    // Measured mean absolute difference on this field: 9.6e-5 of the peak.
    const SaliencyMap small = normalize_map(smooth_map(64, 48));
    const SaliencyMap back = resize_map(resize_map(small, 768, 512), 64, 48);
    const double mad = (back.values() - small.values()).abs().mean();
    MESSAGE("round-trip MAD = " << mad);
    CHECK(mad < 1.2e-4);
  }
}

TEST_CASE("gaussian_blur") {
  const SaliencyMap r = random_map(9, 6, 11);
  CHECK(gaussian_blur(r, 0.0) == r);
  CHECK_THROWS_AS(gaussian_blur(r, -1.0), std::invalid_argument);

  const SaliencyMap c = gaussian_blur(SaliencyMap::constant(20, 13, 0.6), 3.0);
  CHECK((c.values() - 0.6).abs().maxCoeff() < 1e-12);

  SUBCASE("impulse matches a direct 2-D Gaussian") {
    SaliencyMap::Grid g = SaliencyMap::Grid::Zero(33, 33);
    g(16, 16) = 1.0;
    const SaliencyMap out = gaussian_blur(SaliencyMap(g), 2.0);
    // Direct evaluation of the sampled, truncated (radius 6) kernel.
    double z = 0;
    for (int k = -6; k <= 6; ++k) z += std::exp(-k * k / 8.0);
    double worst = 0;
    for (int y = 0; y < 33; ++y)
      for (int x = 0; x < 33; ++x) {
        const int dx = x - 16, dy = y - 16;
        const double expected =
            (std::abs(dx) <= 6 && std::abs(dy) <= 6) ? std::exp(-(dx * dx + dy * dy) / 8.0) / (z * z) : 0.0;
        worst = std::max(worst, std::abs(out(x, y) - expected));
      }
    CHECK(worst < 1e-9);
    CHECK(out.values().sum() == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("interior impulses keep their mass") {
    SaliencyMap::Grid g = SaliencyMap::Grid::Zero(60, 70);
    g(25, 30) = 2.0;
    g(35, 40) = 0.5;
    for (double sigma : {0.7, 1.5, 3.0}) {
      const SaliencyMap out = gaussian_blur(SaliencyMap(g), sigma);
      CHECK(std::abs(out.values().sum() - 2.5) / 2.5 < 1e-9);
    }
  }

  SUBCASE("float maps") {
    BasicSaliencyMap<float>::Grid g = BasicSaliencyMap<float>::Grid::Constant(8, 8, 0.25f);
    const auto out = gaussian_blur(BasicSaliencyMap<float>(g), 1.0);
    CHECK((out.values() - 0.25f).abs().maxCoeff() < 1e-6f);
  }
}

TEST_CASE("invert_map") {
  CHECK(invert_map(grid(2, 1, {0, 1})) == grid(2, 1, {1, 0}));
  const SaliencyMap n = grid(3, 1, {0.0, 0.5, 1.0});
  CHECK(invert_map(invert_map(n)) == n);
  CHECK_THROWS_AS(invert_map(grid(1, 1, {2.0})), std::invalid_argument);
}

TEST_CASE("centered_gaussian_baseline") {
  const SaliencyMap b = centered_gaussian_baseline(101, 101, 0.25);
  Eigen::Index r, c;
  CHECK(b.values().maxCoeff(&r, &c) == 1.0);
  CHECK(r == 50);
  CHECK(c == 50);
  const SaliencyMap e = centered_gaussian_baseline(40, 30, 0.2);
  CHECK((e.values() - e.values().rowwise().reverse()).abs().maxCoeff() < 1e-15);
  CHECK((e.values() - e.values().colwise().reverse()).abs().maxCoeff() < 1e-15);
}

TEST_CASE("density_from_fixations") {
  FixationSet one{"a", {{10, 10}}, {32, 24}};
  const FixationDensityMap d = density_from_fixations(one, 8.0);
  Eigen::Index r, c;
  d.map.values().maxCoeff(&r, &c);
  CHECK(c == 10);
  CHECK(r == 10);
  CHECK(std::abs(d.map(14, 10) - 0.5) < 1e-6);  // half-FWHM away
  CHECK(std::abs(d.map(10, 6) - 0.5) < 1e-6);

  FixationSet twice{"a", {{10, 10}, {10, 10}}, {32, 24}};
  CHECK(density_from_fixations(twice, 8.0).map == d.map);

  FixationSet many{"a", {{3, 4}, {20, 7}, {15, 15}, {30, 1}}, {32, 24}};
  FixationSet shuffled = many;
  std::reverse(shuffled.points.begin(), shuffled.points.end());
  CHECK(density_from_fixations(many, 6.0).map == density_from_fixations(shuffled, 6.0).map);

  CHECK_THROWS_AS(density_from_fixations(FixationSet{"e", {}, {4, 4}}, 8.0), std::invalid_argument);
  CHECK_THROWS_AS(density_from_fixations(FixationSet{"o", {{9, 0}}, {4, 4}}, 8.0), std::invalid_argument);
}

TEST_CASE("pgm and fixation files round-trip") {
  const auto dir = temp_dir("io");
  const SaliencyMap m = normalize_map(random_map(13, 7, 5));
  write_pgm(dir / "m.pgm", m);
  const SaliencyMap back = read_pgm(dir / "m.pgm");
  CHECK(back.width() == 13);
  CHECK(back.height() == 7);
  CHECK((back.values() - m.values()).abs().maxCoeff() <= 0.5 / 65535 + 1e-15);

  {
    std::ofstream f(dir / "ascii.pgm");
    f << "P2\n# comment\n3 2\n255\n0 51 255\n102 0 255\n";
  }
  const SaliencyMap a = read_pgm(dir / "ascii.pgm");
  CHECK(a(1, 0) == doctest::Approx(0.2));
  CHECK(a(0, 1) == doctest::Approx(0.4));
  CHECK_THROWS_AS(read_pgm(dir / "missing.pgm"), IoError);

  const FixationSet fs{"img", {{1, 2}, {0, 0}, {5, 3}}, {6, 4}};
  write_fixations(dir / "f.txt", fs);
  const FixationSet rf = read_fixations(dir / "f.txt", "img");
  CHECK(rf.points == fs.points);
  CHECK(rf.frame == fs.frame);
  {
    std::ofstream f(dir / "bad.txt");
    f << "10,10\n3,4\n10,2\n";
  }
  CHECK_THROWS(read_fixations(dir / "bad.txt", "img"));
}
