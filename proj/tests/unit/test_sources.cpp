#include <cmath>
#include <functional>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "certifem/error.hpp"
#include "certifem/sources.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace certifem;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Polar tensor Gauss over the unit disk, independent of the library rules.
double disk_integral(const std::function<double(double, double)>& g) {
  const auto [x, w] = oracle::golub_welsch(30);
  double sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = 0.5 * (x[i] + 1);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double phi = kPi * (x[j] + 1);
      sum += 0.5 * w[i] * kPi * w[j] * r * g(r * std::cos(phi), r * std::sin(phi));
    }
  }
  return sum;
}

}  // namespace

TEST_CASE("domain specs") {
  CHECK(parse_domain_spec("disk:2").diameter() == Approx(4.0));
  CHECK(parse_domain_spec("disk").diameter() == Approx(2.0));
  CHECK(parse_domain_spec("ball:1").dim() == 3);
  CHECK(parse_domain_spec("square").measure() == Approx(1.0));
  for (const char* bad : {"disk:-1", "disk:x", "torus", "square:2", "polygon:"}) {
    CHECK_THROWS_AS(parse_domain_spec(bad), Error);
  }
  const auto path = std::filesystem::temp_directory_path() / "certifem_dom.json";
  {
    std::ofstream f(path);
    f << R"({"dim":2,"vertices":[[0,0],[2,0],[0,1]]})";
  }
  CHECK(parse_domain_spec("polygon:" + path.string()).measure() == Approx(1.0));
  std::filesystem::remove(path);
}

TEST_CASE("constant source norms") {
  const auto disk = ConvexDomain::disk(1.0);
  const auto f = parse_source_spec("const:3", disk);
  CHECK(f.sup_norm == 3.0);
  CHECK(*f.l2_norm == Approx(3 * std::sqrt(kPi)));
  CHECK(*f.h2_seminorm == 0.0);
  CHECK_THROWS_AS(parse_source_spec("const:", disk), Error);
}

TEST_CASE("sine source on the square") {
  const auto sq = ConvexDomain::unit_square();
  const auto f = parse_source_spec("sinsin", sq);
  CHECK(f.sup_norm == Approx(2 * kPi * kPi));
  CHECK(*f.l2_norm == Approx(kPi * kPi));
  CHECK(*f.h2_seminorm == Approx(2 * std::pow(kPi, 4)));
  CHECK(f.evaluate({0.5, 0.5, 0}) == Approx(2 * kPi * kPi));
  CHECK_THROWS_AS(sinsin_source(ConvexDomain::disk(1.0)), Error);
}

TEST_CASE("quadratic source norms against quadrature") {
  const auto disk = ConvexDomain::disk(1.0);
  const double a = 0.5, b1 = -1.0, b2 = 0.25, q = 1.5;
  const auto f = parse_source_spec("poly:0.5,-1,0.25,1.5", disk);
  const double l2 = std::sqrt(disk_integral([&](double x, double y) {
    const double v = a + b1 * x + b2 * y + q * (x * x + y * y);
    return v * v;
  }));
  CHECK(*f.l2_norm == Approx(l2).epsilon(1e-12));
  CHECK(*f.h2_seminorm == Approx(2 * q * std::sqrt(2 * kPi)).epsilon(1e-14));

  // Sampled sup norms stay below the reported bounds.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  double mx = 0, gmx = 0;
  for (int i = 0; i < 20000; ++i) {
    const Point x{u(rng), u(rng), 0};
    if (norm(x) > 1) continue;
    mx = std::max(mx, std::abs(f.evaluate(x)));
    gmx = std::max(gmx, norm(f.gradient(x)));
  }
  CHECK(mx <= f.sup_norm);
  CHECK(gmx <= *f.grad_sup_norm);
  CHECK(mx >= 0.95 * f.sup_norm);

  CHECK_THROWS_AS(parse_source_spec("poly:1,2,3", disk), Error);
  CHECK_THROWS_AS(parse_source_spec("poly:1,2,3,4,5", disk), Error);
  CHECK_THROWS_AS(parse_source_spec("cubic", disk), Error);
}

TEST_CASE("quadratic source on a ball and a polygon") {
  const auto ball = ConvexDomain::ball(1.0);
  const auto f = quadratic_source({0.0, 0.0, 0.0, 0.0, 1.0}, ball);
  // int |x|^4 over the unit ball = 4 pi / 7.
  CHECK(*f.l2_norm == Approx(std::sqrt(4 * kPi / 7)).epsilon(1e-12));
  CHECK(f.sup_norm >= 1.0);
  const auto sq = ConvexDomain::unit_square();
  const auto g = quadratic_source({0.0, 1.0, 0.0, 0.0}, sq);
  CHECK(*g.l2_norm == Approx(std::sqrt(1.0 / 3)).epsilon(1e-11));
  CHECK(g.sup_norm >= 1.0);
}
