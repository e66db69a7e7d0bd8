#include "doctest.h"

#include "cycleauth/errors.hpp"
#include "cycleauth/forecast/period.hpp"

#include <numbers>
#include <random>
#include <vector>

using namespace cycleauth;
using namespace cycleauth::forecast;

namespace {
std::vector<double> tone(std::size_t n, double period, double amp = 1.0) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = amp * std::sin(2 * std::numbers::pi * double(i) / period);
  return v;
}
} // namespace

TEST_CASE("single tone") {
  auto est = estimate_period(tone(500, 50), 2, 250);
  CHECK(est.period == doctest::Approx(50).epsilon(0.02));
  CHECK(est.score > 0.9);
}

TEST_CASE("dominant tone wins over a weaker one") {
  auto v = tone(500, 50);
  auto w = tone(500, 7, 0.3);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += w[i];
  // Bin arithmetic: 500/50 = bin 10 carries 1.0^2, 500/7 ~ bin 71 carries 0.3^2.
  auto est = estimate_period(v, 2, 250);
  CHECK(est.period == doctest::Approx(50).epsilon(0.02));
}

TEST_CASE("burst trains report the fundamental, not a louder harmonic") {
  std::vector<double> v(600, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    double ph = std::fmod(double(i), 48.5);
    v[i] = std::exp(-0.5 * std::pow((ph - 10) / 2.0, 2)) + 2 * std::exp(-0.5 * std::pow((ph - 30) / 2.0, 2));
  }
  auto est = estimate_period(v, 2, 300);
  CHECK(est.period == doctest::Approx(48.5).epsilon(0.005));
}

TEST_CASE("non-integer periods are resolved") {
  for (double p : {33.3, 47.9, 51.7}) CHECK(estimate_period(tone(600, p), 10, 300).period == doctest::Approx(p).epsilon(0.005));
}

TEST_CASE("white noise returns a low score, not an error") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> v(500);
  for (auto &x : v) x = n(rng);
  auto est = estimate_period(v, 2, 250);
  CHECK(est.score < 0.1);
  CHECK(est.period >= 2);
  CHECK(est.period <= 250);
}

TEST_CASE("flat input has zero score") {
  std::vector<double> v(100, 9.8);
  auto est = estimate_period(v, 2, 50);
  CHECK(est.score == 0.0);
}

TEST_CASE("bounds are validated") {
  auto v = tone(100, 20);
  CHECK_THROWS_AS(estimate_period(v, 1, 50), DataError);
  CHECK_THROWS_AS(estimate_period(v, 2, 51), DataError);
  CHECK_THROWS_AS(estimate_period(v, 40, 30), DataError);
}
