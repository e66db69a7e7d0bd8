#include "doctest.h"

#include "cycleauth/forecast/model.hpp"

#include <random>

using namespace cycleauth;
using namespace cycleauth::forecast;

namespace {

ForecastModel flat(double sigma, double delta_scale = 0.0) {
  ForecastModel m;
  m.trend = make_trend<double>(TrendKind::linear, 1.0, 0.0, 0.0, Eigen::VectorXd::LinSpaced(5, 10, 50),
                               Eigen::VectorXd::Zero(5));
  m.noise_sigma = sigma;
  m.delta_scale = delta_scale;
  m.t_min = 0;
  m.t_max = 99;
  return m;
}

} // namespace

TEST_CASE("no uncertainty collapses the band") {
  ForecastModel m = flat(0.0);
  SeasonalityParams sp;
  sp.period = 10;
  sp.order = 1;
  sp.coeffs = Eigen::Vector2d(1.0, 0.5);
  m.seasonalities.push_back(sp);
  auto band = predict(m, 30);
  REQUIRE(band.size() == 30);
  CHECK(band.t.front() == 100.0);
  for (std::size_t i = 0; i < band.size(); ++i) {
    CHECK(band.lower[i] == band.yhat[i]);
    CHECK(band.upper[i] == band.yhat[i]);
    CHECK(band.yhat[i] == eval_model(m, band.t[i]));
  }
}

TEST_CASE("gaussian half width matches the normal quantile") {
  auto band = predict(flat(1.0), 200, {0.8, 2000, 3});
  double half = 0.0;
  for (std::size_t i = 0; i < band.size(); ++i) half += 0.5 * (band.upper[i] - band.lower[i]);
  half /= double(band.size());
  CHECK(half == doctest::Approx(1.2816).epsilon(0.15));
}

TEST_CASE("bands are ordered, nested by level and reproducible") {
  auto m = flat(0.5, 0.02);
  auto narrow = predict(m, 100, {0.5, 500, 17});
  auto wide = predict(m, 100, {0.9, 500, 17});
  auto again = predict(m, 100, {0.5, 500, 17});
  auto other = predict(m, 100, {0.5, 500, 18});
  for (std::size_t i = 0; i < narrow.size(); ++i) {
    CHECK(narrow.lower[i] <= narrow.yhat[i]);
    CHECK(narrow.yhat[i] <= narrow.upper[i]);
    CHECK(wide.lower[i] <= narrow.lower[i]);
    CHECK(wide.upper[i] >= narrow.upper[i]);
  }
  CHECK(narrow.lower == again.lower);
  CHECK(narrow.upper == again.upper);
  CHECK(narrow.lower != other.lower);
}

TEST_CASE("trend uncertainty grows with the horizon") {
  auto band = predict(flat(0.0, 0.05), 300, {0.8, 1000, 1});
  double early = band.upper[10] - band.lower[10];
  double late = band.upper[299] - band.lower[299];
  CHECK(late > early);
  CHECK(late > 0.0);
}

TEST_CASE("prediction contract errors") {
  auto m = flat(1.0);
  CHECK_THROWS_AS(predict(m, 10, {0.8, 19, 1}), InsufficientSimulations);
  CHECK_NOTHROW(predict(m, 10, {0.8, 20, 1}));
  CHECK_THROWS_AS(predict(m, 0), DataError);
  CHECK_THROWS_AS(predict(m, 5, {1.0, 100, 1}), DataError);
  std::vector<double> backwards{5.0, 4.0};
  CHECK_THROWS_AS(predict_at(m, backwards), DataError);
}

TEST_CASE("empirical coverage of a fitted noise model") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0, 1);
  Eigen::VectorXd y(1000);
  for (auto &v : y) v = n(rng);
  FitConfig cfg;
  cfg.n_changepoints = 0;
  cfg.detect_singularities = false;
  auto m = fit(TimeSeries::indexed(y), cfg);
  auto band = predict(m, 1000, {0.8, 2000, 5});
  int inside = 0;
  for (std::size_t i = 0; i < band.size(); ++i) {
    double v = n(rng);
    inside += band.lower[i] <= v && v <= band.upper[i];
  }
  CHECK(inside / 1000.0 >= 0.70);
  CHECK(inside / 1000.0 <= 0.90);
}
