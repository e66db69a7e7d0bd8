#include "doctest.h"

#include "cycleauth/forecast/events.hpp"
#include "cycleauth/forecast/seasonality.hpp"

#include <random>

using namespace cycleauth::forecast;

namespace {
SeasonalityParams season(double period, std::initializer_list<double> coeffs) {
  SeasonalityParams sp;
  sp.period = period;
  sp.order = int(coeffs.size() / 2);
  sp.coeffs = Eigen::VectorXd(Eigen::Index(coeffs.size()));
  Eigen::Index i = 0;
  for (double c : coeffs) sp.coeffs[i++] = c;
  return sp;
}
} // namespace

TEST_CASE("seasonality examples") {
  auto zero = season(7, {0, 0, 0, 0});
  for (double t : {0.0, 1.3, 100.0}) CHECK(eval_seasonality(zero, t) == 0.0);
  CHECK(eval_seasonality(season(10, {1, 0}), 0.0) == 1.0);
  // a = (0.5, -0.3), b = (1.2, 0.7), P = 50, t = 13; summed term by term at 40 digits.
  CHECK(eval_seasonality(season(50, {0.5, 1.2, -0.3, 0.7}), 13.0) == doctest::Approx(1.3761379612485996).epsilon(1e-14));
}

TEST_CASE("scalar template accepts other floating types") {
  auto sp = season(50, {0.5, 1.2, -0.3, 0.7});
  long double v = eval_seasonality<long double>(sp, 13.0L);
  CHECK(double(v) == doctest::Approx(1.3761379612485996).epsilon(1e-14));
}

TEST_CASE("sin/cos form equals the complex form") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0, 1);
  for (int c = 0; c < 200; ++c) {
    SeasonalityParams sp;
    sp.order = 1 + c % 8;
    sp.period = 2 + std::abs(n(rng)) * 40;
    sp.coeffs = Eigen::VectorXd(2 * sp.order);
    for (auto &x : sp.coeffs) x = n(rng);
    auto cn = complex_coefficients(sp);
    double t = n(rng) * 100;
    auto z = eval_seasonality_complex(sp.period, cn, t);
    CHECK(std::abs(z.real() - eval_seasonality(sp, t)) < 1e-12);
    CHECK(std::abs(z.imag()) < 1e-12);
  }
}

TEST_CASE("fourier feature rows reproduce evaluation") {
  auto sp = season(50, {0.5, 1.2, -0.3, 0.7});
  Eigen::RowVectorXd row(4);
  fourier_features(sp.period, sp.order, 13.0, row);
  CHECK(row.dot(sp.coeffs) == doctest::Approx(eval_seasonality(sp, 13.0)).epsilon(1e-15));
}

TEST_CASE("event indicator examples") {
  EventTerm none;
  CHECK(eval_events(none, 3.0) == 0.0);
  EventTerm one{{{10, 20, 3}}};
  CHECK(eval_events(one, 15.0) == 3.0);
  EventTerm two{{{0, 5, 1}, {10, 20, 3}}};
  CHECK(eval_events(two, 7.0) == 0.0);
  CHECK(eval_events(two, 5.0) == 1.0);
}

TEST_CASE("event term validation") {
  CHECK_NOTHROW((EventTerm{{{0, 5, 1}, {6, 9, 2}}}).validate());
  CHECK_THROWS((EventTerm{{{0, 5, 1}, {5, 9, 2}}}).validate());
  CHECK_THROWS((EventTerm{{{3, 2, 1}}}).validate());
}
