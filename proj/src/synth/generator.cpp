#include "cycleauth/synth/generator.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace cycleauth::synth {

namespace {

struct Pulse {
  double center; // fraction of the period
  double width;  // fraction of the period
  double amp;
};

struct Shape {
  double period;
  std::vector<Pulse> pulses;
  std::array<double, 3> amplitude;
  std::array<double, 3> offset;
};

Shape shape_of(Activity a) {
  switch (a) {
  case Activity::walking:
    return {55, {{0.10, 0.08, 1.0}, {0.35, 0.12, -0.5}, {0.60, 0.12, 0.5}, {0.82, 0.16, -0.3}}, {2.0, 3.0, 1.5}, {1.5, 9.2, 2.5}};
  case Activity::running:
    return {35, {{0.15, 0.10, 2.0}, {0.40, 0.12, -1.0}, {0.62, 0.14, 1.0}, {0.88, 0.08, -0.5}}, {5.0, 7.0, 3.0}, {2.0, 9.0, 3.0}};
  case Activity::standing_up:
    return {75, {{0.30, 0.18, 1.0}, {0.75, 0.06, -0.4}}, {3.0, 2.0, 2.0}, {3.0, 8.0, 4.0}};
  case Activity::sitting_down:
    return {70, {{0.40, 0.20, -1.0}, {0.20, 0.05, 0.5}}, {2.5, 2.0, 2.5}, {3.5, 8.5, 2.5}};
  case Activity::lying_down:
    return {80, {{0.50, 0.25, 1.0}, {0.15, 0.06, -0.5}}, {4.0, 3.0, 3.0}, {6.0, 5.0, 5.0}};
  case Activity::jumping:
  case Activity::unknown:
    break;
  }
  return {50, {{0.10, 0.12, 1.0}, {0.32, 0.15, -0.8}, {0.55, 0.10, 2.0}, {0.72, 0.12, -0.6}}, {4.0, 2.8, 2.0}, {2.0, 9.0, 3.0}};
}

} // namespace

double default_period(Activity a) { return shape_of(a).period; }

double ActivitySynth::period() const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return nominal_period.value_or(default_period(activity)) + period_jitter * u(rng);
}

io::Recording ActivitySynth::samples(std::size_t n) const {
  const Shape shape = shape_of(activity);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double P = nominal_period.value_or(shape.period) + period_jitter * u(rng);
  std::array<double, 3> amp{}, off{};
  for (std::size_t a = 0; a < 3; ++a) {
    amp[a] = amplitude_scale * shape.amplitude[a] * (1.0 + 0.15 * u(rng));
    off[a] = shape.offset[a] + 0.3 * u(rng);
  }

  io::Recording rec;
  rec.subject_id = "synthetic-" + std::to_string(seed);
  rec.label = activity;
  for (auto &ax : rec.axes) ax.assign(n, 0.0);

  const auto n_cycles = static_cast<long>(std::ceil(double(n) / P)) + 2;
  for (long k = -1; k < n_cycles; ++k) {
    const double onset = double(k) * P + cycle_jitter * u(rng);
    for (const auto &p : shape.pulses) {
      const double c = onset + p.center * P;
      const double w = p.width * P;
      const auto lo = static_cast<long>(std::max(0.0, std::floor(c - 6 * w)));
      const auto hi = static_cast<long>(std::min(double(n) - 1, std::ceil(c + 6 * w)));
      for (long i = lo; i <= hi; ++i) {
        const double z = (double(i) - c) / w;
        const double g = p.amp * std::exp(-0.5 * z * z);
        for (std::size_t a = 0; a < 3; ++a) rec.axes[a][std::size_t(i)] += amp[a] * g;
      }
    }
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t a = 0; a < 3; ++a)
    for (auto &v : rec.axes[a]) v += off[a] + noise * amp[a] * gauss(rng);

  if (spike_rate > 0.0) {
    std::mt19937_64 spikes(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (unit(spikes) >= spike_rate) continue;
      auto a = std::size_t(unit(spikes) * 3) % 3;
      double sign = unit(spikes) < 0.5 ? -1.0 : 1.0;
      rec.axes[a][i] += sign * amp[a] * (1.0 + unit(spikes));
    }
  }
  return rec;
}

io::Recording ActivitySynth::cycles(std::size_t cycles) const {
  return samples(static_cast<std::size_t>(std::lround(double(cycles) * period())));
}

} // namespace cycleauth::synth
