#pragma once

#include "cycleauth/activity.hpp"
#include "cycleauth/io/recording.hpp"

#include <cstdint>
#include <optional>

namespace cycleauth::synth {

/// Seeded generator of periodic triaxial activity recordings.
///
/// Each activity has a fixed cycle shape built from smooth pulses. Per seed the
/// recording draws a period within nominal +/- period_jitter and a per-axis
/// amplitude pattern; every cycle onset is displaced by up to cycle_jitter samples.
struct ActivitySynth {
  Activity activity = Activity::jumping;
  std::optional<double> nominal_period; ///< Defaults per activity (jumping: 50).
  double period_jitter = 2.0;
  double cycle_jitter = 0.5;
  double noise = 0.05;
  /// Probability per sample of a sensor singularity spike.
  double spike_rate = 0.0;
  double amplitude_scale = 1.0;
  std::uint64_t seed = 1;

  double period() const;
  io::Recording samples(std::size_t n) const;
  /// Exactly `cycles` whole cycles.
  io::Recording cycles(std::size_t cycles) const;
};

double default_period(Activity a);

} // namespace cycleauth::synth
