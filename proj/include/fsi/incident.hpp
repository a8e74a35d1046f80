#pragma once

#include <functional>

#include "fsi/types.hpp"

namespace fsi {

/// Incident field driving the transmission boundary: value, time derivative
/// and gradient at arbitrary points and times. Immutable and thread-safe.
struct IncidentWave {
    std::function<double(const Vec2&, double)> value;
    std::function<double(const Vec2&, double)> dt;
    std::function<Vec2(const Vec2&, double)> gradient;
};

/// Traveling plane wave cos(x.d) cos(t) with unit direction d.
IncidentWave plane_wave(Vec2 direction);

/// Windowed sine pulse sin(2 pi t) on 0 <= t <= 0.5, zero afterwards,
/// spatially constant.
IncidentWave pulse_wave(Vec2 source);

/// Radiating variant of the pulse: g(t - r/c) / sqrt(max(r, 1e-6)) with the
/// same window g and r the distance to the source.
IncidentWave pulse_wave_cylindrical(Vec2 source, double sound_speed);

/// Identically zero field.
IncidentWave zero_wave();

}  // namespace fsi
