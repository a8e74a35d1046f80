#include "fsi/incident.hpp"

#include <cmath>
#include <numbers>

namespace fsi {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEpsRadius = 1e-6;

double window_sine(double t) { return (t >= 0.0 && t <= 0.5) ? std::sin(kTwoPi * t) : 0.0; }
double window_sine_dt(double t) {
    return (t >= 0.0 && t <= 0.5) ? kTwoPi * std::cos(kTwoPi * t) : 0.0;
}
}  // namespace

IncidentWave plane_wave(Vec2 direction) {
    if (direction.norm() == 0.0) throw Error("plane_wave: direction must be nonzero");
    const Vec2 d = direction.normalized();
    IncidentWave w;
    w.value = [d](const Vec2& x, double t) { return std::cos(x.dot(d)) * std::cos(t); };
    w.dt = [d](const Vec2& x, double t) { return -std::cos(x.dot(d)) * std::sin(t); };
    w.gradient = [d](const Vec2& x, double t) {
        return d * (-std::sin(x.dot(d)) * std::cos(t));
    };
    return w;
}

IncidentWave pulse_wave(Vec2 /*source*/) {
    IncidentWave w;
    w.value = [](const Vec2&, double t) { return window_sine(t); };
    w.dt = [](const Vec2&, double t) { return window_sine_dt(t); };
    w.gradient = [](const Vec2&, double) { return Vec2{0.0, 0.0}; };
    return w;
}

IncidentWave pulse_wave_cylindrical(Vec2 source, double sound_speed) {
    const double c = sound_speed;
    IncidentWave w;
    w.value = [source, c](const Vec2& x, double t) {
        const double r = std::max((x - source).norm(), kEpsRadius);
        return window_sine(t - r / c) / std::sqrt(r);
    };
    w.dt = [source, c](const Vec2& x, double t) {
        const double r = std::max((x - source).norm(), kEpsRadius);
        return window_sine_dt(t - r / c) / std::sqrt(r);
    };
    w.gradient = [source, c](const Vec2& x, double t) {
        const double rtrue = (x - source).norm();
        const double r = std::max(rtrue, kEpsRadius);
        if (rtrue < kEpsRadius) return Vec2{0.0, 0.0};
        const Vec2 rhat = (x - source) * (1.0 / rtrue);
        const double tau = t - r / c;
        const double radial =
            -window_sine_dt(tau) / (c * std::sqrt(r)) - 0.5 * window_sine(tau) / std::pow(r, 1.5);
        return rhat * radial;
    };
    return w;
}

IncidentWave zero_wave() {
    IncidentWave w;
    w.value = [](const Vec2&, double) { return 0.0; };
    w.dt = [](const Vec2&, double) { return 0.0; };
    w.gradient = [](const Vec2&, double) { return Vec2{0.0, 0.0}; };
    return w;
}

}  // namespace fsi
