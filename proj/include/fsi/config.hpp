#pragma once

#include <optional>
#include <string>

#include "fsi/incident.hpp"
#include "fsi/mesh.hpp"
#include "fsi/params.hpp"

namespace fsi {

/// Invalid configuration input (maps to exit code 1 in the CLI).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Flat key=value configuration with dotted sections. '#' starts a comment.
/// The time step accepts either a number or the ratio form "h/20".
struct SimulationConfig {
    // geometry
    std::string geometry_kind = "annulus";  // annulus | msh
    double r0 = 1.0;
    double r1 = 2.0;
    int n_radial = 4;
    int n_angular = 32;
    std::string msh_path;
    std::optional<double> interface_radius;
    std::optional<double> outer_radius;

    PhysicalParams physics;
    PenaltyParams penalty;
    int degree = 1;

    double gamma = 0.5;
    double delta = 0.0;
    bool lumped_mass = true;  // stepper-side row-sum mass lumping
    bool cfl_guard = true;    // cap the step at the measured stability limit
    bool step_is_ratio = true;
    double step_ratio = 20.0;  // l = h / step_ratio
    double step_value = 0.0;   // used when step_is_ratio == false
    double final_time = 1.0;

    std::string wave_kind = "plane";  // plane | pulse | none
    Vec2 wave_direction{1.0, 0.0};
    Vec2 wave_source{2.0, 0.0};
    std::string wave_mode = "as-written";  // as-written | cylindrical

    std::string output_dir = "out";
    int energy_stride = 1;
    int snapshot_stride = 0;  // 0 disables snapshots
    int study_levels = 4;

    static SimulationConfig from_file(const std::string& path);
    static SimulationConfig from_string(const std::string& text);
    std::string to_string() const;

    void validate() const;

    /// Build the configured mesh (annulus or imported).
    Mesh build_mesh() const;
    IncidentWave make_wave() const;
    /// Time step for a mesh of the given size.
    double time_step(double mesh_size) const {
        return step_is_ratio ? mesh_size / step_ratio : step_value;
    }
    /// Output directory, honoring the OUTPUT_DIR environment override.
    std::string resolved_output_dir() const;
};

bool operator==(const SimulationConfig& a, const SimulationConfig& b);

}  // namespace fsi
