#include "fsi/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "fsi/msh_io.hpp"

namespace fsi {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for " + key + ": '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer for " + key + ": '" + v + "'");
    }
}

Vec2 to_vec2(const std::string& key, const std::string& v) {
    std::istringstream in(v);
    double x = 0, y = 0;
    char comma = ',';
    in >> x;
    if (in.peek() == ',') in >> comma;
    in >> y;
    if (!in) throw ConfigError("config: bad vector for " + key + ": '" + v + "'");
    return {x, y};
}

}  // namespace

SimulationConfig SimulationConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

SimulationConfig SimulationConfig::from_string(const std::string& text) {
    SimulationConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "geometry.kind") cfg.geometry_kind = value;
        else if (key == "geometry.r0") cfg.r0 = to_double(key, value);
        else if (key == "geometry.r") cfg.r1 = to_double(key, value);
        else if (key == "geometry.n_radial") cfg.n_radial = to_int(key, value);
        else if (key == "geometry.n_angular") cfg.n_angular = to_int(key, value);
        else if (key == "geometry.msh_path") cfg.msh_path = value;
        else if (key == "geometry.interface_radius") cfg.interface_radius = to_double(key, value);
        else if (key == "geometry.outer_radius") cfg.outer_radius = to_double(key, value);
        else if (key == "physics.rho1") cfg.physics.rho1 = to_double(key, value);
        else if (key == "physics.rho2") cfg.physics.rho2 = to_double(key, value);
        else if (key == "physics.c") cfg.physics.c = to_double(key, value);
        else if (key == "physics.lambda") cfg.physics.lambda = to_double(key, value);
        else if (key == "physics.mu") cfg.physics.mu = to_double(key, value);
        else if (key == "penalty.alpha") cfg.penalty.alpha = to_double(key, value);
        else if (key == "penalty.beta") cfg.penalty.beta = to_double(key, value);
        else if (key == "fem.degree") cfg.degree = to_int(key, value);
        else if (key == "time.gamma") cfg.gamma = to_double(key, value);
        else if (key == "time.delta") cfg.delta = to_double(key, value);
        else if (key == "time.step") {
            if (value.rfind("h/", 0) == 0) {
                cfg.step_is_ratio = true;
                cfg.step_ratio = to_double(key, value.substr(2));
            } else {
                cfg.step_is_ratio = false;
                cfg.step_value = to_double(key, value);
            }
        } else if (key == "time.final") cfg.final_time = to_double(key, value);
        else if (key == "time.lumped_mass") {
            if (value != "true" && value != "false")
                throw ConfigError("config: time.lumped_mass must be true or false");
            cfg.lumped_mass = value == "true";
        }
        else if (key == "time.cfl_guard") {
            if (value != "true" && value != "false")
                throw ConfigError("config: time.cfl_guard must be true or false");
            cfg.cfl_guard = value == "true";
        }
        else if (key == "wave.kind") cfg.wave_kind = value;
        else if (key == "wave.direction") cfg.wave_direction = to_vec2(key, value);
        else if (key == "wave.source") cfg.wave_source = to_vec2(key, value);
        else if (key == "wave.mode") cfg.wave_mode = value;
        else if (key == "output.dir") cfg.output_dir = value;
        else if (key == "output.energy_stride") cfg.energy_stride = to_int(key, value);
        else if (key == "output.snapshot_stride") cfg.snapshot_stride = to_int(key, value);
        else if (key == "study.levels") cfg.study_levels = to_int(key, value);
        else throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return cfg;
}

std::string SimulationConfig::to_string() const {
    std::ostringstream out;
    out.precision(17);
    out << "geometry.kind = " << geometry_kind << "\n";
    if (geometry_kind == "annulus") {
        out << "geometry.r0 = " << r0 << "\n";
        out << "geometry.r = " << r1 << "\n";
        out << "geometry.n_radial = " << n_radial << "\n";
        out << "geometry.n_angular = " << n_angular << "\n";
    } else {
        out << "geometry.msh_path = " << msh_path << "\n";
        if (interface_radius) out << "geometry.interface_radius = " << *interface_radius << "\n";
        if (outer_radius) out << "geometry.outer_radius = " << *outer_radius << "\n";
    }
    out << "physics.rho1 = " << physics.rho1 << "\n";
    out << "physics.rho2 = " << physics.rho2 << "\n";
    out << "physics.c = " << physics.c << "\n";
    out << "physics.lambda = " << physics.lambda << "\n";
    out << "physics.mu = " << physics.mu << "\n";
    out << "penalty.alpha = " << penalty.alpha << "\n";
    out << "penalty.beta = " << penalty.beta << "\n";
    out << "fem.degree = " << degree << "\n";
    out << "time.gamma = " << gamma << "\n";
    out << "time.delta = " << delta << "\n";
    if (step_is_ratio)
        out << "time.step = h/" << step_ratio << "\n";
    else
        out << "time.step = " << step_value << "\n";
    out << "time.final = " << final_time << "\n";
    out << "time.lumped_mass = " << (lumped_mass ? "true" : "false") << "\n";
    out << "time.cfl_guard = " << (cfl_guard ? "true" : "false") << "\n";
    out << "wave.kind = " << wave_kind << "\n";
    if (wave_kind == "plane")
        out << "wave.direction = " << wave_direction.x << " " << wave_direction.y << "\n";
    if (wave_kind == "pulse") {
        out << "wave.source = " << wave_source.x << " " << wave_source.y << "\n";
        out << "wave.mode = " << wave_mode << "\n";
    }
    out << "output.dir = " << output_dir << "\n";
    out << "output.energy_stride = " << energy_stride << "\n";
    out << "output.snapshot_stride = " << snapshot_stride << "\n";
    out << "study.levels = " << study_levels << "\n";
    return out.str();
}

void SimulationConfig::validate() const {
    if (geometry_kind != "annulus" && geometry_kind != "msh")
        throw ConfigError("config: geometry.kind must be 'annulus' or 'msh'");
    if (geometry_kind == "msh" && msh_path.empty())
        throw ConfigError("config: geometry.msh_path is required for geometry.kind = msh");
    try {
        physics.validate();
        penalty.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (degree < 1 || degree > 4) throw ConfigError("config: fem.degree must be in [1,4]");
    if (!(gamma >= 0.5) || !(delta >= 0.0))
        throw ConfigError("config: need time.gamma >= 0.5 and time.delta >= 0");
    if (step_is_ratio ? !(step_ratio > 0.0) : !(step_value > 0.0))
        throw ConfigError("config: time.step must be positive");
    if (!(final_time > 0.0)) throw ConfigError("config: time.final must be positive");
    if (wave_kind != "plane" && wave_kind != "pulse" && wave_kind != "none")
        throw ConfigError("config: wave.kind must be plane, pulse or none");
    if (wave_mode != "as-written" && wave_mode != "cylindrical")
        throw ConfigError("config: wave.mode must be 'as-written' or 'cylindrical'");
    if (energy_stride < 0 || snapshot_stride < 0)
        throw ConfigError("config: output strides must be >= 0");
}

Mesh SimulationConfig::build_mesh() const {
    if (geometry_kind == "annulus") return build_annulus_mesh(r0, r1, n_radial, n_angular);
    return import_msh(msh_path, interface_radius, outer_radius);
}

IncidentWave SimulationConfig::make_wave() const {
    if (wave_kind == "plane") return plane_wave(wave_direction);
    if (wave_kind == "pulse") {
        if (wave_mode == "cylindrical") return pulse_wave_cylindrical(wave_source, physics.c);
        return pulse_wave(wave_source);
    }
    return zero_wave();
}

std::string SimulationConfig::resolved_output_dir() const {
    if (const char* env = std::getenv("OUTPUT_DIR"); env && *env) return env;
    return output_dir;
}

bool operator==(const SimulationConfig& a, const SimulationConfig& b) {
    return a.to_string() == b.to_string();
}

}  // namespace fsi
