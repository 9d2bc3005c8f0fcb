#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lfd/collision_fields.hpp"
#include "lfd/distribution.hpp"

namespace lfd {

enum class Scheme { euler, rk2 };

struct InitialConditionSpec {
    enum class Kind { equilibrium, saturated, two_bump, from_checkpoint };
    Kind kind = Kind::equilibrium;
    double separation = 2.0;
    double width = 0.7;
    std::string checkpoint_path{};
    // Target moments of the corrected initial datum.
    double rho = 1.0;
    Vec3 u{0.0, 0.0, 0.0};
    double theta = 1.0;
};

struct SimulationConfig {
    double gamma = -1.0;
    double epsilon = 0.0;
    double R = 6.0;
    int N = 25;
    std::optional<double> nu{};  // nullopt = "auto" = grid spacing h
    double cfl = 0.4;
    Scheme scheme = Scheme::rk2;
    double t_final = 1.0;
    int diag_cadence = 20;       // steps between diagnostics rows
    int snapshot_cadence = 0;    // steps between snapshots; 0 = first and last
    std::vector<double> s_list{0, 2, 3, 4};
    std::vector<double> eta_list{0, 1, 2};
    std::vector<double> p_list{2};
    std::optional<std::pair<double, double>> exp_aq{};
    InitialConditionSpec initial{};
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool clipping = false;
    ConvBackend backend = ConvBackend::fft;
    int threads = 0;             // 0 = auto
    int trials = 100;            // verify trials per oracle
    bool collisions = true;      // off isolates the nu Laplacian (energy law)
    bool pair_diagnostics = true;

    double nu_value(double h) const { return nu ? *nu : h; }
};

/// key = value text with optional [section] headers; sections prefix the key
/// with "section.". Unknown keys raise ValidationError naming the key.
SimulationConfig parse_config(const std::string& text);
SimulationConfig load_config(const std::string& path);

/// LFD_<UPPERCASE KEY> environment variables override parsed values.
void apply_env_overrides(SimulationConfig& config);

/// Builds the configured initial datum, moment-corrected to the spec's target
/// (rho, u, theta) by affine adjustment inside the admissible class.
Distribution initial_condition(const InitialConditionSpec& spec,
                               const VelocityGrid& grid, double epsilon);

} // namespace lfd
