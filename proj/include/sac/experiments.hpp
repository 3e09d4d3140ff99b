#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sac/config.hpp"

namespace sac {

// Resolved experiment parameters; defaults are the desk-scale protocol.
struct ExpParams {
  std::string name;
  std::string out_dir = ".";
  std::uint64_t master_seed = 42;
  std::vector<double> eps_list{0.04, 0.02, 0.01};
  int seeds = 5;
  int grid_n = 256;
  std::string noise_kind = "mn2";  // off | mn1 | mn2
  double gamma = 0.5;              // gamma_2 for mn2, gamma_1 for mn1
  std::string initial = "circle";  // circle | ellipse | planar | custom
  std::string custom_csv;
  double r0 = 0.3;
  double width0 = 0.1;
  double ellipse_ax = 0.32;
  double ellipse_ay = 0.22;
  double eta = 0.1;
  double t_end = 0.03;
  double stop_threshold = 10.0;  // N of the stopping monitor
  bool zero_at_origin = false;
  // mn1 surrogate base
  double ou_rate = 1.0;
  double ou_std = 0.5;
  double clip = 1.0;
  double base_width = 0.05;
  // profile
  double rho_time = 2.0;
  // noise_bounds
  double noise_T = 20.0;
  int noise_paths = 200;
  // sandwich certification
  double cert_eps = 0.006;
  double cert_T = 0.01;
  double cert_d0 = 0.15;
  double desk_eps = 0.02;

  std::string config_echo;
  std::uint64_t config_hash = 0;

  static ExpParams from_config(const IniConfig& cfg, const std::string& out_dir_override = "",
                               std::uint64_t seed_override = 0);
};

struct ExpResult {
  std::string name;
  bool pass = false;
  std::vector<std::pair<std::string, bool>> checks;
  std::map<std::string, double> metrics;
  double wall_seconds = 0.0;
};

const std::map<std::string, std::vector<std::string>>& config_schema();

ExpResult run_experiment(const ExpParams& params);

ExpResult exp_generation(const ExpParams& params);
ExpResult exp_thickness(const ExpParams& params);
ExpResult exp_profile(const ExpParams& params);
ExpResult exp_circle_pathwise(const ExpParams& params);
ExpResult exp_funaki_kappa(const ExpParams& params);
ExpResult exp_l2_step(const ExpParams& params);
ExpResult exp_noise_bounds(const ExpParams& params);
ExpResult exp_sandwich_cert(const ExpParams& params);

// Aggregates manifest.json files below dir; returns true when all passed.
bool report_dir(const std::string& dir, std::string* summary_out = nullptr);

}  // namespace sac
