#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tjsim/couplings.hpp"
#include "tjsim/dynamics.hpp"
#include "tjsim/geometry.hpp"
#include "tjsim/initmodel.hpp"
#include "tjsim/measurement.hpp"
#include "tjsim/observables.hpp"

namespace tjs {

/// Delimited-text table: '#'-prefixed header lines, one tab-separated column
/// name row, then numeric rows printed with full double precision.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& comments,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows);

void write_distance_table(const std::filesystem::path& path, const DistanceTable& table);
void write_displacement_table(const std::filesystem::path& path, const DisplacementTable& table);
void write_com_distribution(const std::filesystem::path& path, const ComDistribution& dist);
void write_pair_table(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                      const std::string& label);
void write_density_profiles(const std::filesystem::path& path, const Eigen::VectorXd& down,
                            const Eigen::VectorXd& up, const Eigen::VectorXd& hole);
void write_structure_factor(const std::filesystem::path& path, const BrillouinGrid& grid,
                            const Eigen::VectorXd& values);

/// Shot files: header lines (basis, n_sites, n_shots, seed) then one
/// '0'/'1' string per shot, '1' = imaged.
void write_shot_batch(const std::filesystem::path& path, const ShotBatch& batch);
ShotBatch read_shot_batch(const std::filesystem::path& path);

/// Sector state snapshot: sector header plus "ordinal real imag" rows.
void write_state(const std::filesystem::path& path, const Eigen::VectorXcd& psi,
                 const SectorBasis& basis, double time);
struct StateFile {
  int n_sites = 0, n_holes = 0, n_up = 0;
  double time = 0.0;
  Eigen::VectorXcd amplitudes;
};
StateFile read_state(const std::filesystem::path& path);

nlohmann::json geometry_to_json(const LatticeGeometry& g);
LatticeGeometry geometry_from_json(const nlohmann::json& j);

nlohmann::json boltzmann_to_json(const BoltzmannModel& model);
BoltzmannModel boltzmann_from_json(const nlohmann::json& j);

}  // namespace tjs
