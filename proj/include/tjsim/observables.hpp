#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

#include "tjsim/basis.hpp"
#include "tjsim/geometry.hpp"

namespace tjs {

/// <n^species_site>; species densities sum to 1 on every site.
double density(const Eigen::VectorXcd& psi, const SectorBasis& basis, Local species, int site);
Eigen::VectorXd density_profile(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                Local species);

/// Diagonal occupation correlator <n^a_i n^b_j>.
double occupation_pair(const Eigen::VectorXcd& psi, const SectorBasis& basis, Local a, int i,
                       Local b, int j);

/// Symmetrized hole-up pair values for all site pairs (zero diagonal):
/// (<n^h_i n^up_j> + <n^up_i n^h_j>)/2, connected variant subtracts the
/// density products term by term.
Eigen::MatrixXd hole_up_sym_pair_table(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                       bool connected);

/// (<n^h_i n^up_j>_c + <n^up_i n^h_j>_c) / 2 for one pair, i != j.
double sym_connected_pair(const Eigen::VectorXcd& psi, const SectorBasis& basis, int i, int j);

struct ComDistribution {
  Eigen::Matrix2Xd midpoints;  // um
  Eigen::VectorXd mass;
  double total_mass = 0.0;
};

/// Center-of-mass distribution of the non-connected symmetrized hole-up
/// correlator; total mass is 1 for ideal one-hole-one-magnon states.
ComDistribution com_distribution(const Eigen::MatrixXd& sym_pairs, const LatticeGeometry& g);
ComDistribution com_distribution(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                 const LatticeGeometry& g);

struct DisplacementTable {
  std::string label;
  Eigen::Matrix2Xd displacements;  // um
  Eigen::VectorXi pair_counts;
  Eigen::VectorXd values;
};

/// C(d) = (1/N_d) sum_{r_i - r_j = d} pair_values(i, j) over ordered pairs.
DisplacementTable relative_correlation_map(const Eigen::MatrixXd& pair_values,
                                           const LatticeGeometry& g, const std::string& label);
DisplacementTable relative_correlation_map(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                           const LatticeGeometry& g, bool connected);
/// Value at one displacement; throws if no pair realizes it.
double displacement_value(const DisplacementTable& table, const Eigen::Vector2d& d,
                          double tol = 1e-6);

struct DistanceTable {
  std::string label;
  Eigen::VectorXi distances;  // lattice metric (index difference / hop count)
  Eigen::VectorXi pair_counts;
  Eigen::VectorXd values;
};

/// C(d) = (1/N_d) sum over unordered pairs at lattice distance d >= 1.
DistanceTable distance_correlation(const Eigen::MatrixXd& pair_values, const LatticeGeometry& g,
                                   const std::string& label);
DistanceTable distance_correlation(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                   const LatticeGeometry& g);
double distance_value(const DistanceTable& table, int d);

/// Decay length from an unweighted least-squares line through log(values) for
/// d >= 1; entries at or below `noise_floor` are excluded.
double exponential_decay_length(const DistanceTable& table, double noise_floor = 0.0);

enum class SpinAxis { x, z };
enum class ThreeBodyConvention { cumulant, conditional };

/// Connected symmetrized three-body hole-spin-spin correlator on the distinct
/// sites (site_h, site_i, site_j).  The symmetrization averages the three
/// assignments of which site carries the hole operator; `cumulant` subtracts
/// all lower-order products, `conditional` returns the per-assignment
/// <n^h S S>/<n^h> - <S S> average over assignments with nonzero hole density.
double three_body_hole_spin_spin(const Eigen::VectorXcd& psi, const SectorBasis& basis, int site_h,
                                 int site_i, int site_j, SpinAxis axis,
                                 ThreeBodyConvention convention = ThreeBodyConvention::cumulant);

/// sum_r <n^h_r S_{r+d_i} S_{r+d_j}>_c^s over all anchors r for which both
/// displaced sites exist in the geometry.
double hole_frame_sum(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                      const LatticeGeometry& g, const Eigen::Vector2d& d_i,
                      const Eigen::Vector2d& d_j, SpinAxis axis,
                      ThreeBodyConvention convention = ThreeBodyConvention::cumulant);

/// Mean hole-frame three-body correlator over the bonds that close a triangle
/// with the anchor (the bonds surrounding the hole).
double nn_hole_frame_correlation(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                 const LatticeGeometry& g, SpinAxis axis,
                                 ThreeBodyConvention convention = ThreeBodyConvention::cumulant);

/// Connected <S^a_i S^a_j> tables; the diagonal keeps the bare second moment
/// (1 - <n^h_i>)/4, so a fully polarized product state gives the flat 1/4
/// reference in the structure factor.
Eigen::MatrixXd sxsx_connected_table(const Eigen::VectorXcd& psi, const SectorBasis& basis);
Eigen::MatrixXd szsz_connected_table(const Eigen::VectorXcd& psi, const SectorBasis& basis);

/// |S(k)| = |(1/N) sum_ij e^{ik (r_i - r_j)} C_ij| on the grid.
Eigen::VectorXd structure_factor(const Eigen::MatrixXd& correlations, const LatticeGeometry& g,
                                 const BrillouinGrid& grid);

struct SeparationHistogram {
  Eigen::VectorXi separations;  // lattice distance between the two magnons
  Eigen::VectorXd probabilities;
};

struct DefectPatternHistogram {
  std::vector<std::array<int, 2>> gap_patterns;  // sorted index gaps, mirror-folded
  Eigen::VectorXd probabilities;
};

/// Magnon-pair arrangement statistics of a two-magnon state.
SeparationHistogram magnon_pair_histogram(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                          const LatticeGeometry& g);

/// Arrangements of the three non-down sites (hole + two magnons) of a
/// one-hole-two-magnon ladder state, keyed by the two index gaps with the
/// mirror image folded onto (smaller gap, larger gap).
DefectPatternHistogram three_defect_histogram(const Eigen::VectorXcd& psi,
                                              const SectorBasis& basis);

}  // namespace tjs
