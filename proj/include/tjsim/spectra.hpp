#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "tjsim/operators.hpp"

namespace tjs {

struct LanczosOptions {
  int max_iterations = 1000;
  double tolerance = 1e-11;   // residual bound relative to the spectral scale
  std::uint64_t seed = 0;     // start-vector seed; fixed default for determinism
  int check_interval = 10;
};

struct EigenReport {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors; // unit-norm columns, matching order
  Eigen::VectorXd residual_norms;
};

/// k smallest eigenpairs via Lanczos with full reorthogonalization; invariant
/// subspaces are deflated with fresh random directions, so repeated
/// eigenvalues are resolved on the sector sizes used here.  Throws (carrying
/// the residuals) if the iteration budget runs out first.
EigenReport lowest_eigenpairs(const SparseOperator& op, int k, const LanczosOptions& opts = {});

enum class TNormalization { leg, rung };

struct BindingReport {
  int n_magnons = 1;
  double e_bound = 0.0;    // E(1H nM)
  double e_hole = 0.0;     // E(1H)
  double e_magnons = 0.0;  // E(nM)
  double e_vacuum = 0.0;   // E(0H0M)
  double binding_energy = 0.0;
  double t_norm = 0.0;     // |t| used to normalize
  double binding_over_t = 0.0;
};

/// E_b = E(1HnM) - E(1H) - E(nM) + E(0H0M) from ground-state energies of the
/// four sectors on the same geometry and couplings; E_b < 0 signals binding.
/// The normalization |t| defaults to the mean hopping on a leg-direction bond.
BindingReport binding_energy(const LatticeGeometry& g, const CouplingSet& c, int n_magnons,
                             TNormalization norm = TNormalization::leg,
                             const LanczosOptions& opts = {});

/// Mean |t| on a leg (distance a) or rung (shortest) bond, override-aware.
double hopping_normalization(const LatticeGeometry& g, const CouplingSet& c, TNormalization norm);

/// Probability-weighted mean lattice distance from the hole to the up spins.
/// Requires a one-hole sector with at least one up spin.
double eigenstate_hole_magnon_distance(const Eigen::VectorXcd& state, const SectorBasis& basis,
                                       const LatticeGeometry& g);

struct BoundManifold {
  std::vector<int> indices;        // the lowest `size` eigenstates
  Eigen::VectorXd hole_magnon_distances;
};

BoundManifold bound_manifold(const EigenReport& report, const SectorBasis& basis,
                             const LatticeGeometry& g, int size = 10);

}  // namespace tjs
