#pragma once

#include <Eigen/Dense>

#include "tjsim/operators.hpp"

namespace tjs {

/// Three-site equilateral plaquette sectors: one hole in a polarized
/// background, or one hole with a magnon resolved into total-spin blocks.
enum class PlaquetteSector { polarized, singlet, triplet };

enum class SpinPair { singlet, triplet };

struct PlaquetteReport {
  PlaquetteSector sector;
  Eigen::Vector3d momenta;   // {0, +2pi/3, -2pi/3}
  Eigen::Vector3d energies;  // numerically diagonalized, ascending
  Eigen::Vector3d analytic;  // +-2t cos k, ascending
  double max_deviation = 0.0;
};

/// Exact plaquette bands with J_perp = J_z = 0, built from the full
/// Hamiltonian machinery so it doubles as a sign-convention check:
/// polarized and triplet sectors carry 2t cos k, the singlet sector
/// -2t cos k.
PlaquetteReport plaquette_spectrum(double t, PlaquetteSector sector);

/// <h_i (pair)_jk | H_t | h_i' (pair)_j'k'> between cyclically shifted
/// hole-plus-spin-pair states; -t for the singlet, +t for the triplet.
double effective_tunneling_sign(double t, SpinPair pair);

}  // namespace tjs
