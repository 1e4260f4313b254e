#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <iosfwd>

#include "tjsim/basis.hpp"
#include "tjsim/couplings.hpp"
#include "tjsim/geometry.hpp"

namespace tjs {

/// Hermitian operator on a sector, stored sparse (coordinate triplets merged
/// into compressed form).  Both (i,j) and (j,i) entries are emitted by every
/// builder, so Hermiticity holds exactly rather than up to roundoff.
struct SparseOperator {
  BasisPtr basis;
  Eigen::SparseMatrix<std::complex<double>> matrix;

  std::size_t dimension() const { return basis ? basis->dimension() : 0; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const { return matrix * x; }

  SparseOperator scaled(double factor) const { return {basis, factor * matrix}; }
};

/// Long-range bosonic t-J operator on the sector: +t_sigma (a/r)^3 hopping
/// summed over all pairs, J_perp/2 (a/r)^6 flip-flop, and the diagonal
/// J_z (a/r)^6 Sz Sz part.  Sign flips follow c.sign_mode.
SparseOperator build_tj(const LatticeGeometry& g, BasisPtr basis, const CouplingSet& c);

/// Diagonal light-shift operator at ramp time T:
///   delta_dn(T) [sum_{i in magnon} n_dn_i + sum_{j in hole} n_dn_j]
///   + delta_up(T) sum_{j in hole} n_up_j.
SparseOperator build_light_shift(BasisPtr basis, const LightShiftProgram& p, double T);

/// Per-configuration counts multiplying delta_dn(T) resp. delta_up(T); the
/// ramped diagonal is delta_dn(T)*pattern_dn + delta_up(T)*pattern_up.
Eigen::VectorXd light_shift_pattern_dn(const SectorBasis& basis, const LightShiftProgram& p);
Eigen::VectorXd light_shift_pattern_up(const SectorBasis& basis, const LightShiftProgram& p);

/// Total-spin S^2 of the occupied sites (holes carry no spin).
SparseOperator build_total_spin_squared(BasisPtr basis);

/// Debug export, one "row col real imag" line per stored entry.
void write_coordinate_text(std::ostream& os, const SparseOperator& op);

}  // namespace tjs
