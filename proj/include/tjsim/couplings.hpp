#pragma once

#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "tjsim/geometry.hpp"

namespace tjs {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Energies are angular frequencies in rad/us (hbar = 1), so a quoted
/// "2pi x 1 MHz" is `mhz(1.0)`.
inline constexpr double mhz(double value_mhz) { return kTwoPi * value_mhz; }

/// frustrated: hopping enters with +t (kinetically frustrated on triangles).
/// reversed_hopping: t -> -t only, the ground-state proxy for the
/// negative-temperature/doublon preparation in the hopping-dominated regime.
/// fully_reversed: the complete sign flip H -> -H (t and J).
enum class SignMode { frustrated, reversed_hopping, fully_reversed };

struct BondValues {
  double t_up = 0.0, t_dn = 0.0;      // rad/us
  double j_perp = 0.0, j_z = 0.0;     // rad/us
};

/// Interaction amplitudes at the reference spacing, with ideal power-law decay
/// (1/r^3 hopping, 1/r^6 spin couplings) away from it.  Individual bonds can
/// be pinned to measured values via `bond_overrides`.
struct CouplingSet {
  double t_up = mhz(1.1);
  double t_dn = mhz(1.2);
  double j_perp = mhz(0.107);
  double j_z = mhz(-0.071);
  double a_ref = 14.7;  // um
  double hop_power = 3.0;
  double spin_power = 6.0;
  SignMode sign_mode = SignMode::frustrated;
  // Pairs farther apart than this contribute nothing; for performance studies
  // only, the model itself has no cutoff.
  double range_cutoff = std::numeric_limits<double>::infinity();
  std::map<std::pair<int, int>, BondValues> bond_overrides;  // key (min(i,j), max(i,j))

  /// Amplitudes on the bond (i, j), after power-law scaling or override.
  /// Sign flips from `sign_mode` are applied by the Hamiltonian builder,
  /// not here.
  BondValues bond(const LatticeGeometry& g, int i, int j) const;

  double hopping_sign() const { return sign_mode == SignMode::frustrated ? 1.0 : -1.0; }
  double spin_sign() const { return sign_mode == SignMode::fully_reversed ? -1.0 : 1.0; }

  /// Measured values at h/a = sqrt(3)/2, a = 14.7 um (rung-bond row).
  static CouplingSet equilateral_reference();
  /// Measured values at h/a = 0.5, a = 19.6 um (rung-bond row).
  static CouplingSet half_ratio_reference();
};

/// Pin rung (|i-j| = 1) and leg (|i-j| = 2) ladder bonds to measured values;
/// longer bonds keep the ideal power-law tails.
CouplingSet with_ladder_table_overrides(CouplingSet c, const LatticeGeometry& g,
                                        const BondValues& rung, const BondValues& leg);

BondValues equilateral_rung_values();
BondValues equilateral_leg_values();
BondValues half_ratio_rung_values();
BondValues half_ratio_leg_values();

/// Site-addressed preparation light shifts and their ramp.  Sites meant to
/// hold the magnons are shifted by delta_dn * n_dn; sites meant to hold the
/// holes by delta_dn * n_dn + delta_up * n_up.  One ramp profile drives both
/// shifts (delta_up may be rescaled).
struct LightShiftProgram {
  std::vector<int> magnon_sites;
  std::vector<int> hole_sites;
  double delta0 = mhz(25.0);      // rad/us at T = 0
  double delta_knee = mhz(5.0);   // rad/us at the end of the fast phase
  double t_knee = 1.0;            // us
  double tau = 1.0;               // us, exponential decay constant
  double sign = 1.0;              // +1 targets the ground state, -1 the top
  double delta_up_scale = 1.0;    // delta_up(T) = scale * delta_dn(T)
};

/// Ramp magnitude at time T: linear from delta0 to delta_knee on [0, t_knee],
/// then delta_knee * exp(-(T - t_knee)/tau), times `sign`.
double ramp_value(const LightShiftProgram& p, double T);

}  // namespace tjs
