#pragma once

#include <Eigen/Dense>

#include "tjsim/basis.hpp"
#include "tjsim/measurement.hpp"

namespace tjs {

/// The twelve per-pair outcome probabilities, four per readout basis in the
/// fixed order (up, hole, down) x (tt, tn, nt, nn) with t = target seen at
/// the site and n = its complement:
///   [<uu>, <u!u>, <!uu>, <!u!u>, <hh>, <h!h>, <!hh>, <!h!h>,
///    <dd>, <d!d>, <!dd>, <!d!d>].
struct MeasuredPairVector {
  Eigen::Matrix<double, 12, 1> m = Eigen::Matrix<double, 12, 1>::Zero();
};

/// Correlator vector order for the 12x9 system:
/// [uu, uh, ud, hu, hh, hd, du, dh, dd] with <n^a_i n^b_j> at entry (a,b).
struct ReconstructionSystem {
  Eigen::Matrix<double, 12, 9> a;
  int rank = 0;
  Eigen::Matrix<double, 9, 1> null_direction;  // unit kernel vector of A
};

/// The verbatim outcome-to-correlator matrix; its rank is verified to be 8.
const ReconstructionSystem& build_system();

struct PairCombos {
  double spin_spin = 0.0;     // 4 <Sz Sz>
  double sym_hole_sz = 0.0;   // 2 (<n^h Sz> + <Sz n^h>)
  double sym_hole_up = 0.0;   // <n^h n^up> + <n^up n^h>
};

/// The closed-form reconstructable combinations, exactly as printed:
///   4<SzSz>        = <uu> + <!u!u> - <hh> - <d!d> - <!dd>
///   2(<hSz>+<Szh>) = -<uu> - <!u!u> + <dd> + <!d!d>
///   <hu>+<uh>      = <!d!d> - <uu> - <hh>
PairCombos reconstruct_pair_combos(const MeasuredPairVector& m);

/// Minimum-norm least-squares solve of A c = m.  The component along the
/// one-dimensional kernel of A is undetermined by any single-basis data;
/// `null_direction` in the system names it explicitly.
Eigen::Matrix<double, 9, 1> solve_full_correlators(const MeasuredPairVector& m);

/// Norm of the component of m orthogonal to the column space of A.  Zero for
/// outcome statistics of any quantum state; grows with detection errors and
/// shot noise.
double consistency_residual(const MeasuredPairVector& m);

/// The 24 three-site outcome probabilities, eight per basis in the order
/// (up, hole, down) x (three target/complement bits, site 0 major):
/// [<ttt>, <tt!t>, <t!tt>, <t!t!t>, <!ttt>, <!tt!t>, <!t!tt>, <!t!t!t>] ...
using MeasuredTripleVector = Eigen::Matrix<double, 24, 1>;

/// 4(<n^h Sz Sz> + <Sz n^h Sz> + <Sz Sz n^h>) via the printed combination.
double reconstruct_three_body(const MeasuredTripleVector& m);

/// Exact outcome probabilities of a state for the pair (i, j) (ideal readout).
MeasuredPairVector exact_pair_probabilities(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                            int i, int j);
MeasuredTripleVector exact_triple_probabilities(const Eigen::VectorXcd& psi,
                                                const SectorBasis& basis, int i, int j, int k);

/// Empirical outcome probabilities from one shot batch per basis
/// (up, hole, down order not required; tags are checked).
MeasuredPairVector pair_probabilities_from_shots(const ShotBatch& up, const ShotBatch& hole,
                                                 const ShotBatch& down, int i, int j);
MeasuredTripleVector triple_probabilities_from_shots(const ShotBatch& up, const ShotBatch& hole,
                                                     const ShotBatch& down, int i, int j, int k);

/// Pair combos from detection-dressed statistics, inverted through the known
/// linear channel model (true states restricted to {down, up, hole}).  The
/// kernel of the dressed system stays antisymmetric, so the symmetric combos
/// are recovered exactly on noiseless synthetic data.
PairCombos invert_channel_pair_combos(const MeasuredPairVector& dressed,
                                      const ErrorChannel& channel);

/// Symmetric n^h n^up pair table assembled from shot statistics over all site
/// pairs: (<n^h_i n^up_j> + <n^up_i n^h_j>) per unordered pair, halved into
/// the ordered-symmetric convention used by the observables module.
Eigen::MatrixXd sym_hole_up_table_from_shots(const ShotBatch& up, const ShotBatch& hole,
                                             const ShotBatch& down);

}  // namespace tjs
