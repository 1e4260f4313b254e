#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tjsim/basis.hpp"

namespace tjs {

/// Readout sequences.  down/ground/up_presence map their target state to the
/// presence of an atom, up/hole to its absence; x_plus/x_minus are down-basis
/// reads taken after a global +/- pi/2 spin rotation.
enum class MeasurementBasisTag { down, up, hole, ground, up_presence, x_plus, x_minus };

std::string to_string(MeasurementBasisTag tag);
MeasurementBasisTag measurement_basis_from_string(const std::string& s);

struct MeasurementBasis {
  MeasurementBasisTag tag;
  /// Ideal imaged/lost outcome per true state, indexed by Local.
  std::array<bool, 5> imaged;
  /// Whether the target population estimator counts imaged (presence) or
  /// lost (absence) sites.
  bool target_is_presence;
};

MeasurementBasis measurement_basis(MeasurementBasisTag tag);

/// Primitive detection error rates (vacuum losses, Rydberg lifetimes,
/// deexcitation), with the calibrated defaults.
struct ErrorRates {
  double eps_m = 0.002;      // mechanical losses + imaging fidelity
  double eps_s = 0.055;      // 0K lifetime of the S state
  double eps_g = 0.013;      // 0K lifetime of the G state
  double eps_pp = 0.026;     // 0K lifetime of the P' state
  double eps_gpp = 0.02;     // 0K lifetime of a 50% G/P' mixture
  double eps_bbr_sp = 0.02;  // black-body transfer out of S'
  double eps_bbr_p = 0.02;   // black-body transfer out of P
  double eps_deex = 0.02;    // deexcitation error
};

/// First-order error-tree matrix: rows are the measured populations
/// (<n_dn>, <n_up>, <n_h>, <n_g>), columns the true states (L, g, S, P, S').
Eigen::Matrix<double, 4, 5> derive_error_matrix(const ErrorRates& rates);

class ErrorChannel {
public:
  explicit ErrorChannel(const ErrorRates& rates = {});

  const ErrorRates& rates() const { return rates_; }
  const Eigen::Matrix<double, 4, 5>& matrix() const { return matrix_; }

  /// P(site counted as the basis target | true state).
  double counted_probability(MeasurementBasisTag tag, Local true_state) const;
  /// P(site imaged | true state), honoring the basis presence/absence mapping.
  double imaged_probability(MeasurementBasisTag tag, Local true_state) const;

private:
  ErrorRates rates_;
  Eigen::Matrix<double, 4, 5> matrix_;
  Eigen::Matrix<double, 1, 5> up_presence_row_;
};

struct ShotBatch {
  MeasurementBasisTag tag = MeasurementBasisTag::down;
  std::uint64_t seed = 0;
  int n_sites = 0;
  /// shots x sites, 1 = imaged, 0 = lost.
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> outcomes;

  int n_shots() const { return static_cast<int>(outcomes.rows()); }
};

/// Estimated target population at `site` (imaged or lost fraction per the
/// basis convention).
double estimate_population(const ShotBatch& batch, int site);

/// Hole-pattern-blocked space: fixed hole number, free spins.  This is where
/// the global pi/2 rotation lives, since it mixes magnetization sectors.
class HoleBlockedBasis {
public:
  HoleBlockedBasis(int n_sites, int n_holes,
                   std::size_t dimension_cap = SectorBasis::default_dimension_cap);

  int n_sites() const { return n_sites_; }
  int n_holes() const { return n_holes_; }
  int spin_slots() const { return n_sites_ - n_holes_; }
  std::size_t dimension() const;

  Configuration config(std::size_t ordinal) const;
  std::size_t index_of(const Configuration& c) const;

  const std::vector<std::uint64_t>& hole_masks() const { return hole_masks_; }

private:
  int n_sites_, n_holes_;
  std::vector<std::uint64_t> hole_masks_;
};

struct BlockedState {
  std::shared_ptr<const HoleBlockedBasis> basis;
  Eigen::VectorXcd amplitudes;
};

/// Embed a sector state into the hole-blocked space (same hole count).
BlockedState embed_in_blocked(const Eigen::VectorXcd& psi, const SectorBasis& basis);

/// Global product of single-site +/- pi/2 rotations on the spin subspace,
/// identity on holes.  After the +1 rotation a down-basis readout measures
/// n^+ (and -1 measures n^-), so S^x = (n^+ - n^-)/2.
BlockedState rotate_for_x(const BlockedState& state, int sign);
BlockedState rotate_for_x(const Eigen::VectorXcd& psi, const SectorBasis& basis, int sign);

/// Projective shot sampling: each shot draws a configuration from |psi|^2 and
/// maps each site through the readout (ideal when channel == nullptr,
/// otherwise an independent Bernoulli draw with the channel's imaging
/// probability).  Shots are reproducible bit-for-bit given the seed; x bases
/// must be sampled from a pre-rotated blocked state.
ShotBatch sample_shots(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                       MeasurementBasisTag tag, const ErrorChannel* channel, int n_shots,
                       std::uint64_t seed);
ShotBatch sample_shots(const BlockedState& state, MeasurementBasisTag tag,
                       const ErrorChannel* channel, int n_shots, std::uint64_t seed);

/// Detection applied to fixed classical five-state words (one row per word),
/// used for initial-state error pipelines.
ShotBatch detect_words(const std::vector<SiteWord>& words, MeasurementBasisTag tag,
                       const ErrorChannel* channel, std::uint64_t seed);

}  // namespace tjs
