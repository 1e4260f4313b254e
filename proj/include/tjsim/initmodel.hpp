#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

#include "tjsim/basis.hpp"
#include "tjsim/measurement.hpp"

namespace tjs {

/// Admissible-space restrictions for the correlated region: bounds on the
/// hole count, the region magnetization (S^z with up = +1/2, down = -1/2,
/// others 0), and the ground-state-atom count.  Lost atoms are unrestricted.
struct SpaceConstraints {
  int max_holes = 3;
  double sz_min = 0.0;  // defaulted to -|region|/2 at model construction
  double sz_max = 0.5;
  int max_ground = 2;
  bool sz_min_is_set = false;
};

/// Classical five-state energy functional over the array:
///   E(s) = - sum_{i<j in region} sum_a J^a_ij n^a_i n^a_j
///          - sum_j sum_a h^a_j n^a_j,
/// with same-state couplings inside the correlated region only.  Sites
/// outside the region are independent and carry all five local states;
/// region words are restricted by the constraints.
class BoltzmannModel {
public:
  BoltzmannModel(int n_sites, std::vector<int> region, SpaceConstraints constraints = {});

  int n_sites() const { return n_sites_; }
  const std::vector<int>& region() const { return region_; }
  const SpaceConstraints& constraints() const { return constraints_; }
  bool in_region(int site) const { return region_index_[site] >= 0; }
  int region_index(int site) const { return region_index_[site]; }

  double coupling(int state, int site_i, int site_j) const;
  void set_coupling(int state, int site_i, int site_j, double value);
  double field(int state, int site) const { return fields_(state, site); }
  void set_field(int state, int site, double value) { fields_(state, site) = value; }
  const Eigen::MatrixXd& fields() const { return fields_; }

  double energy(const SiteWord& word) const;

  /// Admissible region words (length |region|), fixed enumeration order.
  const std::vector<SiteWord>& region_words() const { return region_words_; }
  /// Gibbs distribution over the region words.
  Eigen::VectorXd region_probabilities() const;
  /// Gibbs marginal (5 entries) of an outside site.
  Eigen::Matrix<double, 5, 1> outside_marginal(int site) const;

private:
  int n_sites_;
  std::vector<int> region_;
  std::vector<int> region_index_;
  SpaceConstraints constraints_;
  std::array<Eigen::MatrixXd, 5> couplings_;  // |region| x |region|, symmetric
  Eigen::MatrixXd fields_;                    // 5 x n_sites
  std::vector<SiteWord> region_words_;
};

struct ProbabilityTable {
  std::vector<SiteWord> words;  // full-array words
  Eigen::VectorXd p;
};

/// Exact enumeration of the full distribution; throws when the admissible
/// space (region words x 5^outside) exceeds the cap.
ProbabilityTable probabilities(const BoltzmannModel& model,
                               std::size_t cap = SectorBasis::default_dimension_cap);

/// Detection-dressed one- and two-point expectations per calibration basis
/// (down, up, hole, ground): every true state is mapped through the channel's
/// counted-as-target probability; channel == nullptr means ideal indicators.
struct DressedExpectations {
  static constexpr std::array<MeasurementBasisTag, 4> bases = {
      MeasurementBasisTag::down, MeasurementBasisTag::up, MeasurementBasisTag::hole,
      MeasurementBasisTag::ground};
  std::array<Eigen::VectorXd, 4> one_point;         // per basis, per site
  std::array<Eigen::MatrixXd, 4> two_point_region;  // per basis, region x region
};

DressedExpectations dressed_expectations(const BoltzmannModel& model,
                                         const ErrorChannel* channel);

using FitData = DressedExpectations;

struct FitSettings {
  double w_one = 1.0;
  double w_two = 1.0;
  // The lost-density and target-probability pulls are regularizers for noisy
  // data; with the zero defaults the surrogate equals cost_true, which is
  // what synthetic round trips need.
  double w_lost = 0.0;
  double w_target = 0.0;
  SiteWord target;      // s^target, full word
  int budget = 240000;  // cost evaluations, shared across restarts
  int restarts = 3;
  std::uint64_t seed = 0;
  double cost_tolerance = 1e-9;  // stop a restart once cost_fit falls below
};

struct FitResult {
  BoltzmannModel model;
  double cost_fit = 0.0;
  double cost_true = 0.0;
  bool converged = false;
  std::vector<double> cost_trace;  // best cost_true after each restart
};

/// cost_true = eps_one + eps_two of the model against the data.
double cost_true(const BoltzmannModel& model, const FitData& data, const ErrorChannel* channel);

/// Derivative-free adaptive coordinate search with restarts; each restart
/// re-weights cost_fit and jitters the start, the best model under cost_true
/// wins.  Deterministic for a fixed seed.
FitResult fit(const BoltzmannModel& start, const FitData& data, const ErrorChannel* channel,
              const FitSettings& settings);

/// i.i.d. draws from p(s); ground/lost sites are inert for downstream
/// dynamics.
std::vector<SiteWord> sample_initial_configurations(const BoltzmannModel& model, int n,
                                                    std::uint64_t seed);

}  // namespace tjs
