#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "tjsim/operators.hpp"

namespace tjs {

struct EvolutionSchedule {
  double t_start = 0.0;
  double t_end = 0.0;                  // us
  std::vector<double> snapshot_times;  // within [t_start, t_end]
  double max_step = 0.01;              // us
  int krylov_dim = 20;
  double tolerance = 1e-10;            // local step error
  double min_step = 1e-9;              // us; below this the step controller gives up
};

struct Snapshot {
  double time = 0.0;
  Eigen::VectorXcd state;
};

/// H(T) = H_static + delta_dn(T) * P_dn + delta_up(T) * P_up with the diagonal
/// patterns of the light-shift program; reduces to the bare static operator
/// when no program is attached.
class RampedHamiltonian {
public:
  explicit RampedHamiltonian(const SparseOperator& h_static);
  RampedHamiltonian(const SparseOperator& h_static, const LightShiftProgram& program);

  std::size_t dimension() const { return h_->dimension(); }
  void apply(double T, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;

  /// Substeps never straddle these times (the ramp knee is not smooth).
  std::vector<double> forced_boundaries() const;

private:
  const SparseOperator* h_;
  std::optional<LightShiftProgram> program_;
  Eigen::VectorXd pattern_dn_, pattern_up_;
};

/// Krylov propagation of psi0 under -i H(T) with midpoint evaluation of the
/// ramp per substep; returns the state at each requested snapshot time.
std::vector<Snapshot> evolve(const Eigen::VectorXcd& psi0, const RampedHamiltonian& h,
                             const EvolutionSchedule& schedule);

/// |<target_c | psi(t_r)>|^2 for every snapshot r and target column c.
Eigen::MatrixXd overlap_trace(const std::vector<Snapshot>& snapshots,
                              const Eigen::MatrixXcd& targets);

/// Projection onto the span of the first `size` columns per snapshot.
Eigen::VectorXd manifold_projection(const std::vector<Snapshot>& snapshots,
                                    const Eigen::MatrixXcd& states, int size);

}  // namespace tjs
