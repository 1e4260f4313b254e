#include "tjsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <stdexcept>

namespace tjs {

RampedHamiltonian::RampedHamiltonian(const SparseOperator& h_static) : h_(&h_static) {}

RampedHamiltonian::RampedHamiltonian(const SparseOperator& h_static,
                                     const LightShiftProgram& program)
    : h_(&h_static), program_(program) {
  pattern_dn_ = light_shift_pattern_dn(*h_static.basis, program);
  pattern_up_ = light_shift_pattern_up(*h_static.basis, program);
}

void RampedHamiltonian::apply(double T, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  y.noalias() = h_->matrix * x;
  if (program_) {
    const double delta_dn = ramp_value(*program_, T);
    const double delta_up = program_->delta_up_scale * delta_dn;
    y.array() += (delta_dn * pattern_dn_ + delta_up * pattern_up_).array() * x.array();
  }
}

std::vector<double> RampedHamiltonian::forced_boundaries() const {
  if (program_ && program_->t_knee > 0.0) return {program_->t_knee};
  return {};
}

namespace {

// One Krylov substep: psi <- exp(-i dt H_mid) psi.  Returns the local error
// estimate (coupling weight out of the subspace); zero on happy breakdown.
double krylov_step(Eigen::VectorXcd& psi, const RampedHamiltonian& h, double t_mid, double dt,
                   int krylov_dim) {
  const double psi_norm = psi.norm();
  if (psi_norm == 0.0) throw std::runtime_error("evolve: zero state");
  const std::size_t dim = psi.size();
  const int m = std::min<std::size_t>(krylov_dim, dim);

  std::vector<Eigen::VectorXcd> basis;
  basis.reserve(m + 1);
  basis.push_back(psi / psi_norm);
  std::vector<double> alphas, betas;
  bool breakdown = false;
  Eigen::VectorXcd w(dim);
  for (int j = 0; j < m; ++j) {
    h.apply(t_mid, basis[j], w);
    const double alpha = basis[j].dot(w).real();
    alphas.push_back(alpha);
    w -= alpha * basis[j];
    if (j > 0) w -= betas[j - 1] * basis[j - 1];
    for (const auto& v : basis) w -= v.dot(w) * v;
    const double beta = w.norm();
    if (beta <= 1e-14 * std::max(1.0, std::abs(alpha))) {
      breakdown = true;
      break;
    }
    betas.push_back(beta);
    if (j + 1 < m) basis.push_back(w / beta);
  }

  const int j = static_cast<int>(alphas.size());
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alphas.data(), j);
  Eigen::VectorXd sub = j > 1 ? Eigen::Map<const Eigen::VectorXd>(betas.data(), j - 1)
                              : Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);

  const std::complex<double> minus_i(0.0, -1.0);
  Eigen::VectorXcd phases(j);
  for (int i = 0; i < j; ++i) phases[i] = std::exp(minus_i * dt * es.eigenvalues()[i]);
  // exp(-i dt T) e1 with e1 expressed in the Ritz basis of T.
  const Eigen::VectorXd first_row = es.eigenvectors().row(0);
  Eigen::VectorXcd coeffs = es.eigenvectors() * phases.cwiseProduct(first_row.cast<std::complex<double>>());

  Eigen::VectorXcd next = Eigen::VectorXcd::Zero(dim);
  for (int col = 0; col < j; ++col) next += coeffs[col] * basis[col];
  psi = psi_norm * next;

  if (breakdown || j < m) return 0.0;
  return betas.back() * std::abs(coeffs[j - 1]);
}

}  // namespace

std::vector<Snapshot> evolve(const Eigen::VectorXcd& psi0, const RampedHamiltonian& h,
                             const EvolutionSchedule& schedule) {
  if (std::abs(psi0.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("evolve: initial state is not normalized");
  if (static_cast<std::size_t>(psi0.size()) != h.dimension())
    throw std::invalid_argument("evolve: state/operator dimension mismatch");
  if (schedule.t_end < schedule.t_start)
    throw std::invalid_argument("evolve: t_end before t_start");
  if (schedule.max_step <= 0.0) throw std::invalid_argument("evolve: max_step must be positive");

  std::vector<double> snaps = schedule.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  for (double t : snaps)
    if (t < schedule.t_start - 1e-12 || t > schedule.t_end + 1e-12)
      throw std::invalid_argument("evolve: snapshot time outside [t_start, t_end]");

  std::set<double> boundaries(snaps.begin(), snaps.end());
  boundaries.insert(schedule.t_end);
  for (double t : h.forced_boundaries())
    if (t > schedule.t_start && t < schedule.t_end) boundaries.insert(t);

  std::vector<Snapshot> out;
  Eigen::VectorXcd psi = psi0;
  double t = schedule.t_start;
  std::size_t next_snap = 0;
  const auto emit_if_due = [&](double now) {
    while (next_snap < snaps.size() && snaps[next_snap] <= now + 1e-12) {
      out.push_back({snaps[next_snap], psi});
      ++next_snap;
    }
  };
  emit_if_due(t);

  for (double boundary : boundaries) {
    if (boundary <= t + 1e-15) {
      emit_if_due(boundary);
      continue;
    }
    while (t < boundary - 1e-12) {
      double dt = std::min(schedule.max_step, boundary - t);
      for (;;) {
        Eigen::VectorXcd trial = psi;
        const double err = krylov_step(trial, h, t + 0.5 * dt, dt, schedule.krylov_dim);
        if (err <= schedule.tolerance) {
          psi = std::move(trial);
          break;
        }
        dt *= 0.5;
        if (dt < schedule.min_step)
          throw std::runtime_error("evolve: step tolerance unreachable within step limits");
      }
      t += dt;
    }
    t = boundary;
    emit_if_due(t);
  }
  return out;
}

Eigen::MatrixXd overlap_trace(const std::vector<Snapshot>& snapshots,
                              const Eigen::MatrixXcd& targets) {
  Eigen::MatrixXd overlaps(snapshots.size(), targets.cols());
  for (std::size_t r = 0; r < snapshots.size(); ++r) {
    if (snapshots[r].state.size() != targets.rows())
      throw std::invalid_argument("overlap_trace: sector mismatch");
    overlaps.row(r) = (targets.adjoint() * snapshots[r].state).cwiseAbs2().transpose();
  }
  return overlaps;
}

Eigen::VectorXd manifold_projection(const std::vector<Snapshot>& snapshots,
                                    const Eigen::MatrixXcd& states, int size) {
  if (size < 1 || size > states.cols())
    throw std::invalid_argument("manifold_projection: size out of range");
  const Eigen::MatrixXd all = overlap_trace(snapshots, states.leftCols(size));
  return all.rowwise().sum();
}

}  // namespace tjs
