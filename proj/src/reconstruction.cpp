#include "tjsim/reconstruction.hpp"

#include <cmath>
#include <stdexcept>

namespace tjs {

namespace {

Eigen::Matrix<double, 12, 9> printed_matrix() {
  Eigen::Matrix<double, 12, 9> a;
  a << 1, 0, 0, 0, 0, 0, 0, 0, 0,  // <uu>
       0, 1, 1, 0, 0, 0, 0, 0, 0,  // <u!u>
       0, 0, 0, 1, 0, 0, 1, 0, 0,  // <!uu>
       0, 0, 0, 0, 1, 1, 0, 1, 1,  // <!u!u>
       0, 0, 0, 0, 1, 0, 0, 0, 0,  // <hh>
       0, 0, 0, 1, 0, 1, 0, 0, 0,  // <h!h>
       0, 1, 0, 0, 0, 0, 0, 1, 0,  // <!hh>
       1, 0, 1, 0, 0, 0, 1, 0, 1,  // <!h!h>
       0, 0, 0, 0, 0, 0, 0, 0, 1,  // <dd>
       0, 0, 0, 0, 0, 0, 1, 1, 0,  // <d!d>
       0, 0, 1, 0, 0, 1, 0, 0, 0,  // <!dd>
       1, 1, 0, 1, 1, 0, 0, 0, 0;  // <!d!d>
  return a;
}

}  // namespace

const ReconstructionSystem& build_system() {
  static const ReconstructionSystem system = [] {
    ReconstructionSystem s;
    s.a = printed_matrix();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(s.a);
    lu.setThreshold(1e-10);
    s.rank = static_cast<int>(lu.rank());
    const Eigen::MatrixXd kernel = lu.kernel();
    if (kernel.cols() != 1) throw std::logic_error("reconstruction system: kernel is not 1D");
    Eigen::Matrix<double, 9, 1> n = kernel.col(0).normalized();
    for (int i = 0; i < 9; ++i) {
      if (std::abs(n[i]) > 1e-12) {
        if (n[i] < 0) n = -n;
        break;
      }
    }
    s.null_direction = n;
    return s;
  }();
  return system;
}

PairCombos reconstruct_pair_combos(const MeasuredPairVector& mv) {
  const auto& m = mv.m;
  PairCombos combos;
  combos.spin_spin = m[0] + m[3] - m[4] - m[9] - m[10];
  combos.sym_hole_sz = -m[0] - m[3] + m[8] + m[11];
  combos.sym_hole_up = m[11] - m[0] - m[4];
  return combos;
}

Eigen::Matrix<double, 9, 1> solve_full_correlators(const MeasuredPairVector& m) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(build_system().a);
  return cod.solve(m.m);
}

double consistency_residual(const MeasuredPairVector& m) {
  static const Eigen::MatrixXd q = [] {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(build_system().a, Eigen::ComputeThinU);
    int r = 0;
    for (; r < svd.singularValues().size(); ++r)
      if (svd.singularValues()[r] < 1e-10 * svd.singularValues()[0]) break;
    return Eigen::MatrixXd(svd.matrixU().leftCols(r));
  }();
  const Eigen::VectorXd residual = m.m - q * (q.transpose() * m.m);
  return residual.norm();
}

double reconstruct_three_body(const MeasuredTripleVector& m) {
  // Outcome index within a basis block: complement bits of the three sites,
  // first site major (ttt = 0, tt!t = 1, ..., !t!t!t = 7).
  const auto up = [&](int bits) { return m[bits]; };
  const auto hole = [&](int bits) { return m[8 + bits]; };
  const auto down = [&](int bits) { return m[16 + bits]; };
  return up(0b001) + up(0b010) + up(0b100) + up(0b111)  // <uu!u> + <u!uu> + <!uuu> + <!u!u!u>
         - hole(0b000)                                  // <hhh>
         - down(0b000) - down(0b011) - down(0b101) - down(0b110);
}

namespace {

bool counted_ideal(MeasurementBasisTag tag, Local s) {
  switch (tag) {
    case MeasurementBasisTag::up: return s == Local::up;
    case MeasurementBasisTag::hole: return s == Local::hole;
    case MeasurementBasisTag::down: return s == Local::down;
    default: throw std::invalid_argument("reconstruction uses the up/hole/down bases");
  }
}

constexpr MeasurementBasisTag kBases[3] = {MeasurementBasisTag::up, MeasurementBasisTag::hole,
                                           MeasurementBasisTag::down};

}  // namespace

MeasuredPairVector exact_pair_probabilities(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                            int i, int j) {
  if (psi.size() != static_cast<Eigen::Index>(basis.dimension()))
    throw std::invalid_argument("state/basis dimension mismatch");
  if (i == j) throw std::invalid_argument("pair probabilities need distinct sites");
  MeasuredPairVector out;
  for (std::size_t m = 0; m < basis.dimension(); ++m) {
    const double w = std::norm(psi[static_cast<Eigen::Index>(m)]);
    if (w == 0.0) continue;
    const Configuration& conf = basis.config(m);
    for (int b = 0; b < 3; ++b) {
      const bool ti = counted_ideal(kBases[b], conf.at(i));
      const bool tj = counted_ideal(kBases[b], conf.at(j));
      out.m[4 * b + (ti ? 0 : 2) + (tj ? 0 : 1)] += w;
    }
  }
  return out;
}

MeasuredTripleVector exact_triple_probabilities(const Eigen::VectorXcd& psi,
                                                const SectorBasis& basis, int i, int j, int k) {
  if (i == j || i == k || j == k)
    throw std::invalid_argument("triple probabilities need distinct sites");
  MeasuredTripleVector out = MeasuredTripleVector::Zero();
  for (std::size_t m = 0; m < basis.dimension(); ++m) {
    const double w = std::norm(psi[static_cast<Eigen::Index>(m)]);
    if (w == 0.0) continue;
    const Configuration& conf = basis.config(m);
    for (int b = 0; b < 3; ++b) {
      const int bits = (counted_ideal(kBases[b], conf.at(i)) ? 0 : 4) +
                       (counted_ideal(kBases[b], conf.at(j)) ? 0 : 2) +
                       (counted_ideal(kBases[b], conf.at(k)) ? 0 : 1);
      out[8 * b + bits] += w;
    }
  }
  return out;
}

namespace {

void check_batch_tag(const ShotBatch& batch, MeasurementBasisTag expected) {
  if (batch.tag != expected)
    throw std::invalid_argument("shot batch has basis " + to_string(batch.tag) + ", expected " +
                                to_string(expected));
}

// Counted-as-target bit per the basis presence/absence convention.
bool counted_from_outcome(MeasurementBasisTag tag, std::uint8_t imaged) {
  return measurement_basis(tag).target_is_presence ? imaged != 0 : imaged == 0;
}

}  // namespace

MeasuredPairVector pair_probabilities_from_shots(const ShotBatch& up, const ShotBatch& hole,
                                                 const ShotBatch& down, int i, int j) {
  check_batch_tag(up, MeasurementBasisTag::up);
  check_batch_tag(hole, MeasurementBasisTag::hole);
  check_batch_tag(down, MeasurementBasisTag::down);
  MeasuredPairVector out;
  const ShotBatch* batches[3] = {&up, &hole, &down};
  for (int b = 0; b < 3; ++b) {
    const ShotBatch& batch = *batches[b];
    for (int shot = 0; shot < batch.n_shots(); ++shot) {
      const bool ti = counted_from_outcome(batch.tag, batch.outcomes(shot, i));
      const bool tj = counted_from_outcome(batch.tag, batch.outcomes(shot, j));
      out.m[4 * b + (ti ? 0 : 2) + (tj ? 0 : 1)] += 1.0;
    }
    out.m.segment<4>(4 * b) /= batch.n_shots();
  }
  return out;
}

MeasuredTripleVector triple_probabilities_from_shots(const ShotBatch& up, const ShotBatch& hole,
                                                     const ShotBatch& down, int i, int j, int k) {
  check_batch_tag(up, MeasurementBasisTag::up);
  check_batch_tag(hole, MeasurementBasisTag::hole);
  check_batch_tag(down, MeasurementBasisTag::down);
  MeasuredTripleVector out = MeasuredTripleVector::Zero();
  const ShotBatch* batches[3] = {&up, &hole, &down};
  for (int b = 0; b < 3; ++b) {
    const ShotBatch& batch = *batches[b];
    for (int shot = 0; shot < batch.n_shots(); ++shot) {
      const int bits = (counted_from_outcome(batch.tag, batch.outcomes(shot, i)) ? 0 : 4) +
                       (counted_from_outcome(batch.tag, batch.outcomes(shot, j)) ? 0 : 2) +
                       (counted_from_outcome(batch.tag, batch.outcomes(shot, k)) ? 0 : 1);
      out[8 * b + bits] += 1.0;
    }
    out.segment<8>(8 * b) /= batch.n_shots();
  }
  return out;
}

PairCombos invert_channel_pair_combos(const MeasuredPairVector& dressed,
                                      const ErrorChannel& channel) {
  // Dressed outcome matrix: counted probabilities q_b(s) replace the exact
  // indicators, independently per site.  Correlator order (a, b) over
  // {up, hole, down} as in the printed system.
  constexpr Local kStates[3] = {Local::up, Local::hole, Local::down};
  Eigen::Matrix<double, 12, 9> dressed_a;
  for (int b = 0; b < 3; ++b) {
    Eigen::Vector3d q;
    for (int s = 0; s < 3; ++s) q[s] = channel.counted_probability(kBases[b], kStates[s]);
    for (int sa = 0; sa < 3; ++sa)
      for (int sb = 0; sb < 3; ++sb) {
        const int col = 3 * sa + sb;
        dressed_a(4 * b + 0, col) = q[sa] * q[sb];
        dressed_a(4 * b + 1, col) = q[sa] * (1.0 - q[sb]);
        dressed_a(4 * b + 2, col) = (1.0 - q[sa]) * q[sb];
        dressed_a(4 * b + 3, col) = (1.0 - q[sa]) * (1.0 - q[sb]);
      }
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod{Eigen::MatrixXd(dressed_a)};
  const Eigen::VectorXd c = cod.solve(dressed.m);
  PairCombos combos;
  combos.spin_spin = c[0] - c[2] - c[6] + c[8];
  combos.sym_hole_sz = c[1] + c[3] - c[5] - c[7];
  combos.sym_hole_up = c[1] + c[3];
  return combos;
}

Eigen::MatrixXd sym_hole_up_table_from_shots(const ShotBatch& up, const ShotBatch& hole,
                                             const ShotBatch& down) {
  const int n = up.n_sites;
  if (hole.n_sites != n || down.n_sites != n)
    throw std::invalid_argument("shot batches disagree on n_sites");
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const PairCombos combos =
          reconstruct_pair_combos(pair_probabilities_from_shots(up, hole, down, i, j));
      table(i, j) = table(j, i) = 0.5 * combos.sym_hole_up;
    }
  return table;
}

}  // namespace tjs
