#include "tjsim/operators.hpp"

#include <ostream>
#include <stdexcept>
#include <vector>

namespace tjs {

namespace {

using Triplet = Eigen::Triplet<std::complex<double>>;

double sz_of(Local s) { return s == Local::up ? 0.5 : (s == Local::down ? -0.5 : 0.0); }

Configuration swap_sites(const Configuration& c, int i, int j) {
  const Local si = c.at(i), sj = c.at(j);
  return c.with(i, sj).with(j, si);
}

void check_site_list(const std::vector<int>& sites, int n_sites, const char* what) {
  for (int s : sites)
    if (s < 0 || s >= n_sites)
      throw std::invalid_argument(std::string(what) + ": site index out of range");
}

}  // namespace

SparseOperator build_tj(const LatticeGeometry& g, BasisPtr basis, const CouplingSet& c) {
  if (!basis) throw std::invalid_argument("build_tj: null basis");
  if (g.n_sites() != basis->n_sites())
    throw std::invalid_argument("build_tj: geometry and basis disagree on n_sites");

  const int n = g.n_sites();
  const std::size_t dim = basis->dimension();
  const double hop_sign = c.hopping_sign();
  const double spin_sign = c.spin_sign();

  std::vector<BondValues> bond(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) bond[i * n + j] = c.bond(g, i, j);

  std::vector<Triplet> entries;
  entries.reserve(dim * (2 * n + 1));
  for (std::size_t m = 0; m < dim; ++m) {
    const Configuration& conf = basis->config(m);
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
      const Local si = conf.at(i);
      for (int j = i + 1; j < n; ++j) {
        const Local sj = conf.at(j);
        const BondValues& b = bond[i * n + j];
        if (si == Local::hole && sj == Local::hole) continue;
        if (si == Local::hole || sj == Local::hole) {
          const Local moving = si == Local::hole ? sj : si;
          const double t = moving == Local::up ? b.t_up : b.t_dn;
          if (t != 0.0) {
            const std::size_t target = basis->rank(swap_sites(conf, i, j));
            entries.emplace_back(static_cast<int>(target), static_cast<int>(m), hop_sign * t);
          }
        } else if (si != sj) {
          if (b.j_perp != 0.0) {
            const std::size_t target = basis->rank(swap_sites(conf, i, j));
            entries.emplace_back(static_cast<int>(target), static_cast<int>(m),
                                 spin_sign * 0.5 * b.j_perp);
          }
          diag += b.j_z * sz_of(si) * sz_of(sj);
        } else {
          diag += b.j_z * sz_of(si) * sz_of(sj);
        }
      }
    }
    if (diag != 0.0)
      entries.emplace_back(static_cast<int>(m), static_cast<int>(m), spin_sign * diag);
  }

  SparseOperator op;
  op.basis = std::move(basis);
  op.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  op.matrix.setFromTriplets(entries.begin(), entries.end());
  return op;
}

Eigen::VectorXd light_shift_pattern_dn(const SectorBasis& basis, const LightShiftProgram& p) {
  check_site_list(p.magnon_sites, basis.n_sites(), "light shift magnon sites");
  check_site_list(p.hole_sites, basis.n_sites(), "light shift hole sites");
  Eigen::VectorXd pattern(basis.dimension());
  for (std::size_t m = 0; m < basis.dimension(); ++m) {
    const Configuration& conf = basis.config(m);
    int count = 0;
    for (int s : p.magnon_sites) count += conf.at(s) == Local::down;
    for (int s : p.hole_sites) count += conf.at(s) == Local::down;
    pattern[static_cast<Eigen::Index>(m)] = count;
  }
  return pattern;
}

Eigen::VectorXd light_shift_pattern_up(const SectorBasis& basis, const LightShiftProgram& p) {
  check_site_list(p.hole_sites, basis.n_sites(), "light shift hole sites");
  Eigen::VectorXd pattern(basis.dimension());
  for (std::size_t m = 0; m < basis.dimension(); ++m) {
    const Configuration& conf = basis.config(m);
    int count = 0;
    for (int s : p.hole_sites) count += conf.at(s) == Local::up;
    pattern[static_cast<Eigen::Index>(m)] = count;
  }
  return pattern;
}

SparseOperator build_light_shift(BasisPtr basis, const LightShiftProgram& p, double T) {
  if (!basis) throw std::invalid_argument("build_light_shift: null basis");
  const double delta_dn = ramp_value(p, T);
  const double delta_up = p.delta_up_scale * delta_dn;
  const Eigen::VectorXd diag =
      delta_dn * light_shift_pattern_dn(*basis, p) + delta_up * light_shift_pattern_up(*basis, p);

  std::vector<Triplet> entries;
  entries.reserve(basis->dimension());
  for (Eigen::Index m = 0; m < diag.size(); ++m)
    if (diag[m] != 0.0) entries.emplace_back(static_cast<int>(m), static_cast<int>(m), diag[m]);

  SparseOperator op;
  op.basis = std::move(basis);
  op.matrix.resize(diag.size(), diag.size());
  op.matrix.setFromTriplets(entries.begin(), entries.end());
  return op;
}

SparseOperator build_total_spin_squared(BasisPtr basis) {
  if (!basis) throw std::invalid_argument("build_total_spin_squared: null basis");
  const int n = basis->n_sites();
  const std::size_t dim = basis->dimension();
  std::vector<Triplet> entries;
  for (std::size_t m = 0; m < dim; ++m) {
    const Configuration& conf = basis->config(m);
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
      const Local si = conf.at(i);
      if (si == Local::hole) continue;
      diag += 0.75;
      for (int j = i + 1; j < n; ++j) {
        const Local sj = conf.at(j);
        if (sj == Local::hole) continue;
        diag += 2.0 * sz_of(si) * sz_of(sj);
        if (si != sj) {
          const std::size_t target = basis->rank(swap_sites(conf, i, j));
          entries.emplace_back(static_cast<int>(target), static_cast<int>(m), 1.0);
        }
      }
    }
    if (diag != 0.0) entries.emplace_back(static_cast<int>(m), static_cast<int>(m), diag);
  }
  SparseOperator op;
  op.basis = std::move(basis);
  op.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  op.matrix.setFromTriplets(entries.begin(), entries.end());
  return op;
}

void write_coordinate_text(std::ostream& os, const SparseOperator& op) {
  os << "# row col real imag\n";
  for (int k = 0; k < op.matrix.outerSize(); ++k)
    for (Eigen::SparseMatrix<std::complex<double>>::InnerIterator it(op.matrix, k); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag()
         << '\n';
}

}  // namespace tjs
