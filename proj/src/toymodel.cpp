#include "tjsim/toymodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tjsim/spectra.hpp"

namespace tjs {

namespace {

LatticeGeometry equilateral_plaquette() {
  Eigen::Matrix2Xd pos(2, 3);
  pos.col(0) << 0.0, 0.0;
  pos.col(1) << 1.0, 0.0;
  pos.col(2) << 0.5, 0.5 * std::sqrt(3.0);
  return LatticeGeometry::triangular2d(pos, 1.0);
}

CouplingSet hopping_only(double t) {
  CouplingSet c;
  c.t_up = t;
  c.t_dn = t;
  c.j_perp = 0.0;
  c.j_z = 0.0;
  c.a_ref = 1.0;
  return c;
}

Eigen::Vector3d sorted3(std::initializer_list<double> values) {
  Eigen::Vector3d v;
  std::copy(values.begin(), values.end(), v.data());
  std::sort(v.data(), v.data() + 3);
  return v;
}

}  // namespace

PlaquetteReport plaquette_spectrum(double t, PlaquetteSector sector) {
  const LatticeGeometry g = equilateral_plaquette();
  const CouplingSet c = hopping_only(t);
  PlaquetteReport report;
  report.sector = sector;
  report.momenta << 0.0, 2.0 * M_PI / 3.0, -2.0 * M_PI / 3.0;

  if (sector == PlaquetteSector::polarized) {
    auto basis = make_sector(3, 1, 0);
    const EigenReport eig = lowest_eigenpairs(build_tj(g, basis, c), 3);
    report.energies = eig.eigenvalues;
    report.analytic = sorted3({2.0 * t, -t, -t});
  } else {
    auto basis = make_sector(3, 1, 1);
    const SparseOperator h = build_tj(g, basis, c);
    const EigenReport eig = lowest_eigenpairs(h, 6);
    const SparseOperator s2 = build_total_spin_squared(basis);
    const double wanted = sector == PlaquetteSector::singlet ? 0.0 : 2.0;
    std::vector<double> energies;
    for (int i = 0; i < 6; ++i) {
      const Eigen::VectorXcd v = eig.eigenvectors.col(i);
      const double s2_val = v.dot(s2.matrix * v).real();
      if (std::abs(s2_val - wanted) < 1e-6) energies.push_back(eig.eigenvalues[i]);
    }
    if (energies.size() != 3)
      throw std::runtime_error("plaquette_spectrum: total-spin blocks did not separate");
    std::sort(energies.begin(), energies.end());
    report.energies = Eigen::Vector3d(energies[0], energies[1], energies[2]);
    report.analytic = sector == PlaquetteSector::singlet ? sorted3({-2.0 * t, t, t})
                                                         : sorted3({2.0 * t, -t, -t});
  }
  report.max_deviation = (report.energies - report.analytic).cwiseAbs().maxCoeff();
  return report;
}

double effective_tunneling_sign(double t, SpinPair pair) {
  const LatticeGeometry g = equilateral_plaquette();
  auto basis = make_sector(3, 1, 1);
  const SparseOperator h = build_tj(g, basis, hopping_only(t));
  const double relative_sign = pair == SpinPair::singlet ? -1.0 : 1.0;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  // |h>_1 |pair>_23 and |h>_2 |pair>_31 in the paper's cyclic labeling.
  Eigen::VectorXcd bra = Eigen::VectorXcd::Zero(basis->dimension());
  bra[basis->rank(Configuration::from_string("hdu"))] = inv_sqrt2;
  bra[basis->rank(Configuration::from_string("hud"))] = relative_sign * inv_sqrt2;
  Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(basis->dimension());
  ket[basis->rank(Configuration::from_string("uhd"))] = inv_sqrt2;
  ket[basis->rank(Configuration::from_string("dhu"))] = relative_sign * inv_sqrt2;

  return bra.dot(h.matrix * ket).real();
}

}  // namespace tjs
