#include "tjsim/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <stdexcept>

namespace tjs {

namespace {

Eigen::VectorXcd random_unit_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[static_cast<Eigen::Index>(i)] = gauss(rng);
  const double norm = v.norm();
  if (norm == 0.0) throw std::runtime_error("lanczos: degenerate start vector");
  return v / norm;
}

void orthogonalize(Eigen::VectorXcd& w, const std::vector<Eigen::VectorXcd>& vs) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& v : vs) w -= v.dot(w) * v;
}

}  // namespace

EigenReport lowest_eigenpairs(const SparseOperator& op, int k, const LanczosOptions& opts) {
  const std::size_t dim = op.dimension();
  if (k < 1) throw std::invalid_argument("lowest_eigenpairs: k must be >= 1");
  if (static_cast<std::size_t>(k) > dim)
    throw std::invalid_argument("lowest_eigenpairs: k exceeds the sector dimension");

  std::mt19937_64 rng(opts.seed);
  std::vector<Eigen::VectorXcd> lanczos_vectors;
  std::vector<double> alphas, betas;  // betas[j] couples vector j to j+1
  lanczos_vectors.push_back(random_unit_vector(dim, rng));

  const int max_steps = std::min<std::size_t>(dim, static_cast<std::size_t>(opts.max_iterations));
  double scale = 0.0;
  bool exhausted = false;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri_solver;
  const auto solve_tridiagonal = [&](bool with_vectors) {
    const int j = static_cast<int>(alphas.size());
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alphas.data(), j);
    Eigen::VectorXd sub = j > 1 ? Eigen::Map<const Eigen::VectorXd>(betas.data(), j - 1)
                                : Eigen::VectorXd();
    tri_solver.computeFromTridiagonal(
        diag, sub, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  };

  const auto converged = [&]() {
    const int j = static_cast<int>(alphas.size());
    if (j < k) return false;
    // A trailing deflation marker means the orthogonal complement is still
    // unexplored; the zero-residual estimate would be misleading there.
    if (!betas.empty() && betas.back() == 0.0 && lanczos_vectors.size() < dim) return false;
    solve_tridiagonal(true);
    const double beta_last = betas.empty() ? 0.0 : betas.back();
    const double bound = std::max(opts.tolerance * std::max(scale, 1.0), 1e-14);
    for (int i = 0; i < k; ++i)
      if (std::abs(beta_last * tri_solver.eigenvectors()(j - 1, i)) > bound) return false;
    return true;
  };

  bool done = false;
  for (int step = 0; step < max_steps && !done; ++step) {
    const Eigen::VectorXcd& v = lanczos_vectors.back();
    Eigen::VectorXcd w = op.matrix * v;
    const double alpha = v.dot(w).real();
    alphas.push_back(alpha);
    w -= alpha * v;
    orthogonalize(w, lanczos_vectors);
    double beta = w.norm();
    scale = std::max(scale, std::abs(alpha) + beta);

    if (lanczos_vectors.size() == dim) {
      exhausted = true;
      break;
    }
    if (beta <= 1e-13 * std::max(scale, 1.0)) {
      // Invariant subspace: deflate with a fresh random direction.
      Eigen::VectorXcd fresh = random_unit_vector(dim, rng);
      orthogonalize(fresh, lanczos_vectors);
      const double fresh_norm = fresh.norm();
      if (fresh_norm <= 1e-8) {
        exhausted = true;
        break;
      }
      betas.push_back(0.0);
      lanczos_vectors.push_back(fresh / fresh_norm);
    } else {
      betas.push_back(beta);
      lanczos_vectors.push_back(w / beta);
    }

    if ((step + 1) % opts.check_interval == 0 && converged()) done = true;
  }

  if (!done && !exhausted && !converged()) {
    solve_tridiagonal(true);
    std::ostringstream msg;
    msg << "lowest_eigenpairs: no convergence after " << alphas.size()
        << " iterations; residual estimates:";
    const int j = static_cast<int>(alphas.size());
    for (int i = 0; i < std::min(k, j); ++i)
      msg << ' ' << std::abs(betas.back() * tri_solver.eigenvectors()(j - 1, i));
    throw std::runtime_error(msg.str());
  }

  solve_tridiagonal(true);
  const int j = static_cast<int>(alphas.size());

  EigenReport report;
  report.eigenvalues = tri_solver.eigenvalues().head(k);
  report.eigenvectors.resize(static_cast<Eigen::Index>(dim), k);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dim);
    for (int col = 0; col < j; ++col)
      x += tri_solver.eigenvectors()(col, i) * lanczos_vectors[col];
    x /= x.norm();
    report.eigenvectors.col(i) = x;
  }
  report.residual_norms.resize(k);
  for (int i = 0; i < k; ++i)
    report.residual_norms[i] =
        (op.matrix * report.eigenvectors.col(i) - report.eigenvalues[i] * report.eigenvectors.col(i))
            .norm();
  return report;
}

double hopping_normalization(const LatticeGeometry& g, const CouplingSet& c, TNormalization norm) {
  int i = 0, j = 1;
  if (g.kind() == LatticeKind::ladder && norm == TNormalization::leg && g.n_sites() > 2)
    j = 2;  // same-leg neighbor at distance a
  else if (g.kind() == LatticeKind::triangular2d) {
    const auto bonds = g.nearest_neighbor_bonds();
    i = bonds.front().first;
    j = bonds.front().second;
  } else if (norm == TNormalization::rung) {
    i = 0;
    j = 1;
  }
  const BondValues b = c.bond(g, i, j);
  return 0.5 * (std::abs(b.t_up) + std::abs(b.t_dn));
}

namespace {

double sector_ground_energy(const LatticeGeometry& g, int n_holes, int n_up,
                            const CouplingSet& c, const LanczosOptions& opts) {
  auto basis = make_sector(g.n_sites(), n_holes, n_up);
  const SparseOperator h = build_tj(g, std::move(basis), c);
  return lowest_eigenpairs(h, 1, opts).eigenvalues[0];
}

}  // namespace

BindingReport binding_energy(const LatticeGeometry& g, const CouplingSet& c, int n_magnons,
                             TNormalization norm, const LanczosOptions& opts) {
  if (n_magnons < 1 || n_magnons > 2)
    throw std::invalid_argument("binding_energy: n_magnons must be 1 or 2");
  BindingReport report;
  report.n_magnons = n_magnons;
  report.e_bound = sector_ground_energy(g, 1, n_magnons, c, opts);
  report.e_hole = sector_ground_energy(g, 1, 0, c, opts);
  report.e_magnons = sector_ground_energy(g, 0, n_magnons, c, opts);
  report.e_vacuum = sector_ground_energy(g, 0, 0, c, opts);
  report.binding_energy = report.e_bound - report.e_hole - report.e_magnons + report.e_vacuum;
  report.t_norm = hopping_normalization(g, c, norm);
  report.binding_over_t = report.binding_energy / report.t_norm;
  return report;
}

double eigenstate_hole_magnon_distance(const Eigen::VectorXcd& state, const SectorBasis& basis,
                                       const LatticeGeometry& g) {
  if (basis.n_holes() != 1 || basis.n_up() < 1)
    throw std::invalid_argument("hole-magnon distance needs a 1-hole sector with >= 1 up spin");
  if (state.size() != static_cast<Eigen::Index>(basis.dimension()))
    throw std::invalid_argument("state/basis dimension mismatch");
  double expectation = 0.0;
  for (std::size_t m = 0; m < basis.dimension(); ++m) {
    const double weight = std::norm(state[static_cast<Eigen::Index>(m)]);
    if (weight == 0.0) continue;
    const Configuration& conf = basis.config(m);
    int hole_site = -1;
    for (int s = 0; s < basis.n_sites(); ++s)
      if (conf.at(s) == Local::hole) hole_site = s;
    double mean_distance = 0.0;
    for (int s = 0; s < basis.n_sites(); ++s)
      if (conf.at(s) == Local::up) mean_distance += g.lattice_distance(hole_site, s);
    expectation += weight * mean_distance / basis.n_up();
  }
  return expectation;
}

BoundManifold bound_manifold(const EigenReport& report, const SectorBasis& basis,
                             const LatticeGeometry& g, int size) {
  if (size < 1 || size > report.eigenvalues.size())
    throw std::invalid_argument("bound_manifold: size out of range");
  BoundManifold manifold;
  manifold.hole_magnon_distances.resize(size);
  for (int i = 0; i < size; ++i) {
    manifold.indices.push_back(i);
    manifold.hole_magnon_distances[i] =
        eigenstate_hole_magnon_distance(report.eigenvectors.col(i), basis, g);
  }
  return manifold;
}

}  // namespace tjs
