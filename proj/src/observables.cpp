#include "tjsim/observables.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>

namespace tjs {

namespace {

void check_state(const Eigen::VectorXcd& psi, const SectorBasis& basis) {
  if (psi.size() != static_cast<Eigen::Index>(basis.dimension()))
    throw std::invalid_argument("state/basis dimension mismatch");
}

void check_site(int site, const SectorBasis& basis) {
  if (site < 0 || site >= basis.n_sites()) throw std::invalid_argument("site index out of range");
}

double sz_val(Local s) { return s == Local::up ? 0.5 : (s == Local::down ? -0.5 : 0.0); }

Configuration swap_sites(const Configuration& c, int i, int j) {
  const Local si = c.at(i), sj = c.at(j);
  return c.with(i, sj).with(j, si);
}

// <n^h_a S^x_b S^x_c> (a < 0 drops the hole projector).  Only the flip-flop
// half of S^x S^x survives inside a fixed-magnetization sector.
double expval_sxsx(const Eigen::VectorXcd& psi, const SectorBasis& basis, int a, int b, int c) {
  std::complex<double> acc = 0.0;
  for (std::size_t m = 0; m < basis.dimension(); ++m) {
    const Configuration& conf = basis.config(m);
    if (a >= 0 && conf.at(a) != Local::hole) continue;
    const Local sb = conf.at(b), sc = conf.at(c);
    const bool opposite = (sb == Local::up && sc == Local::down) ||
                          (sb == Local::down && sc == Local::up);
    if (!opposite) continue;
    const std::size_t target = basis.rank(swap_sites(conf, b, c));
    acc += 0.25 * std::conj(psi[static_cast<Eigen::Index>(target)]) *
           psi[static_cast<Eigen::Index>(m)];
  }
  return acc.real();
}

template <class F>
double expval_diag(const Eigen::VectorXcd& psi, const SectorBasis& basis, F&& f) {
  double acc = 0.0;
  for (std::size_t m = 0; m < basis.dimension(); ++m) {
    const double w = std::norm(psi[static_cast<Eigen::Index>(m)]);
    if (w != 0.0) acc += w * f(basis.config(m));
  }
  return acc;
}

struct KeyLess {
  bool operator()(const std::pair<long long, long long>& a,
                  const std::pair<long long, long long>& b) const {
    return a < b;
  }
};

std::pair<long long, long long> quantize(const Eigen::Vector2d& v) {
  return {std::llround(v.x() * 1e6), std::llround(v.y() * 1e6)};
}

}  // namespace

double density(const Eigen::VectorXcd& psi, const SectorBasis& basis, Local species, int site) {
  check_state(psi, basis);
  check_site(site, basis);
  return expval_diag(psi, basis,
                     [&](const Configuration& c) { return c.at(site) == species ? 1.0 : 0.0; });
}

Eigen::VectorXd density_profile(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                Local species) {
  check_state(psi, basis);
  Eigen::VectorXd profile = Eigen::VectorXd::Zero(basis.n_sites());
  for (std::size_t m = 0; m < basis.dimension(); ++m) {
    const double w = std::norm(psi[static_cast<Eigen::Index>(m)]);
    if (w == 0.0) continue;
    const Configuration& conf = basis.config(m);
    for (int s = 0; s < basis.n_sites(); ++s)
      if (conf.at(s) == species) profile[s] += w;
  }
  return profile;
}

double occupation_pair(const Eigen::VectorXcd& psi, const SectorBasis& basis, Local a, int i,
                       Local b, int j) {
  check_state(psi, basis);
  check_site(i, basis);
  check_site(j, basis);
  return expval_diag(psi, basis, [&](const Configuration& c) {
    return (c.at(i) == a && c.at(j) == b) ? 1.0 : 0.0;
  });
}

Eigen::MatrixXd hole_up_sym_pair_table(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                       bool connected) {
  check_state(psi, basis);
  const int n = basis.n_sites();
  Eigen::MatrixXd hole_up = Eigen::MatrixXd::Zero(n, n);  // <n^h_i n^up_j>
  for (std::size_t m = 0; m < basis.dimension(); ++m) {
    const double w = std::norm(psi[static_cast<Eigen::Index>(m)]);
    if (w == 0.0) continue;
    const Configuration& conf = basis.config(m);
    for (int i = 0; i < n; ++i) {
      if (conf.at(i) != Local::hole) continue;
      for (int j = 0; j < n; ++j)
        if (conf.at(j) == Local::up) hole_up(i, j) += w;
    }
  }
  Eigen::MatrixXd sym = 0.5 * (hole_up + hole_up.transpose());
  if (connected) {
    const Eigen::VectorXd nh = density_profile(psi, basis, Local::hole);
    const Eigen::VectorXd nu = density_profile(psi, basis, Local::up);
    sym -= 0.5 * (nh * nu.transpose() + nu * nh.transpose());
  }
  sym.diagonal().setZero();
  return sym;
}

double sym_connected_pair(const Eigen::VectorXcd& psi, const SectorBasis& basis, int i, int j) {
  check_site(i, basis);
  check_site(j, basis);
  if (i == j) throw std::invalid_argument("sym_connected_pair: i must differ from j");
  const double hu = occupation_pair(psi, basis, Local::hole, i, Local::up, j);
  const double uh = occupation_pair(psi, basis, Local::up, i, Local::hole, j);
  const double nh_i = density(psi, basis, Local::hole, i);
  const double nh_j = density(psi, basis, Local::hole, j);
  const double nu_i = density(psi, basis, Local::up, i);
  const double nu_j = density(psi, basis, Local::up, j);
  return 0.5 * ((hu - nh_i * nu_j) + (uh - nu_i * nh_j));
}

ComDistribution com_distribution(const Eigen::MatrixXd& sym_pairs, const LatticeGeometry& g) {
  const int n = g.n_sites();
  if (sym_pairs.rows() != n || sym_pairs.cols() != n)
    throw std::invalid_argument("com_distribution: table/geometry mismatch");
  std::map<std::pair<long long, long long>, double, KeyLess> buckets;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Eigen::Vector2d mid = 0.5 * (g.position(i) + g.position(j));
      buckets[quantize(mid)] += sym_pairs(i, j);
    }
  ComDistribution dist;
  dist.midpoints.resize(2, static_cast<int>(buckets.size()));
  dist.mass.resize(static_cast<int>(buckets.size()));
  int idx = 0;
  for (const auto& [key, mass] : buckets) {
    dist.midpoints.col(idx) = Eigen::Vector2d(key.first * 1e-6, key.second * 1e-6);
    dist.mass[idx] = mass;
    dist.total_mass += mass;
    ++idx;
  }
  return dist;
}

ComDistribution com_distribution(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                 const LatticeGeometry& g) {
  if (basis.n_holes() != 1)
    throw std::invalid_argument("com_distribution: one-hole sector required");
  return com_distribution(hole_up_sym_pair_table(psi, basis, false), g);
}

DisplacementTable relative_correlation_map(const Eigen::MatrixXd& pair_values,
                                           const LatticeGeometry& g, const std::string& label) {
  const int n = g.n_sites();
  if (pair_values.rows() != n || pair_values.cols() != n)
    throw std::invalid_argument("relative_correlation_map: table/geometry mismatch");
  std::map<std::pair<long long, long long>, std::pair<int, double>, KeyLess> buckets;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Eigen::Vector2d d = g.position(i) - g.position(j);
      auto& [count, sum] = buckets[quantize(d)];
      ++count;
      sum += pair_values(i, j);
    }
  DisplacementTable table;
  table.label = label;
  table.displacements.resize(2, static_cast<int>(buckets.size()));
  table.pair_counts.resize(static_cast<int>(buckets.size()));
  table.values.resize(static_cast<int>(buckets.size()));
  int idx = 0;
  for (const auto& [key, entry] : buckets) {
    table.displacements.col(idx) = Eigen::Vector2d(key.first * 1e-6, key.second * 1e-6);
    table.pair_counts[idx] = entry.first;
    table.values[idx] = entry.second / entry.first;
    ++idx;
  }
  return table;
}

DisplacementTable relative_correlation_map(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                           const LatticeGeometry& g, bool connected) {
  return relative_correlation_map(hole_up_sym_pair_table(psi, basis, connected), g,
                                  connected ? "hole_up_connected_sym" : "hole_up_sym");
}

double displacement_value(const DisplacementTable& table, const Eigen::Vector2d& d, double tol) {
  for (int idx = 0; idx < table.values.size(); ++idx)
    if ((table.displacements.col(idx) - d).norm() <= tol) return table.values[idx];
  throw std::invalid_argument("displacement_value: no pair realizes this displacement");
}

DistanceTable distance_correlation(const Eigen::MatrixXd& pair_values, const LatticeGeometry& g,
                                   const std::string& label) {
  const int n = g.n_sites();
  if (pair_values.rows() != n || pair_values.cols() != n)
    throw std::invalid_argument("distance_correlation: table/geometry mismatch");
  std::map<int, std::pair<int, double>> buckets;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto& [count, sum] = buckets[g.lattice_distance(i, j)];
      ++count;
      sum += pair_values(i, j);
    }
  DistanceTable table;
  table.label = label;
  table.distances.resize(static_cast<int>(buckets.size()));
  table.pair_counts.resize(static_cast<int>(buckets.size()));
  table.values.resize(static_cast<int>(buckets.size()));
  int idx = 0;
  for (const auto& [d, entry] : buckets) {
    table.distances[idx] = d;
    table.pair_counts[idx] = entry.first;
    table.values[idx] = entry.second / entry.first;
    ++idx;
  }
  return table;
}

DistanceTable distance_correlation(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                   const LatticeGeometry& g) {
  return distance_correlation(hole_up_sym_pair_table(psi, basis, false), g, "hole_up_sym");
}

double distance_value(const DistanceTable& table, int d) {
  for (int idx = 0; idx < table.distances.size(); ++idx)
    if (table.distances[idx] == d) return table.values[idx];
  throw std::invalid_argument("distance_value: empty distance class");
}

double exponential_decay_length(const DistanceTable& table, double noise_floor) {
  std::vector<double> xs, ys;
  for (int idx = 0; idx < table.distances.size(); ++idx) {
    if (table.distances[idx] < 1) continue;
    const double v = table.values[idx];
    if (v <= noise_floor || v <= 0.0) continue;
    xs.push_back(table.distances[idx]);
    ys.push_back(std::log(v));
  }
  if (xs.size() < 2)
    throw std::runtime_error("exponential_decay_length: fewer than two usable points");
  const int k = static_cast<int>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int idx = 0; idx < k; ++idx) {
    sx += xs[idx];
    sy += ys[idx];
    sxx += xs[idx] * xs[idx];
    sxy += xs[idx] * ys[idx];
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return -1.0 / slope;
}

namespace {

struct ThreeBodyMoments {
  double m3 = 0.0;        // <h_a S_b S_c>
  double m2_ab = 0.0;     // <h_a S_b>
  double m2_ac = 0.0;     // <h_a S_c>
  double m2_bc = 0.0;     // <S_b S_c>
  double m1_a = 0.0;      // <h_a>
  double m1_b = 0.0;      // <S_b>
  double m1_c = 0.0;      // <S_c>
};

ThreeBodyMoments three_body_moments(const Eigen::VectorXcd& psi, const SectorBasis& basis, int a,
                                    int b, int c, SpinAxis axis) {
  ThreeBodyMoments mm;
  mm.m1_a = expval_diag(psi, basis,
                        [&](const Configuration& conf) { return conf.at(a) == Local::hole; });
  if (axis == SpinAxis::z) {
    mm.m3 = expval_diag(psi, basis, [&](const Configuration& conf) {
      return conf.at(a) == Local::hole ? sz_val(conf.at(b)) * sz_val(conf.at(c)) : 0.0;
    });
    mm.m2_ab = expval_diag(psi, basis, [&](const Configuration& conf) {
      return conf.at(a) == Local::hole ? sz_val(conf.at(b)) : 0.0;
    });
    mm.m2_ac = expval_diag(psi, basis, [&](const Configuration& conf) {
      return conf.at(a) == Local::hole ? sz_val(conf.at(c)) : 0.0;
    });
    mm.m2_bc = expval_diag(psi, basis, [&](const Configuration& conf) {
      return sz_val(conf.at(b)) * sz_val(conf.at(c));
    });
    mm.m1_b = expval_diag(psi, basis,
                          [&](const Configuration& conf) { return sz_val(conf.at(b)); });
    mm.m1_c = expval_diag(psi, basis,
                          [&](const Configuration& conf) { return sz_val(conf.at(c)); });
  } else {
    // S^x moments of odd spin-flip order vanish inside a fixed-magnetization
    // sector; only the flip-flop pieces survive.
    mm.m3 = expval_sxsx(psi, basis, a, b, c);
    mm.m2_bc = expval_sxsx(psi, basis, -1, b, c);
  }
  return mm;
}

}  // namespace

double three_body_hole_spin_spin(const Eigen::VectorXcd& psi, const SectorBasis& basis, int site_h,
                                 int site_i, int site_j, SpinAxis axis,
                                 ThreeBodyConvention convention) {
  check_state(psi, basis);
  check_site(site_h, basis);
  check_site(site_i, basis);
  check_site(site_j, basis);
  if (site_h == site_i || site_h == site_j || site_i == site_j)
    throw std::invalid_argument("three_body_hole_spin_spin: sites must be distinct");

  const std::array<std::array<int, 3>, 3> assignments = {{
      {site_h, site_i, site_j}, {site_i, site_h, site_j}, {site_j, site_i, site_h}}};

  if (convention == ThreeBodyConvention::cumulant) {
    double acc = 0.0;
    for (const auto& [a, b, c] : assignments) {
      const ThreeBodyMoments mm = three_body_moments(psi, basis, a, b, c, axis);
      acc += mm.m3 - mm.m2_ab * mm.m1_c - mm.m2_ac * mm.m1_b - mm.m2_bc * mm.m1_a +
             2.0 * mm.m1_a * mm.m1_b * mm.m1_c;
    }
    return acc / 3.0;
  }

  double acc = 0.0;
  int valid = 0;
  for (const auto& [a, b, c] : assignments) {
    const ThreeBodyMoments mm = three_body_moments(psi, basis, a, b, c, axis);
    if (mm.m1_a <= 1e-14) continue;
    acc += mm.m3 / mm.m1_a - mm.m2_bc;
    ++valid;
  }
  return valid > 0 ? acc / valid : 0.0;
}

namespace {

int site_at(const LatticeGeometry& g, const Eigen::Vector2d& pos, double tol) {
  for (int s = 0; s < g.n_sites(); ++s)
    if ((g.position(s) - pos).norm() <= tol) return s;
  return -1;
}

}  // namespace

double hole_frame_sum(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                      const LatticeGeometry& g, const Eigen::Vector2d& d_i,
                      const Eigen::Vector2d& d_j, SpinAxis axis, ThreeBodyConvention convention) {
  const double tol = 1e-6 * g.a();
  double acc = 0.0;
  int anchors = 0;
  for (int r = 0; r < g.n_sites(); ++r) {
    const int si = site_at(g, g.position(r) + d_i, tol);
    const int sj = site_at(g, g.position(r) + d_j, tol);
    if (si < 0 || sj < 0 || si == sj || si == r || sj == r) continue;
    acc += three_body_hole_spin_spin(psi, basis, r, si, sj, axis, convention);
    ++anchors;
  }
  if (anchors == 0) throw std::invalid_argument("hole_frame_sum: no valid anchor");
  return acc;
}

namespace {

// Graph edges of the lattice: nearest-neighbor bonds in 2D, rung and leg
// bonds (|i-j| in {1,2}) on the ladder.
std::vector<std::pair<int, int>> graph_bonds(const LatticeGeometry& g) {
  if (g.kind() == LatticeKind::triangular2d) return g.nearest_neighbor_bonds();
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i < g.n_sites(); ++i) {
    if (i + 1 < g.n_sites()) bonds.emplace_back(i, i + 1);
    if (i + 2 < g.n_sites()) bonds.emplace_back(i, i + 2);
  }
  return bonds;
}

}  // namespace

double nn_hole_frame_correlation(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                 const LatticeGeometry& g, SpinAxis axis,
                                 ThreeBodyConvention convention) {
  const auto bonds = graph_bonds(g);
  const int n = g.n_sites();
  Eigen::MatrixXi adjacent = Eigen::MatrixXi::Zero(n, n);
  for (auto [i, j] : bonds) adjacent(i, j) = adjacent(j, i) = 1;
  double acc = 0.0;
  int terms = 0;
  for (int r = 0; r < n; ++r)
    for (auto [b, c] : bonds) {
      if (b == r || c == r) continue;
      if (!adjacent(r, b) || !adjacent(r, c)) continue;
      acc += three_body_hole_spin_spin(psi, basis, r, b, c, axis, convention);
      ++terms;
    }
  if (terms == 0) throw std::invalid_argument("nn_hole_frame_correlation: no triangle plaquettes");
  return acc / terms;
}

namespace {

Eigen::MatrixXd spin_spin_connected_table(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                          SpinAxis axis) {
  check_state(psi, basis);
  const int n = basis.n_sites();
  Eigen::MatrixXd table(n, n);
  const Eigen::VectorXd nh = density_profile(psi, basis, Local::hole);
  if (axis == SpinAxis::x) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) table(i, j) = table(j, i) = expval_sxsx(psi, basis, -1, i, j);
  } else {
    Eigen::VectorXd sz = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd szsz = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t m = 0; m < basis.dimension(); ++m) {
      const double w = std::norm(psi[static_cast<Eigen::Index>(m)]);
      if (w == 0.0) continue;
      const Configuration& conf = basis.config(m);
      for (int i = 0; i < n; ++i) {
        const double si = sz_val(conf.at(i));
        sz[i] += w * si;
        for (int j = i + 1; j < n; ++j) szsz(i, j) += w * si * sz_val(conf.at(j));
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) table(i, j) = table(j, i) = szsz(i, j) - sz[i] * sz[j];
  }
  for (int i = 0; i < n; ++i) table(i, i) = 0.25 * (1.0 - nh[i]);
  return table;
}

}  // namespace

Eigen::MatrixXd sxsx_connected_table(const Eigen::VectorXcd& psi, const SectorBasis& basis) {
  return spin_spin_connected_table(psi, basis, SpinAxis::x);
}

Eigen::MatrixXd szsz_connected_table(const Eigen::VectorXcd& psi, const SectorBasis& basis) {
  return spin_spin_connected_table(psi, basis, SpinAxis::z);
}

Eigen::VectorXd structure_factor(const Eigen::MatrixXd& correlations, const LatticeGeometry& g,
                                 const BrillouinGrid& grid) {
  const int n = g.n_sites();
  if (correlations.rows() != n || correlations.cols() != n)
    throw std::invalid_argument("structure_factor: table/geometry mismatch");
  Eigen::VectorXd out(grid.k_points.cols());
  for (int kk = 0; kk < grid.k_points.cols(); ++kk) {
    const Eigen::Vector2d k = grid.k_points.col(kk);
    Eigen::VectorXcd u(n);
    for (int i = 0; i < n; ++i) {
      const double phase = k.dot(g.position(i));
      u[i] = std::complex<double>(std::cos(phase), std::sin(phase));
    }
    const std::complex<double> s = u.dot(correlations * u);  // u^dagger C u
    out[kk] = std::abs(s) / n;
  }
  return out;
}

SeparationHistogram magnon_pair_histogram(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                                          const LatticeGeometry& g) {
  check_state(psi, basis);
  if (basis.n_up() != 2)
    throw std::invalid_argument("magnon_pair_histogram: two-magnon sector required");
  std::map<int, double> buckets;
  for (std::size_t m = 0; m < basis.dimension(); ++m) {
    const double w = std::norm(psi[static_cast<Eigen::Index>(m)]);
    if (w == 0.0) continue;
    const Configuration& conf = basis.config(m);
    int first = -1, second = -1;
    for (int s = 0; s < basis.n_sites(); ++s)
      if (conf.at(s) == Local::up) (first < 0 ? first : second) = s;
    buckets[g.lattice_distance(first, second)] += w;
  }
  SeparationHistogram hist;
  hist.separations.resize(static_cast<int>(buckets.size()));
  hist.probabilities.resize(static_cast<int>(buckets.size()));
  int idx = 0;
  for (const auto& [sep, p] : buckets) {
    hist.separations[idx] = sep;
    hist.probabilities[idx] = p;
    ++idx;
  }
  return hist;
}

DefectPatternHistogram three_defect_histogram(const Eigen::VectorXcd& psi,
                                              const SectorBasis& basis) {
  check_state(psi, basis);
  if (basis.n_holes() + basis.n_up() != 3 || basis.n_holes() != 1)
    throw std::invalid_argument("three_defect_histogram: 1H2M sector required");
  std::map<std::array<int, 2>, double> buckets;
  for (std::size_t m = 0; m < basis.dimension(); ++m) {
    const double w = std::norm(psi[static_cast<Eigen::Index>(m)]);
    if (w == 0.0) continue;
    const Configuration& conf = basis.config(m);
    std::vector<int> defects;
    for (int s = 0; s < basis.n_sites(); ++s)
      if (conf.at(s) != Local::down) defects.push_back(s);
    std::array<int, 2> gaps = {defects[1] - defects[0], defects[2] - defects[1]};
    if (gaps[0] > gaps[1]) std::swap(gaps[0], gaps[1]);
    buckets[gaps] += w;
  }
  DefectPatternHistogram hist;
  hist.probabilities.resize(static_cast<int>(buckets.size()));
  int idx = 0;
  for (const auto& [gaps, p] : buckets) {
    hist.gap_patterns.push_back(gaps);
    hist.probabilities[idx] = p;
    ++idx;
  }
  return hist;
}

}  // namespace tjs
