#include "tjsim/geometry.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace tjs {

std::string to_string(LatticeKind kind) {
  return kind == LatticeKind::ladder ? "ladder" : "triangular2d";
}

LatticeKind lattice_kind_from_string(const std::string& s) {
  if (s == "ladder") return LatticeKind::ladder;
  if (s == "triangular2d") return LatticeKind::triangular2d;
  throw std::invalid_argument("unknown lattice kind: " + s);
}

LatticeGeometry::LatticeGeometry(LatticeKind kind, Eigen::Matrix2Xd positions, double a, double h)
    : kind_(kind), positions_(std::move(positions)), a_(a), h_(h) {
  const int n = n_sites();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((positions_.col(i) - positions_.col(j)).norm() <= 0.0)
        throw std::invalid_argument("geometry: coincident site positions");
  if (kind_ == LatticeKind::triangular2d) build_hop_distances();
}

LatticeGeometry LatticeGeometry::ladder(int n_sites, double a, double h) {
  if (n_sites < 2) throw std::invalid_argument("ladder: n_sites must be >= 2");
  if (a <= 0.0) throw std::invalid_argument("ladder: spacing a must be positive");
  if (h < 0.0) throw std::invalid_argument("ladder: inter-leg spacing h must be >= 0");
  Eigen::Matrix2Xd pos(2, n_sites);
  for (int i = 0; i < n_sites; ++i) pos.col(i) = Eigen::Vector2d(0.5 * a * i, (i % 2) * h);
  return LatticeGeometry(LatticeKind::ladder, std::move(pos), a, h);
}

namespace {

// Centered hexagonal numbers: 1, 7, 19, 37, ...
int hexagon_rings(int n_sites) {
  for (int k = 0;; ++k) {
    const int n = 3 * k * (k + 1) + 1;
    if (n == n_sites) return k;
    if (n > n_sites) return -1;
  }
}

}  // namespace

LatticeGeometry LatticeGeometry::triangular2d(int n_sites, double a) {
  if (a <= 0.0) throw std::invalid_argument("triangular2d: spacing a must be positive");
  const int rings = hexagon_rings(n_sites);
  if (rings < 0)
    throw std::invalid_argument(
        "triangular2d: n_sites is not a centered hexagonal count (1, 7, 19, 37, ...); "
        "pass explicit coordinates instead");
  const Eigen::Vector2d a1(a, 0.0);
  const Eigen::Vector2d a2(0.5 * a, 0.5 * std::sqrt(3.0) * a);
  Eigen::Matrix2Xd pos(2, n_sites);
  int idx = 0;
  for (int q = -rings; q <= rings; ++q)
    for (int r = -rings; r <= rings; ++r) {
      if (std::abs(q + r) > rings) continue;
      pos.col(idx++) = q * a1 + r * a2;
    }
  return LatticeGeometry(LatticeKind::triangular2d, std::move(pos), a, 0.0);
}

LatticeGeometry LatticeGeometry::triangular2d(Eigen::Matrix2Xd positions, double a) {
  if (a <= 0.0) throw std::invalid_argument("triangular2d: spacing a must be positive");
  if (positions.cols() < 1) throw std::invalid_argument("triangular2d: empty coordinate list");
  return LatticeGeometry(LatticeKind::triangular2d, std::move(positions), a, 0.0);
}

void LatticeGeometry::check_site(int i) const {
  if (i < 0 || i >= n_sites()) throw std::invalid_argument("geometry: site index out of range");
}

double LatticeGeometry::distance(int i, int j) const {
  check_site(i);
  check_site(j);
  if (i == j) throw std::invalid_argument("geometry: distance requires i != j");
  return (positions_.col(i) - positions_.col(j)).norm();
}

void LatticeGeometry::build_hop_distances() {
  const int n = n_sites();
  const auto bonds = nearest_neighbor_bonds();
  std::vector<std::vector<int>> adjacency(n);
  for (auto [i, j] : bonds) {
    adjacency[i].push_back(j);
    adjacency[j].push_back(i);
  }
  hop_distance_.setConstant(n, n, -1);
  for (int src = 0; src < n; ++src) {
    hop_distance_(src, src) = 0;
    std::deque<int> queue{src};
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int w : adjacency[v])
        if (hop_distance_(src, w) < 0) {
          hop_distance_(src, w) = hop_distance_(src, v) + 1;
          queue.push_back(w);
        }
    }
  }
}

int LatticeGeometry::lattice_distance(int i, int j) const {
  check_site(i);
  check_site(j);
  if (kind_ == LatticeKind::ladder) return std::abs(i - j);
  const int d = hop_distance_(i, j);
  if (d < 0) throw std::runtime_error("lattice_distance: sites not connected by bonds");
  return d;
}

std::vector<std::pair<int, int>> LatticeGeometry::nearest_neighbor_bonds(double rel_tol) const {
  const int n = n_sites();
  double min_dist = std::numeric_limits<double>::max();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) min_dist = std::min(min_dist, distance(i, j));
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (distance(i, j) <= min_dist * (1.0 + rel_tol)) bonds.emplace_back(i, j);
  return bonds;
}

BrillouinGrid brillouin_grid(double lattice_spacing, int resolution) {
  if (lattice_spacing <= 0.0) throw std::invalid_argument("brillouin_grid: spacing must be positive");
  if (resolution < 1) throw std::invalid_argument("brillouin_grid: resolution must be >= 1");
  const double a = lattice_spacing;
  // Reciprocal vectors of the triangular Bravais lattice spanned by
  // a1 = a(1,0), a2 = a(1/2, sqrt(3)/2).
  const Eigen::Vector2d b1 = (2.0 * M_PI / a) * Eigen::Vector2d(1.0, -1.0 / std::sqrt(3.0));
  const Eigen::Vector2d b2 = (2.0 * M_PI / a) * Eigen::Vector2d(0.0, 2.0 / std::sqrt(3.0));
  std::vector<Eigen::Vector2d> shell;
  for (int m = -1; m <= 1; ++m)
    for (int n = -1; n <= 1; ++n) {
      if (m == 0 && n == 0) continue;
      shell.push_back(m * b1 + n * b2);
    }
  const auto in_first_zone = [&](const Eigen::Vector2d& k, double slack) {
    for (const auto& g : shell)
      if (k.dot(g) > 0.5 * g.squaredNorm() * (1.0 + slack)) return false;
    return true;
  };

  const double k_corner = 4.0 * M_PI / (3.0 * a);
  std::vector<Eigen::Vector2d> points;
  std::vector<std::string> labels;
  BrillouinGrid grid;

  points.emplace_back(0.0, 0.0);
  labels.emplace_back("Gamma");
  grid.gamma_index = 0;
  for (int c = 0; c < 6; ++c) {
    const double phi = M_PI * c / 3.0;
    points.emplace_back(k_corner * std::cos(phi), k_corner * std::sin(phi));
    labels.emplace_back("K");
    grid.k_corner_indices.push_back(static_cast<int>(points.size()) - 1);
  }

  const double k_max = k_corner;
  for (int ix = 0; ix < resolution; ++ix)
    for (int iy = 0; iy < resolution; ++iy) {
      Eigen::Vector2d k(-k_max + 2.0 * k_max * ix / std::max(1, resolution - 1),
                        -k_max + 2.0 * k_max * iy / std::max(1, resolution - 1));
      if (!in_first_zone(k, 1e-9)) continue;
      bool duplicate = false;
      for (const auto& p : points)
        if ((p - k).norm() < 1e-9 * (1.0 + k.norm())) {
          duplicate = true;
          break;
        }
      if (duplicate) continue;
      points.push_back(k);
      labels.emplace_back("");
    }

  grid.k_points.resize(2, static_cast<int>(points.size()));
  for (int i = 0; i < static_cast<int>(points.size()); ++i) grid.k_points.col(i) = points[i];
  grid.labels = std::move(labels);
  return grid;
}

}  // namespace tjs
