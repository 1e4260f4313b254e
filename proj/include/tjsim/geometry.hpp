#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace tjs {

enum class LatticeKind { ladder, triangular2d };

std::string to_string(LatticeKind kind);
LatticeKind lattice_kind_from_string(const std::string& s);

/// Site layout of a triangular ladder or a 2D triangular cluster.
/// Positions are in micrometers; immutable after construction.
class LatticeGeometry {
public:
  /// Zig-zag triangular ladder: site i sits at (i*a/2, (i%2)*h), so
  /// consecutive indices alternate legs and |i-j|=2 pairs are same-leg
  /// neighbors at distance a.
  static LatticeGeometry ladder(int n_sites, double a, double h);

  /// Centered hexagonal cluster of the triangular lattice
  /// (n_sites in {1, 7, 19, 37, ...}).
  static LatticeGeometry triangular2d(int n_sites, double a);

  /// Arbitrary triangular cluster from an explicit coordinate list.
  static LatticeGeometry triangular2d(Eigen::Matrix2Xd positions, double a);

  LatticeKind kind() const { return kind_; }
  int n_sites() const { return static_cast<int>(positions_.cols()); }
  double a() const { return a_; }
  double h() const { return h_; }

  Eigen::Vector2d position(int i) const { return positions_.col(i); }
  const Eigen::Matrix2Xd& positions() const { return positions_; }

  /// Euclidean distance in micrometers; requires i != j.
  double distance(int i, int j) const;

  /// Ladder: |i - j|.  2D: minimal hop count along nearest-neighbor bonds.
  int lattice_distance(int i, int j) const;

  /// Unordered pairs at the nearest-neighbor distance (within rel_tol).
  std::vector<std::pair<int, int>> nearest_neighbor_bonds(double rel_tol = 1e-6) const;

private:
  LatticeGeometry(LatticeKind kind, Eigen::Matrix2Xd positions, double a, double h);

  void check_site(int i) const;
  void build_hop_distances();

  LatticeKind kind_;
  Eigen::Matrix2Xd positions_;
  double a_ = 0.0;
  double h_ = 0.0;
  Eigen::MatrixXi hop_distance_;  // filled for triangular2d only
};

inline double distance(const LatticeGeometry& g, int i, int j) { return g.distance(i, j); }
inline int lattice_distance(const LatticeGeometry& g, int i, int j) {
  return g.lattice_distance(i, j);
}

/// k-point mesh covering the first Brillouin zone of the triangular lattice.
/// Γ and the six K corners are present exactly.
struct BrillouinGrid {
  Eigen::Matrix2Xd k_points;        // rad/um
  std::vector<std::string> labels;  // "" except for the tagged Γ and K entries
  int gamma_index = -1;
  std::vector<int> k_corner_indices;
};

BrillouinGrid brillouin_grid(double lattice_spacing, int resolution = 25);

}  // namespace tjs
