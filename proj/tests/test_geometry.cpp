#include <doctest.h>

#include <deque>

#include "tjsim/geometry.hpp"

using namespace tjs;

namespace {

// Independent breadth-first search over the nearest-neighbor bond graph.
int bfs_distance(const LatticeGeometry& g, int src, int dst) {
  const auto bonds = g.nearest_neighbor_bonds();
  std::vector<std::vector<int>> adj(g.n_sites());
  for (auto [i, j] : bonds) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<int> dist(g.n_sites(), -1);
  dist[src] = 0;
  std::deque<int> queue{src};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : adj[v])
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  return dist[dst];
}

}  // namespace

TEST_CASE("equilateral ladder has a single nearest-neighbor distance") {
  const double a = 14.7;
  const auto g = LatticeGeometry::ladder(19, a, std::sqrt(3.0) / 2.0 * a);
  CHECK(g.distance(0, 1) == doctest::Approx(a).epsilon(1e-12));
  CHECK(g.distance(0, 2) == doctest::Approx(a).epsilon(1e-12));
  const auto bonds = g.nearest_neighbor_bonds();
  for (auto [i, j] : bonds) CHECK(g.distance(i, j) == doctest::Approx(a).epsilon(1e-9));
}

TEST_CASE("ladder rung distance at h/a = 0.5") {
  const auto g = LatticeGeometry::ladder(19, 19.6, 9.8);
  CHECK(g.distance(0, 1) == doctest::Approx(std::hypot(9.8, 9.8)));  // 13.859 um
  CHECK(g.distance(0, 1) == doctest::Approx(13.8593).epsilon(1e-4));
  CHECK(g.distance(0, 2) == doctest::Approx(19.6));
}

TEST_CASE("h = 0 degenerates to a chain of pitch a/2") {
  const auto g = LatticeGeometry::ladder(19, 14.7, 0.0);
  for (int i = 0; i + 1 < 19; ++i) {
    CHECK(g.position(i).y() == 0.0);
    CHECK(g.distance(i, i + 1) == doctest::Approx(14.7 / 2.0));
  }
}

TEST_CASE("ladder construction rejects bad arguments") {
  CHECK_THROWS_AS(LatticeGeometry::ladder(1, 14.7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LatticeGeometry::ladder(19, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LatticeGeometry::ladder(19, -2.0, 1.0), std::invalid_argument);
}

TEST_CASE("hexagonal clusters") {
  const double a = 14.7;
  SUBCASE("37 sites carry 90 nearest-neighbor bonds") {
    const auto g = LatticeGeometry::triangular2d(37, a);
    int count = 0;
    for (int i = 0; i < 37; ++i)
      for (int j = i + 1; j < 37; ++j)
        if (g.distance(i, j) < a * (1.0 + 1e-9)) ++count;
    CHECK(count == 90);
    CHECK(g.nearest_neighbor_bonds().size() == 90);
  }
  SUBCASE("7-site cluster center has six neighbors") {
    const auto g = LatticeGeometry::triangular2d(7, a);
    int center = -1;
    for (int i = 0; i < 7; ++i)
      if (g.position(i).norm() < 1e-9) center = i;
    REQUIRE(center >= 0);
    int neighbors = 0;
    for (int i = 0; i < 7; ++i)
      if (i != center && g.distance(center, i) < a * (1.0 + 1e-9)) ++neighbors;
    CHECK(neighbors == 6);
  }
  SUBCASE("single site has no bonds") {
    const auto g = LatticeGeometry::triangular2d(1, a);
    CHECK(g.n_sites() == 1);
  }
  SUBCASE("unsupported size needs explicit coordinates") {
    CHECK_THROWS_AS(LatticeGeometry::triangular2d(12, a), std::invalid_argument);
  }
}

TEST_CASE("distance is symmetric and rejects i == j") {
  const auto g = LatticeGeometry::triangular2d(19, 14.7);
  for (int i = 0; i < g.n_sites(); ++i)
    for (int j = i + 1; j < g.n_sites(); ++j) CHECK(g.distance(i, j) == g.distance(j, i));
  CHECK_THROWS_AS(g.distance(3, 3), std::invalid_argument);
}

TEST_CASE("lattice distance") {
  SUBCASE("ladder uses the index difference") {
    const auto g = LatticeGeometry::ladder(19, 14.7, 9.0);
    CHECK(g.lattice_distance(8, 11) == 3);
    CHECK(g.lattice_distance(11, 8) == 3);
    CHECK(g.lattice_distance(4, 4) == 0);
  }
  SUBCASE("rhombus corners are two hops apart") {
    Eigen::Matrix2Xd pos(2, 4);
    const double a = 1.0;
    pos.col(0) << 0.0, 0.0;
    pos.col(1) << a, 0.0;
    pos.col(2) << 0.5 * a, 0.5 * std::sqrt(3.0) * a;
    pos.col(3) << 1.5 * a, 0.5 * std::sqrt(3.0) * a;
    const auto g = LatticeGeometry::triangular2d(pos, a);
    CHECK(g.lattice_distance(0, 3) == 2);
    CHECK(g.lattice_distance(0, 0) == 0);
  }
  SUBCASE("matches brute-force search and the triangle inequality on 37 sites") {
    const auto g = LatticeGeometry::triangular2d(37, 14.7);
    for (int i = 0; i < 37; ++i)
      for (int j = 0; j < 37; ++j) CHECK(g.lattice_distance(i, j) == bfs_distance(g, i, j));
    for (int i = 0; i < 37; ++i)
      for (int j = 0; j < 37; ++j)
        for (int k = 0; k < 37; ++k)
          CHECK(g.lattice_distance(i, j) <=
                g.lattice_distance(i, k) + g.lattice_distance(k, j));
  }
}

TEST_CASE("brillouin grid covers the first zone with exact Gamma and K") {
  const double a = 14.7;
  const BrillouinGrid grid = brillouin_grid(a, 25);
  REQUIRE(grid.gamma_index >= 0);
  CHECK(grid.k_points.col(grid.gamma_index).norm() == 0.0);
  REQUIRE(grid.k_corner_indices.size() == 6);
  for (int idx : grid.k_corner_indices)
    CHECK(grid.k_points.col(idx).norm() == doctest::Approx(4.0 * M_PI / (3.0 * a)));
  // all points inside the zone: no closer reciprocal-lattice image
  const double corner = 4.0 * M_PI / (3.0 * a);
  for (int i = 0; i < grid.k_points.cols(); ++i)
    CHECK(grid.k_points.col(i).norm() <= corner * (1.0 + 1e-9));
  CHECK(grid.k_points.cols() > 300);
}
