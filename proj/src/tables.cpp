#include "tjsim/tables.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tjs {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os.precision(17);
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
  return is;
}

}  // namespace

void write_table(const std::filesystem::path& path, const std::vector<std::string>& comments,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) {
  auto os = open_out(path);
  for (const auto& c : comments) os << "# " << c << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i)
    os << columns[i] << (i + 1 < columns.size() ? '\t' : '\n');
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << row[i] << (i + 1 < row.size() ? '\t' : '\n');
  }
}

void write_distance_table(const std::filesystem::path& path, const DistanceTable& table) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < table.distances.size(); ++i)
    rows.push_back({static_cast<double>(table.distances[i]),
                    static_cast<double>(table.pair_counts[i]), table.values[i]});
  write_table(path, {table.label}, {"distance", "pairs", "value"}, rows);
}

void write_displacement_table(const std::filesystem::path& path, const DisplacementTable& table) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < table.values.size(); ++i)
    rows.push_back({table.displacements(0, i), table.displacements(1, i),
                    static_cast<double>(table.pair_counts[i]), table.values[i]});
  write_table(path, {table.label}, {"dx_um", "dy_um", "pairs", "value"}, rows);
}

void write_com_distribution(const std::filesystem::path& path, const ComDistribution& dist) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < dist.mass.size(); ++i)
    rows.push_back({dist.midpoints(0, i), dist.midpoints(1, i), dist.mass[i]});
  write_table(path, {"center-of-mass distribution"}, {"x_um", "y_um", "mass"}, rows);
}

void write_pair_table(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                      const std::string& label) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < values.rows(); ++i)
    for (int j = 0; j < values.cols(); ++j)
      rows.push_back({static_cast<double>(i), static_cast<double>(j), values(i, j)});
  write_table(path, {label}, {"i", "j", "value"}, rows);
}

void write_density_profiles(const std::filesystem::path& path, const Eigen::VectorXd& down,
                            const Eigen::VectorXd& up, const Eigen::VectorXd& hole) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < down.size(); ++i)
    rows.push_back({static_cast<double>(i), down[i], up[i], hole[i]});
  write_table(path, {"site-resolved populations"}, {"site", "n_down", "n_up", "n_hole"}, rows);
}

void write_structure_factor(const std::filesystem::path& path, const BrillouinGrid& grid,
                            const Eigen::VectorXd& values) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < values.size(); ++i)
    rows.push_back({grid.k_points(0, i), grid.k_points(1, i), values[i]});
  auto os = open_out(path);
  os << "# transverse spin structure factor |S(k)|\n";
  os << "kx\tky\tvalue\tlabel\n";
  for (int i = 0; i < values.size(); ++i)
    os << grid.k_points(0, i) << '\t' << grid.k_points(1, i) << '\t' << values[i] << '\t'
       << (grid.labels[i].empty() ? "-" : grid.labels[i]) << '\n';
}

void write_shot_batch(const std::filesystem::path& path, const ShotBatch& batch) {
  auto os = open_out(path);
  os << "# tjsim shots, '1' = imaged\n";
  os << "basis " << to_string(batch.tag) << '\n';
  os << "n_sites " << batch.n_sites << '\n';
  os << "n_shots " << batch.n_shots() << '\n';
  os << "seed " << batch.seed << '\n';
  for (int shot = 0; shot < batch.n_shots(); ++shot) {
    for (int s = 0; s < batch.n_sites; ++s) os << (batch.outcomes(shot, s) ? '1' : '0');
    os << '\n';
  }
}

ShotBatch read_shot_batch(const std::filesystem::path& path) {
  auto is = open_in(path);
  ShotBatch batch;
  std::string line;
  int n_shots = -1;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "basis") {
      std::string tag;
      ss >> tag;
      batch.tag = measurement_basis_from_string(tag);
    } else if (key == "n_sites") {
      ss >> batch.n_sites;
    } else if (key == "n_shots") {
      ss >> n_shots;
    } else if (key == "seed") {
      ss >> batch.seed;
    } else {
      break;  // first data row
    }
  }
  if (batch.n_sites <= 0 || n_shots <= 0)
    throw std::runtime_error("malformed shot file: " + path.string());
  batch.outcomes.resize(n_shots, batch.n_sites);
  int shot = 0;
  do {
    if (line.empty() || line[0] == '#') continue;
    if (static_cast<int>(line.size()) < batch.n_sites)
      throw std::runtime_error("short shot record in " + path.string());
    for (int s = 0; s < batch.n_sites; ++s) batch.outcomes(shot, s) = line[s] == '1' ? 1 : 0;
    if (++shot == n_shots) break;
  } while (std::getline(is, line));
  if (shot != n_shots) throw std::runtime_error("truncated shot file: " + path.string());
  return batch;
}

void write_state(const std::filesystem::path& path, const Eigen::VectorXcd& psi,
                 const SectorBasis& basis, double time) {
  if (psi.size() != static_cast<Eigen::Index>(basis.dimension()))
    throw std::invalid_argument("write_state: state/basis dimension mismatch");
  auto os = open_out(path);
  os << "# tjsim sector state\n";
  os << "time " << time << '\n';
  os << "sector " << basis.n_sites() << ' ' << basis.n_holes() << ' ' << basis.n_up() << '\n';
  os << "dim " << basis.dimension() << '\n';
  for (Eigen::Index m = 0; m < psi.size(); ++m)
    os << m << ' ' << psi[m].real() << ' ' << psi[m].imag() << '\n';
}

StateFile read_state(const std::filesystem::path& path) {
  auto is = open_in(path);
  StateFile file;
  std::string line;
  Eigen::Index dim = -1;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "time") {
      ss >> file.time;
    } else if (key == "sector") {
      ss >> file.n_sites >> file.n_holes >> file.n_up;
    } else if (key == "dim") {
      ss >> dim;
      break;
    }
  }
  if (dim < 0) throw std::runtime_error("malformed state file: " + path.string());
  file.amplitudes = Eigen::VectorXcd::Zero(dim);
  Eigen::Index count = 0;
  while (count < dim && std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    Eigen::Index m;
    double re, im;
    if (!(ss >> m >> re >> im) || m < 0 || m >= dim)
      throw std::runtime_error("bad amplitude row in " + path.string());
    file.amplitudes[m] = std::complex<double>(re, im);
    ++count;
  }
  if (count != dim) throw std::runtime_error("truncated state file: " + path.string());
  return file;
}

nlohmann::json geometry_to_json(const LatticeGeometry& g) {
  nlohmann::json j;
  j["kind"] = to_string(g.kind());
  j["n_sites"] = g.n_sites();
  j["a_um"] = g.a();
  if (g.kind() == LatticeKind::ladder) j["h_um"] = g.h();
  nlohmann::json positions = nlohmann::json::array();
  for (int i = 0; i < g.n_sites(); ++i)
    positions.push_back({g.position(i).x(), g.position(i).y()});
  j["positions_um"] = positions;
  return j;
}

LatticeGeometry geometry_from_json(const nlohmann::json& j) {
  const LatticeKind kind = lattice_kind_from_string(j.at("kind").get<std::string>());
  const double a = j.at("a_um").get<double>();
  if (kind == LatticeKind::ladder)
    return LatticeGeometry::ladder(j.at("n_sites").get<int>(), a, j.at("h_um").get<double>());
  if (j.contains("positions_um")) {
    const auto& positions = j.at("positions_um");
    Eigen::Matrix2Xd pos(2, positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
      pos(0, static_cast<int>(i)) = positions[i][0].get<double>();
      pos(1, static_cast<int>(i)) = positions[i][1].get<double>();
    }
    return LatticeGeometry::triangular2d(std::move(pos), a);
  }
  return LatticeGeometry::triangular2d(j.at("n_sites").get<int>(), a);
}

nlohmann::json boltzmann_to_json(const BoltzmannModel& model) {
  nlohmann::json j;
  j["n_sites"] = model.n_sites();
  j["region"] = model.region();
  j["constraints"] = {{"max_holes", model.constraints().max_holes},
                      {"sz_min", model.constraints().sz_min},
                      {"sz_max", model.constraints().sz_max},
                      {"max_ground", model.constraints().max_ground}};
  nlohmann::json fields = nlohmann::json::array();
  for (int s = 0; s < 5; ++s) {
    nlohmann::json row = nlohmann::json::array();
    for (int site = 0; site < model.n_sites(); ++site) row.push_back(model.field(s, site));
    fields.push_back(row);
  }
  j["fields"] = fields;
  nlohmann::json couplings = nlohmann::json::array();
  for (int s = 0; s < 5; ++s)
    for (std::size_t a = 0; a < model.region().size(); ++a)
      for (std::size_t b = a + 1; b < model.region().size(); ++b) {
        const double v = model.coupling(s, model.region()[a], model.region()[b]);
        if (v != 0.0)
          couplings.push_back({{"state", s},
                               {"i", model.region()[a]},
                               {"j", model.region()[b]},
                               {"value", v}});
      }
  j["couplings"] = couplings;
  return j;
}

BoltzmannModel boltzmann_from_json(const nlohmann::json& j) {
  SpaceConstraints constraints;
  if (j.contains("constraints")) {
    const auto& c = j.at("constraints");
    constraints.max_holes = c.value("max_holes", constraints.max_holes);
    constraints.sz_max = c.value("sz_max", constraints.sz_max);
    constraints.max_ground = c.value("max_ground", constraints.max_ground);
    if (c.contains("sz_min")) {
      constraints.sz_min = c.at("sz_min").get<double>();
      constraints.sz_min_is_set = true;
    }
  }
  BoltzmannModel model(j.at("n_sites").get<int>(), j.at("region").get<std::vector<int>>(),
                       constraints);
  if (j.contains("fields")) {
    const auto& fields = j.at("fields");
    for (int s = 0; s < 5; ++s)
      for (int site = 0; site < model.n_sites(); ++site)
        model.set_field(s, site, fields[s][site].get<double>());
  }
  for (const auto& c : j.value("couplings", nlohmann::json::array()))
    model.set_coupling(c.at("state").get<int>(), c.at("i").get<int>(), c.at("j").get<int>(),
                       c.at("value").get<double>());
  return model;
}

}  // namespace tjs
