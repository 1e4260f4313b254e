#include "tjsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "tjsim/dynamics.hpp"
#include "tjsim/reconstruction.hpp"
#include "tjsim/spectra.hpp"
#include "tjsim/tables.hpp"
#include "tjsim/toymodel.hpp"

namespace tjs::run {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& message) {
  throw std::runtime_error("config error at '" + path + "': " + message);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) config_error(path + "." + key, "missing field");
  return j.at(key);
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

std::string file_hash(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot hash missing file: " + path.string());
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return hex64(fnv1a(buffer.str()));
}

void merge_overlay(json& base, const json& overlay) {
  if (!overlay.is_object() || !base.is_object()) {
    base = overlay;
    return;
  }
  for (const auto& [key, value] : overlay.items()) {
    if (base.contains(key))
      merge_overlay(base[key], value);
    else
      base[key] = value;
  }
}

// Simple deterministic worker pool: items are processed by index.
void parallel_for(int n_items, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, n_items));
  if (threads == 1) {
    for (int i = 0; i < n_items; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i = next.fetch_add(1); i < n_items; i = next.fetch_add(1)) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Manifest {
  fs::path dir;
  json doc;

  void add_artifact(const std::string& name) { doc["artifacts"].push_back(name); }
  void add_input(const fs::path& path) { doc["inputs"][path.filename().string()] = file_hash(path); }
  void save() const {
    std::ofstream os(dir / "manifest.json");
    os << doc.dump(2) << '\n';
  }
};

Manifest prepare_out_dir(const RunOptions& options, const json& config,
                         const std::string& subcommand) {
  fs::create_directories(options.out_dir);
  const std::string hash = config_hash(config);
  const fs::path manifest_path = options.out_dir / "manifest.json";
  if (fs::exists(manifest_path) && !options.force) {
    std::ifstream is(manifest_path);
    json existing;
    is >> existing;
    if (existing.value("config_hash", "") != hash)
      throw std::runtime_error(
          "output directory holds results for a different config; pass --force to overwrite");
  }
  Manifest manifest;
  manifest.dir = options.out_dir;
  manifest.doc = {{"subcommand", subcommand}, {"config_hash", hash},
                  {"config", config},        {"completed", false},
                  {"artifacts", json::array()}, {"inputs", json::object()},
                  {"version", "0.1.0"}};
  manifest.save();
  return manifest;
}

// ---- config parsing -------------------------------------------------------

LatticeGeometry parse_geometry(const json& config) {
  if (!config.contains("geometry")) config_error("geometry", "missing block");
  try {
    return geometry_from_json(config.at("geometry"));
  } catch (const std::exception& e) {
    config_error("geometry", e.what());
  }
}

CouplingSet parse_couplings(const json& config, const LatticeGeometry& g) {
  CouplingSet c;
  if (!config.contains("couplings")) return c;
  const json& j = config.at("couplings");
  const std::string preset = j.value("preset", std::string("equilateral"));
  bool ladder_overrides = j.value("ladder_table_overrides", false);
  BondValues rung, leg;
  if (preset == "equilateral") {
    c = CouplingSet::equilateral_reference();
    rung = equilateral_rung_values();
    leg = equilateral_leg_values();
  } else if (preset == "half_ratio") {
    c = CouplingSet::half_ratio_reference();
    rung = half_ratio_rung_values();
    leg = half_ratio_leg_values();
  } else if (preset == "none") {
    ladder_overrides = false;
  } else {
    config_error("couplings.preset", "expected equilateral, half_ratio or none");
  }
  if (j.contains("t_up_mhz")) c.t_up = mhz(j.at("t_up_mhz").get<double>());
  if (j.contains("t_dn_mhz")) c.t_dn = mhz(j.at("t_dn_mhz").get<double>());
  if (j.contains("j_perp_mhz")) c.j_perp = mhz(j.at("j_perp_mhz").get<double>());
  if (j.contains("j_z_mhz")) c.j_z = mhz(j.at("j_z_mhz").get<double>());
  if (j.contains("a_ref_um")) c.a_ref = j.at("a_ref_um").get<double>();
  const std::string sign = j.value("sign_mode", std::string("frustrated"));
  if (sign == "frustrated")
    c.sign_mode = SignMode::frustrated;
  else if (sign == "reversed_hopping")
    c.sign_mode = SignMode::reversed_hopping;
  else if (sign == "fully_reversed")
    c.sign_mode = SignMode::fully_reversed;
  else
    config_error("couplings.sign_mode", "unknown mode " + sign);
  if (ladder_overrides) c = with_ladder_table_overrides(std::move(c), g, rung, leg);
  return c;
}

struct TargetState {
  std::vector<int> hole_sites, magnon_sites;
  Configuration configuration;
  BasisPtr basis;
};

TargetState parse_state(const json& config, const LatticeGeometry& g) {
  if (!config.contains("state")) config_error("state", "missing block");
  const json& j = config.at("state");
  TargetState target;
  target.hole_sites = j.value("hole_sites", std::vector<int>{});
  target.magnon_sites = j.value("magnon_sites", std::vector<int>{});
  Configuration c;
  for (int s : target.hole_sites) {
    if (s < 0 || s >= g.n_sites()) config_error("state.hole_sites", "site out of range");
    c = c.with(s, Local::hole);
  }
  for (int s : target.magnon_sites) {
    if (s < 0 || s >= g.n_sites()) config_error("state.magnon_sites", "site out of range");
    if (c.at(s) == Local::hole) config_error("state", "site assigned twice");
    c = c.with(s, Local::up);
  }
  target.configuration = c;
  target.basis = make_sector(g.n_sites(), static_cast<int>(target.hole_sites.size()),
                             static_cast<int>(target.magnon_sites.size()));
  return target;
}

LightShiftProgram parse_light_shift(const json& config, const TargetState& target) {
  LightShiftProgram p;
  p.magnon_sites = target.magnon_sites;
  p.hole_sites = target.hole_sites;
  if (!config.contains("light_shift")) return p;
  const json& j = config.at("light_shift");
  p.delta0 = mhz(j.value("delta0_mhz", 25.0));
  p.delta_knee = mhz(j.value("delta_knee_mhz", 5.0));
  p.t_knee = j.value("t_knee_us", 1.0);
  p.tau = j.value("tau_us", 1.0);
  p.sign = j.value("sign", 1.0);
  p.delta_up_scale = j.value("delta_up_scale", 1.0);
  return p;
}

EvolutionSchedule parse_schedule(const json& config) {
  EvolutionSchedule schedule;
  if (!config.contains("evolution")) config_error("evolution", "missing block");
  const json& j = config.at("evolution");
  schedule.t_end = require(j, "t_end_us", "evolution").get<double>();
  schedule.snapshot_times = j.value("snapshots_us", std::vector<double>{schedule.t_end});
  schedule.max_step = j.value("max_step_us", 0.01);
  schedule.krylov_dim = j.value("krylov_dim", 20);
  schedule.tolerance = j.value("tolerance", 1e-10);
  return schedule;
}

ErrorRates parse_rates(const json& j) {
  ErrorRates r;
  r.eps_m = j.value("eps_m", r.eps_m);
  r.eps_s = j.value("eps_s", r.eps_s);
  r.eps_g = j.value("eps_g", r.eps_g);
  r.eps_pp = j.value("eps_pp", r.eps_pp);
  r.eps_gpp = j.value("eps_gpp", r.eps_gpp);
  r.eps_bbr_sp = j.value("eps_bbr_sp", r.eps_bbr_sp);
  r.eps_bbr_p = j.value("eps_bbr_p", r.eps_bbr_p);
  r.eps_deex = j.value("eps_deex", r.eps_deex);
  return r;
}

std::optional<ErrorChannel> parse_channel(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string mode = j.get<std::string>();
    if (mode == "ideal") return std::nullopt;
    if (mode == "default") return ErrorChannel();
    config_error(path, "expected 'ideal', 'default' or a rates object");
  }
  return ErrorChannel(parse_rates(j));
}

std::uint64_t effective_seed(const json& config, const RunOptions& options,
                             std::uint64_t fallback) {
  if (options.seed_override) return *options.seed_override;
  return config.value("seed", fallback);
}

// Ground-state observables shared by the ground and ramp drivers.
void write_state_observables(Manifest& manifest, const fs::path& dir, const std::string& stem,
                             const Eigen::VectorXcd& psi, const SectorBasis& basis,
                             const LatticeGeometry& g) {
  write_density_profiles(dir / (stem + "_densities.tsv"),
                         density_profile(psi, basis, Local::down),
                         density_profile(psi, basis, Local::up),
                         density_profile(psi, basis, Local::hole));
  manifest.add_artifact(stem + "_densities.tsv");
  if (basis.n_holes() == 1 && basis.n_up() >= 1) {
    write_pair_table(dir / (stem + "_pair_sym_connected.tsv"),
                     hole_up_sym_pair_table(psi, basis, true), "sym connected hole-up pairs");
    manifest.add_artifact(stem + "_pair_sym_connected.tsv");
    write_com_distribution(dir / (stem + "_com.tsv"), com_distribution(psi, basis, g));
    manifest.add_artifact(stem + "_com.tsv");
    write_distance_table(dir / (stem + "_distance_correlation.tsv"),
                         distance_correlation(psi, basis, g));
    manifest.add_artifact(stem + "_distance_correlation.tsv");
    write_displacement_table(dir / (stem + "_relative_map.tsv"),
                             relative_correlation_map(psi, basis, g, true));
    manifest.add_artifact(stem + "_relative_map.tsv");
  }
}

}  // namespace

json load_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path.string());
  json raw;
  is >> raw;
  json merged = json::object();
  for (const auto& include : raw.value("include", std::vector<std::string>{})) {
    const fs::path inc = path.parent_path() / include;
    merge_overlay(merged, load_config(inc));
  }
  raw.erase("include");
  merge_overlay(merged, raw);
  return merged;
}

std::string config_hash(const json& config) { return hex64(fnv1a(config.dump())); }

int run_ground(const RunOptions& options) {
  const json config = load_config(options.config_path);
  Manifest manifest = prepare_out_dir(options, config, "ground");
  const LatticeGeometry g = parse_geometry(config);
  const CouplingSet couplings = parse_couplings(config, g);
  const TargetState target = parse_state(config, g);
  const json ground = config.value("ground", json::object());
  const int k = ground.value("k", 1);

  LanczosOptions lopts;
  lopts.seed = effective_seed(config, options, 0);

  const SparseOperator h = build_tj(g, target.basis, couplings);
  const EigenReport report = lowest_eigenpairs(h, k, lopts);

  std::vector<std::vector<double>> rows;
  const bool has_distance = target.basis->n_holes() == 1 && target.basis->n_up() >= 1;
  for (int i = 0; i < k; ++i) {
    std::vector<double> row = {static_cast<double>(i), report.eigenvalues[i],
                               report.residual_norms[i]};
    if (has_distance)
      row.push_back(
          eigenstate_hole_magnon_distance(report.eigenvectors.col(i), *target.basis, g));
    rows.push_back(row);
  }
  std::vector<std::string> cols = {"index", "energy_rad_per_us", "residual"};
  if (has_distance) cols.push_back("hole_magnon_distance");
  write_table(options.out_dir / "eigenvalues.tsv", {"low-lying spectrum"}, cols, rows);
  manifest.add_artifact("eigenvalues.tsv");

  write_state(options.out_dir / "state_ground.dat", report.eigenvectors.col(0), *target.basis,
              0.0);
  manifest.add_artifact("state_ground.dat");

  if (ground.value("observables", false))
    write_state_observables(manifest, options.out_dir, "ground", report.eigenvectors.col(0),
                            *target.basis, g);

  if (ground.value("structure_factor", false)) {
    const BrillouinGrid grid = brillouin_grid(g.a(), ground.value("grid_resolution", 25));
    const Eigen::MatrixXd table = sxsx_connected_table(report.eigenvectors.col(0), *target.basis);
    write_structure_factor(options.out_dir / "structure_factor.tsv", grid,
                           structure_factor(table, g, grid));
    manifest.add_artifact("structure_factor.tsv");
  }

  if (ground.contains("binding_sweep")) {
    if (g.kind() != LatticeKind::ladder)
      config_error("ground.binding_sweep", "sweep is defined for ladder geometries");
    const json& sweep = ground.at("binding_sweep");
    const auto ratios = require(sweep, "ratios", "ground.binding_sweep").get<std::vector<double>>();
    const int n_magnons = sweep.value("n_magnons", 1);
    const TNormalization norm = sweep.value("normalization", std::string("leg")) == "rung"
                                    ? TNormalization::rung
                                    : TNormalization::leg;
    std::vector<std::vector<double>> sweep_rows(ratios.size());
    parallel_for(static_cast<int>(ratios.size()), options.threads, [&](int i) {
      const LatticeGeometry ladder =
          LatticeGeometry::ladder(g.n_sites(), g.a(), ratios[i] * g.a());
      const BindingReport b = binding_energy(ladder, couplings, n_magnons, norm, lopts);
      sweep_rows[i] = {ratios[i], b.binding_over_t, b.binding_energy, b.t_norm};
    });
    write_table(options.out_dir / "binding.tsv", {"binding energy sweep"},
                {"h_over_a", "e_b_over_t", "e_b_rad_per_us", "t_norm_rad_per_us"}, sweep_rows);
    manifest.add_artifact("binding.tsv");
  }

  manifest.doc["completed"] = true;
  manifest.save();
  return 0;
}

int run_ramp(const RunOptions& options) {
  const json config = load_config(options.config_path);
  Manifest manifest = prepare_out_dir(options, config, "ramp");
  const LatticeGeometry g = parse_geometry(config);
  const CouplingSet couplings = parse_couplings(config, g);
  const TargetState target = parse_state(config, g);
  const LightShiftProgram program = parse_light_shift(config, target);
  const EvolutionSchedule schedule = parse_schedule(config);

  const SparseOperator h = build_tj(g, target.basis, couplings);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(target.basis->dimension());
  psi0[static_cast<Eigen::Index>(target.basis->rank(target.configuration))] = 1.0;

  const RampedHamiltonian ramped(h, program);
  const auto snapshots = evolve(psi0, ramped, schedule);

  for (const auto& snap : snapshots) {
    std::ostringstream stem;
    stem << "snapshot_t" << snap.time;
    write_state(options.out_dir / (stem.str() + ".dat"), snap.state, *target.basis, snap.time);
    manifest.add_artifact(stem.str() + ".dat");
    write_state_observables(manifest, options.out_dir, stem.str(), snap.state, *target.basis, g);
  }
  if (!snapshots.empty()) {
    write_state(options.out_dir / "state_final.dat", snapshots.back().state, *target.basis,
                snapshots.back().time);
    manifest.add_artifact("state_final.dat");
  }

  const json ramp = config.value("ramp", json::object());

  if (ramp.contains("trajectories")) {
    // Correlated-error pipeline: draw initial five-state words from a fitted
    // Boltzmann model, evolve each word's active sites (ground/lost atoms are
    // inert vacancies), and average the true observables over trajectories.
    const json& traj = ramp.at("trajectories");
    const fs::path model_path = require(traj, "model_file", "ramp.trajectories").get<std::string>();
    manifest.add_input(model_path);
    std::ifstream model_is(model_path);
    json model_doc;
    model_is >> model_doc;
    const BoltzmannModel model = boltzmann_from_json(model_doc);
    if (model.n_sites() != g.n_sites())
      config_error("ramp.trajectories", "model does not match the geometry");
    const int n_traj = traj.value("n", 100);
    const std::uint64_t seed = effective_seed(config, options, traj.value("seed", 0));
    const auto words = sample_initial_configurations(model, n_traj, seed);

    const int n = g.n_sites();
    const std::size_t n_times = schedule.snapshot_times.size();
    std::vector<Eigen::MatrixXd> mean_density(n_times, Eigen::MatrixXd::Zero(3, n));
    std::vector<Eigen::MatrixXd> mean_pairs(n_times, Eigen::MatrixXd::Zero(n, n));

    for (const SiteWord& word : words) {
      std::vector<int> active;
      for (int s = 0; s < n; ++s)
        if (word[s] != Local::ground && word[s] != Local::lost) active.push_back(s);
      if (active.empty()) continue;
      Eigen::Matrix2Xd pos(2, static_cast<int>(active.size()));
      Configuration conf;
      LightShiftProgram reduced_program = program;
      reduced_program.magnon_sites.clear();
      reduced_program.hole_sites.clear();
      for (std::size_t k = 0; k < active.size(); ++k) {
        pos.col(static_cast<int>(k)) = g.position(active[k]);
        if (word[active[k]] != Local::down)
          conf = conf.with(static_cast<int>(k), word[active[k]]);
      }
      for (int s : program.magnon_sites) {
        const auto it = std::find(active.begin(), active.end(), s);
        if (it != active.end())
          reduced_program.magnon_sites.push_back(static_cast<int>(it - active.begin()));
      }
      for (int s : program.hole_sites) {
        const auto it = std::find(active.begin(), active.end(), s);
        if (it != active.end())
          reduced_program.hole_sites.push_back(static_cast<int>(it - active.begin()));
      }
      const LatticeGeometry reduced = LatticeGeometry::triangular2d(pos, g.a());
      auto reduced_basis =
          make_sector(static_cast<int>(active.size()), std::popcount(conf.holes),
                      std::popcount(conf.ups));
      const SparseOperator reduced_h = build_tj(reduced, reduced_basis, couplings);
      Eigen::VectorXcd traj_psi = Eigen::VectorXcd::Zero(reduced_basis->dimension());
      traj_psi[static_cast<Eigen::Index>(reduced_basis->rank(conf))] = 1.0;
      const RampedHamiltonian reduced_ramped(reduced_h, reduced_program);
      const auto traj_snaps = evolve(traj_psi, reduced_ramped, schedule);
      for (std::size_t r = 0; r < traj_snaps.size(); ++r) {
        const Eigen::VectorXd dn = density_profile(traj_snaps[r].state, *reduced_basis, Local::down);
        const Eigen::VectorXd up = density_profile(traj_snaps[r].state, *reduced_basis, Local::up);
        const Eigen::VectorXd hl = density_profile(traj_snaps[r].state, *reduced_basis, Local::hole);
        const Eigen::MatrixXd pairs =
            hole_up_sym_pair_table(traj_snaps[r].state, *reduced_basis, false);
        for (std::size_t a = 0; a < active.size(); ++a) {
          mean_density[r](0, active[a]) += dn[static_cast<int>(a)] / words.size();
          mean_density[r](1, active[a]) += up[static_cast<int>(a)] / words.size();
          mean_density[r](2, active[a]) += hl[static_cast<int>(a)] / words.size();
          for (std::size_t b = 0; b < active.size(); ++b)
            mean_pairs[r](active[a], active[b]) +=
                pairs(static_cast<int>(a), static_cast<int>(b)) / words.size();
        }
      }
    }
    for (std::size_t r = 0; r < n_times; ++r) {
      std::ostringstream stem;
      stem << "trajectory_t" << schedule.snapshot_times[r];
      write_density_profiles(options.out_dir / (stem.str() + "_densities.tsv"),
                             mean_density[r].row(0), mean_density[r].row(1),
                             mean_density[r].row(2));
      manifest.add_artifact(stem.str() + "_densities.tsv");
      write_pair_table(options.out_dir / (stem.str() + "_pair_sym.tsv"), mean_pairs[r],
                       "trajectory-averaged sym hole-up pairs");
      manifest.add_artifact(stem.str() + "_pair_sym.tsv");
    }
  }

  if (ramp.value("ground_overlap", false)) {
    LanczosOptions lopts;
    lopts.seed = effective_seed(config, options, 0);
    const int manifold_size = ramp.value("manifold_size", 10);
    const EigenReport report = lowest_eigenpairs(h, manifold_size, lopts);
    const Eigen::MatrixXd trace = overlap_trace(snapshots, report.eigenvectors.col(0));
    const Eigen::VectorXd projection =
        manifold_projection(snapshots, report.eigenvectors, manifold_size);
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < snapshots.size(); ++r)
      rows.push_back({snapshots[r].time, trace(static_cast<int>(r), 0),
                      projection[static_cast<int>(r)]});
    write_table(options.out_dir / "overlap_trace.tsv",
                {"ground-state overlap and bound-manifold projection"},
                {"time_us", "ground_overlap", "manifold_projection"}, rows);
    manifest.add_artifact("overlap_trace.tsv");
  }

  manifest.doc["completed"] = true;
  manifest.save();
  return 0;
}

int run_measure(const RunOptions& options) {
  const json config = load_config(options.config_path);
  Manifest manifest = prepare_out_dir(options, config, "measure");
  const LatticeGeometry g = parse_geometry(config);
  const json measure = config.value("measure", json::object());

  const fs::path state_path = measure.contains("state_file")
                                  ? fs::path(measure.at("state_file").get<std::string>())
                                  : options.out_dir / "state_final.dat";
  if (!fs::exists(state_path))
    throw std::runtime_error("measure: missing upstream state file " + state_path.string() +
                             " (run the ramp first or set measure.state_file)");
  manifest.add_input(state_path);
  const StateFile state = read_state(state_path);
  if (state.n_sites != g.n_sites()) config_error("measure", "state file disagrees with geometry");
  auto basis = make_sector(state.n_sites, state.n_holes, state.n_up);

  const auto bases = measure.value("bases", std::vector<std::string>{"down", "up", "hole"});
  const int n_shots = measure.value("shots", 1000);
  const std::uint64_t seed = effective_seed(config, options, measure.value("seed", 0));
  const auto channel = parse_channel(measure.value("channel", json("ideal")), "measure.channel");

  std::vector<ShotBatch> batches(bases.size());
  parallel_for(static_cast<int>(bases.size()), options.threads, [&](int i) {
    const MeasurementBasisTag tag = measurement_basis_from_string(bases[i]);
    batches[i] = sample_shots(state.amplitudes, *basis, tag, channel ? &*channel : nullptr,
                              n_shots, seed + static_cast<std::uint64_t>(i));
  });
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const std::string name = "shots_" + bases[i] + ".txt";
    write_shot_batch(options.out_dir / name, batches[i]);
    manifest.add_artifact(name);
  }

  manifest.doc["completed"] = true;
  manifest.save();
  return 0;
}

int run_reconstruct(const RunOptions& options) {
  const json config = load_config(options.config_path);
  Manifest manifest = prepare_out_dir(options, config, "reconstruct");
  const LatticeGeometry g = parse_geometry(config);
  const json recon = config.value("reconstruct", json::object());
  const fs::path dir = recon.contains("shots_dir")
                           ? fs::path(recon.at("shots_dir").get<std::string>())
                           : options.out_dir;

  ShotBatch batches[3];
  const char* names[3] = {"shots_up.txt", "shots_hole.txt", "shots_down.txt"};
  for (int b = 0; b < 3; ++b) {
    const fs::path path = dir / names[b];
    if (!fs::exists(path))
      throw std::runtime_error("reconstruct: missing upstream shot file " + path.string());
    manifest.add_input(path);
    batches[b] = read_shot_batch(path);
  }
  const ShotBatch& up = batches[0];
  const ShotBatch& hole = batches[1];
  const ShotBatch& down = batches[2];
  if (up.n_sites != g.n_sites()) config_error("reconstruct", "shots disagree with geometry");

  std::vector<std::vector<double>> rows;
  for (int i = 0; i < g.n_sites(); ++i)
    for (int j = i + 1; j < g.n_sites(); ++j) {
      const MeasuredPairVector m = pair_probabilities_from_shots(up, hole, down, i, j);
      const PairCombos combos = reconstruct_pair_combos(m);
      rows.push_back({static_cast<double>(i), static_cast<double>(j), combos.spin_spin,
                      combos.sym_hole_sz, combos.sym_hole_up, consistency_residual(m)});
    }
  write_table(options.out_dir / "pair_combos.tsv",
              {"reconstructed pair combinations from single-basis shots"},
              {"i", "j", "spin_spin_x4", "sym_hole_sz_x2", "sym_hole_up", "residual"}, rows);
  manifest.add_artifact("pair_combos.tsv");

  const Eigen::MatrixXd sym = sym_hole_up_table_from_shots(up, hole, down);
  write_pair_table(options.out_dir / "sym_hole_up.tsv", sym, "sym hole-up pairs (shots)");
  manifest.add_artifact("sym_hole_up.tsv");
  write_distance_table(options.out_dir / "distance_correlation.tsv",
                       distance_correlation(sym, g, "sym hole-up vs distance (shots)"));
  manifest.add_artifact("distance_correlation.tsv");
  write_com_distribution(options.out_dir / "com.tsv", com_distribution(sym, g));
  manifest.add_artifact("com.tsv");

  manifest.doc["completed"] = true;
  manifest.save();
  return 0;
}

int run_fit_init(const RunOptions& options) {
  const json config = load_config(options.config_path);
  Manifest manifest = prepare_out_dir(options, config, "fit-init");
  const json block = config.value("fit_init", json::object());
  if (!block.contains("synthetic_model"))
    config_error("fit_init.synthetic_model", "missing (shot-based fitting feeds the same "
                                             "pipeline through dressed statistics)");

  BoltzmannModel truth = [&] {
    const json& m = block.at("synthetic_model");
    if (m.is_string()) {
      const fs::path path = m.get<std::string>();
      manifest.add_input(path);
      std::ifstream is(path);
      json doc;
      is >> doc;
      return boltzmann_from_json(doc);
    }
    return boltzmann_from_json(m);
  }();

  const auto channel = parse_channel(block.value("channel", json("default")), "fit_init.channel");
  const ErrorChannel* chan = channel ? &*channel : nullptr;
  const FitData data = dressed_expectations(truth, chan);

  FitSettings settings;
  settings.w_one = block.value("w_one", settings.w_one);
  settings.w_two = block.value("w_two", settings.w_two);
  settings.w_lost = block.value("w_lost", settings.w_lost);
  settings.w_target = block.value("w_target", settings.w_target);
  settings.budget = block.value("budget", settings.budget);
  settings.restarts = block.value("restarts", settings.restarts);
  settings.seed = effective_seed(config, options, block.value("seed", 0));
  if (block.contains("target"))
    settings.target = site_word_from_string(block.at("target").get<std::string>());

  BoltzmannModel start(truth.n_sites(), truth.region(), truth.constraints());
  const FitResult result = fit(start, data, chan, settings);

  std::ofstream model_os(options.out_dir / "fitted_model.json");
  model_os << boltzmann_to_json(result.model).dump(2) << '\n';
  manifest.add_artifact("fitted_model.json");

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < result.cost_trace.size(); ++i)
    rows.push_back({static_cast<double>(i), result.cost_trace[i]});
  write_table(options.out_dir / "fit_trace.tsv",
              {"best cost_true after each restart",
               "final cost_true " + std::to_string(result.cost_true) +
                   (result.converged ? " (converged)" : " (budget)")},
              {"restart", "cost_true"}, rows);
  manifest.add_artifact("fit_trace.tsv");

  const int n_samples = block.value("samples", 0);
  if (n_samples > 0) {
    std::ofstream os(options.out_dir / "sampled_configurations.txt");
    for (const auto& word :
         sample_initial_configurations(result.model, n_samples, settings.seed))
      os << to_string(word) << '\n';
    manifest.add_artifact("sampled_configurations.txt");
  }

  manifest.doc["completed"] = true;
  manifest.save();
  return 0;
}

int run_toycheck(std::ostream& os) {
  const double t = mhz(1.0);
  bool ok = true;
  for (auto sector : {PlaquetteSector::polarized, PlaquetteSector::singlet,
                      PlaquetteSector::triplet}) {
    const PlaquetteReport report = plaquette_spectrum(t, sector);
    const char* name = sector == PlaquetteSector::polarized
                           ? "polarized"
                           : (sector == PlaquetteSector::singlet ? "singlet" : "triplet");
    os << "plaquette " << name << " energies/t:";
    for (int i = 0; i < 3; ++i) os << ' ' << report.energies[i] / t;
    os << "  max deviation " << report.max_deviation / t << '\n';
    ok = ok && report.max_deviation <= 1e-12 * std::abs(t);
  }
  const double singlet = effective_tunneling_sign(t, SpinPair::singlet);
  const double triplet = effective_tunneling_sign(t, SpinPair::triplet);
  os << "singlet matrix element/t: " << singlet / t << "\n";
  os << "triplet matrix element/t: " << triplet / t << "\n";
  ok = ok && std::abs(singlet + t) <= 1e-12 * std::abs(t) &&
       std::abs(triplet - t) <= 1e-12 * std::abs(t);
  os << (ok ? "toycheck PASS\n" : "toycheck FAIL\n");
  return ok ? 0 : 1;
}

int dispatch(const std::string& subcommand, const RunOptions& options, std::ostream& os) {
  if (subcommand == "ground") return run_ground(options);
  if (subcommand == "ramp") return run_ramp(options);
  if (subcommand == "measure") return run_measure(options);
  if (subcommand == "reconstruct") return run_reconstruct(options);
  if (subcommand == "fit-init") return run_fit_init(options);
  if (subcommand == "toycheck") return run_toycheck(os);
  throw std::runtime_error("unknown subcommand: " + subcommand);
}

}  // namespace tjs::run
