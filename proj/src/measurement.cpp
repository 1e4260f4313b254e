#include "tjsim/measurement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

namespace tjs {

std::string to_string(MeasurementBasisTag tag) {
  switch (tag) {
    case MeasurementBasisTag::down: return "down";
    case MeasurementBasisTag::up: return "up";
    case MeasurementBasisTag::hole: return "hole";
    case MeasurementBasisTag::ground: return "ground";
    case MeasurementBasisTag::up_presence: return "up_presence";
    case MeasurementBasisTag::x_plus: return "x_plus";
    case MeasurementBasisTag::x_minus: return "x_minus";
  }
  throw std::invalid_argument("bad basis tag");
}

MeasurementBasisTag measurement_basis_from_string(const std::string& s) {
  for (auto tag : {MeasurementBasisTag::down, MeasurementBasisTag::up, MeasurementBasisTag::hole,
                   MeasurementBasisTag::ground, MeasurementBasisTag::up_presence,
                   MeasurementBasisTag::x_plus, MeasurementBasisTag::x_minus})
    if (to_string(tag) == s) return tag;
  throw std::invalid_argument("unknown measurement basis: " + s);
}

MeasurementBasis measurement_basis(MeasurementBasisTag tag) {
  // imaged[] indexed by Local: {down, up, hole, ground, lost}.
  switch (tag) {
    case MeasurementBasisTag::down:
    case MeasurementBasisTag::x_plus:
    case MeasurementBasisTag::x_minus:
      return {tag, {true, false, false, true, false}, true};
    case MeasurementBasisTag::up:
      return {tag, {true, false, true, true, false}, false};
    case MeasurementBasisTag::hole:
      return {tag, {true, true, false, true, false}, false};
    case MeasurementBasisTag::ground:
      return {tag, {false, false, false, true, false}, true};
    case MeasurementBasisTag::up_presence:
      return {tag, {false, true, false, true, false}, true};
  }
  throw std::invalid_argument("bad basis tag");
}

Eigen::Matrix<double, 4, 5> derive_error_matrix(const ErrorRates& r) {
  for (double v : {r.eps_m, r.eps_s, r.eps_g, r.eps_pp, r.eps_gpp, r.eps_bbr_sp, r.eps_bbr_p,
                   r.eps_deex})
    if (v < 0.0 || v > 1.0) throw std::invalid_argument("error rates must lie in [0, 1]");
  Eigen::Matrix<double, 4, 5> m;
  // Columns: true state in (L, g, S, P, S'); rows: measured populations in
  // the down, up, hole and ground readouts, assembled from the error trees.
  m.row(0) << 0.0, 1.0 - r.eps_m, 1.0 - r.eps_m - r.eps_deex, r.eps_g, r.eps_gpp;
  m.row(1) << 1.0, r.eps_m, r.eps_m + r.eps_deex, r.eps_m + r.eps_deex + r.eps_bbr_p,
      1.0 - r.eps_pp;
  m.row(2) << 1.0, r.eps_m, r.eps_m + r.eps_deex, 1.0 - r.eps_g,
      r.eps_m + r.eps_deex + r.eps_bbr_sp;
  m.row(3) << 0.0, 1.0 - r.eps_m, r.eps_s, r.eps_g, r.eps_gpp;
  if ((m.array() < -1e-12).any() || (m.array() > 1.0 + 1e-12).any())
    throw std::invalid_argument("error rates produce probabilities outside [0, 1]");
  return m;
}

namespace {

// Paper column order (L, g, S, P, S') indexed by Local.
int paper_column(Local s) {
  switch (s) {
    case Local::lost: return 0;
    case Local::ground: return 1;
    case Local::down: return 2;
    case Local::hole: return 3;
    case Local::up: return 4;
  }
  throw std::invalid_argument("bad Local value");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 shot_rng(std::uint64_t batch_seed, std::uint64_t shot_index) {
  return std::mt19937_64(splitmix64(batch_seed ^ splitmix64(shot_index + 1)));
}

}  // namespace

ErrorChannel::ErrorChannel(const ErrorRates& rates)
    : rates_(rates), matrix_(derive_error_matrix(rates)) {
  // Imaged probability of the 1H2M up-presence sequence, derived from the
  // same primitive rates (freeze h to G, swap the spins, freeze the new S',
  // deexcite and image what was up): this row is derived, not calibrated.
  up_presence_row_ << 0.0, 1.0 - rates.eps_m, rates.eps_pp, rates.eps_g,
      1.0 - rates.eps_m - rates.eps_deex;
}

double ErrorChannel::counted_probability(MeasurementBasisTag tag, Local true_state) const {
  const int col = paper_column(true_state);
  switch (tag) {
    case MeasurementBasisTag::down:
    case MeasurementBasisTag::x_plus:
    case MeasurementBasisTag::x_minus:
      return matrix_(0, col);
    case MeasurementBasisTag::up: return matrix_(1, col);
    case MeasurementBasisTag::hole: return matrix_(2, col);
    case MeasurementBasisTag::ground: return matrix_(3, col);
    case MeasurementBasisTag::up_presence: return up_presence_row_(col);
  }
  throw std::invalid_argument("bad basis tag");
}

double ErrorChannel::imaged_probability(MeasurementBasisTag tag, Local true_state) const {
  const double counted = counted_probability(tag, true_state);
  return measurement_basis(tag).target_is_presence ? counted : 1.0 - counted;
}

double estimate_population(const ShotBatch& batch, int site) {
  if (site < 0 || site >= batch.n_sites) throw std::invalid_argument("site index out of range");
  if (batch.n_shots() == 0) throw std::invalid_argument("empty shot batch");
  const double imaged_fraction =
      batch.outcomes.col(site).cast<double>().sum() / batch.n_shots();
  return measurement_basis(batch.tag).target_is_presence ? imaged_fraction
                                                         : 1.0 - imaged_fraction;
}

HoleBlockedBasis::HoleBlockedBasis(int n_sites, int n_holes, std::size_t dimension_cap)
    : n_sites_(n_sites), n_holes_(n_holes) {
  if (n_sites < 1 || n_sites > 62) throw std::invalid_argument("blocked basis: n_sites in [1,62]");
  if (n_holes < 0 || n_holes > n_sites)
    throw std::invalid_argument("blocked basis: bad hole count");
  const std::size_t block_count = sector_dimension(n_sites, n_holes, 0);
  const unsigned __int128 dim =
      static_cast<unsigned __int128>(block_count) << (n_sites - n_holes);
  if (dim > static_cast<unsigned __int128>(dimension_cap))
    throw std::runtime_error("blocked basis dimension exceeds the configured cap");
  hole_masks_.reserve(block_count);
  const std::uint64_t limit = std::uint64_t{1} << n_sites;
  for (std::uint64_t mask = 0; mask < limit; ++mask)
    if (std::popcount(mask) == n_holes) hole_masks_.push_back(mask);
}

std::size_t HoleBlockedBasis::dimension() const {
  return hole_masks_.size() << spin_slots();
}

Configuration HoleBlockedBasis::config(std::size_t ordinal) const {
  const std::size_t block = ordinal >> spin_slots();
  const std::uint64_t word = ordinal & ((std::uint64_t{1} << spin_slots()) - 1);
  const std::uint64_t mask = hole_masks_[block];
  Configuration c;
  c.holes = mask;
  int slot = 0;
  for (int s = 0; s < n_sites_; ++s) {
    if (mask & (std::uint64_t{1} << s)) continue;
    if (word & (std::uint64_t{1} << slot)) c.ups |= std::uint64_t{1} << s;
    ++slot;
  }
  return c;
}

std::size_t HoleBlockedBasis::index_of(const Configuration& c) const {
  const auto it = std::lower_bound(hole_masks_.begin(), hole_masks_.end(), c.holes);
  if (it == hole_masks_.end() || *it != c.holes)
    throw std::invalid_argument("configuration outside blocked basis");
  const std::size_t block = static_cast<std::size_t>(it - hole_masks_.begin());
  std::uint64_t word = 0;
  int slot = 0;
  for (int s = 0; s < n_sites_; ++s) {
    if (c.holes & (std::uint64_t{1} << s)) continue;
    if (c.ups & (std::uint64_t{1} << s)) word |= std::uint64_t{1} << slot;
    ++slot;
  }
  return (block << spin_slots()) | word;
}

BlockedState embed_in_blocked(const Eigen::VectorXcd& psi, const SectorBasis& basis) {
  if (psi.size() != static_cast<Eigen::Index>(basis.dimension()))
    throw std::invalid_argument("state/basis dimension mismatch");
  auto blocked = std::make_shared<HoleBlockedBasis>(basis.n_sites(), basis.n_holes());
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(blocked->dimension());
  for (std::size_t m = 0; m < basis.dimension(); ++m)
    amps[static_cast<Eigen::Index>(blocked->index_of(basis.config(m)))] =
        psi[static_cast<Eigen::Index>(m)];
  return {std::move(blocked), std::move(amps)};
}

BlockedState rotate_for_x(const BlockedState& state, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("rotate_for_x: sign must be +-1");
  const auto& basis = *state.basis;
  BlockedState out{state.basis, state.amplitudes};
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const int slots = basis.spin_slots();
  const std::size_t block_size = std::size_t{1} << slots;
  for (std::size_t block = 0; block < basis.hole_masks().size(); ++block) {
    const std::size_t base = block * block_size;
    for (int slot = 0; slot < slots; ++slot) {
      const std::uint64_t bit = std::uint64_t{1} << slot;
      for (std::uint64_t word = 0; word < block_size; ++word) {
        if (word & bit) continue;
        auto& low = out.amplitudes[static_cast<Eigen::Index>(base + word)];        // spin down
        auto& high = out.amplitudes[static_cast<Eigen::Index>(base + (word | bit))];  // spin up
        const std::complex<double> d = low, u = high;
        if (sign > 0) {
          low = inv_sqrt2 * (d + u);
          high = inv_sqrt2 * (-d + u);
        } else {
          low = inv_sqrt2 * (d - u);
          high = inv_sqrt2 * (d + u);
        }
      }
    }
  }
  return out;
}

BlockedState rotate_for_x(const Eigen::VectorXcd& psi, const SectorBasis& basis, int sign) {
  return rotate_for_x(embed_in_blocked(psi, basis), sign);
}

namespace {

std::vector<double> cumulative_weights(const Eigen::VectorXcd& amps) {
  std::vector<double> cumulative(amps.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    total += std::norm(amps[i]);
    cumulative[static_cast<std::size_t>(i)] = total;
  }
  if (total <= 0.0) throw std::invalid_argument("sample_shots: zero state");
  for (double& c : cumulative) c /= total;
  return cumulative;
}

template <class ConfigOf>
ShotBatch sample_impl(const std::vector<double>& cumulative, ConfigOf&& config_of, int n_sites,
                      MeasurementBasisTag tag, const ErrorChannel* channel, int n_shots,
                      std::uint64_t seed) {
  if (n_shots < 1) throw std::invalid_argument("sample_shots: need at least one shot");
  const MeasurementBasis mb = measurement_basis(tag);
  ShotBatch batch;
  batch.tag = tag;
  batch.seed = seed;
  batch.n_sites = n_sites;
  batch.outcomes.resize(n_shots, n_sites);
  for (int shot = 0; shot < n_shots; ++shot) {
    auto rng = shot_rng(seed, static_cast<std::uint64_t>(shot));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double u = uniform(rng);
    const std::size_t pick =
        std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
    const Configuration conf = config_of(std::min(pick, cumulative.size() - 1));
    for (int s = 0; s < n_sites; ++s) {
      const Local state = conf.at(s);
      bool imaged;
      if (channel)
        imaged = uniform(rng) < channel->imaged_probability(tag, state);
      else
        imaged = mb.imaged[static_cast<int>(state)];
      batch.outcomes(shot, s) = imaged ? 1 : 0;
    }
  }
  return batch;
}

}  // namespace

ShotBatch sample_shots(const Eigen::VectorXcd& psi, const SectorBasis& basis,
                       MeasurementBasisTag tag, const ErrorChannel* channel, int n_shots,
                       std::uint64_t seed) {
  if (psi.size() != static_cast<Eigen::Index>(basis.dimension()))
    throw std::invalid_argument("state/basis dimension mismatch");
  if (tag == MeasurementBasisTag::x_plus || tag == MeasurementBasisTag::x_minus) {
    const BlockedState rotated =
        rotate_for_x(psi, basis, tag == MeasurementBasisTag::x_plus ? 1 : -1);
    return sample_shots(rotated, tag, channel, n_shots, seed);
  }
  return sample_impl(
      cumulative_weights(psi), [&](std::size_t m) { return basis.config(m); }, basis.n_sites(),
      tag, channel, n_shots, seed);
}

ShotBatch sample_shots(const BlockedState& state, MeasurementBasisTag tag,
                       const ErrorChannel* channel, int n_shots, std::uint64_t seed) {
  return sample_impl(
      cumulative_weights(state.amplitudes),
      [&](std::size_t m) { return state.basis->config(m); }, state.basis->n_sites(), tag, channel,
      n_shots, seed);
}

ShotBatch detect_words(const std::vector<SiteWord>& words, MeasurementBasisTag tag,
                       const ErrorChannel* channel, std::uint64_t seed) {
  if (words.empty()) throw std::invalid_argument("detect_words: no configurations");
  const int n_sites = static_cast<int>(words.front().size());
  const MeasurementBasis mb = measurement_basis(tag);
  ShotBatch batch;
  batch.tag = tag;
  batch.seed = seed;
  batch.n_sites = n_sites;
  batch.outcomes.resize(static_cast<int>(words.size()), n_sites);
  for (std::size_t shot = 0; shot < words.size(); ++shot) {
    if (static_cast<int>(words[shot].size()) != n_sites)
      throw std::invalid_argument("detect_words: ragged configuration list");
    auto rng = shot_rng(seed, shot);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int s = 0; s < n_sites; ++s) {
      const Local state = words[shot][s];
      bool imaged;
      if (channel)
        imaged = uniform(rng) < channel->imaged_probability(tag, state);
      else
        imaged = mb.imaged[static_cast<int>(state)];
      batch.outcomes(static_cast<int>(shot), s) = imaged ? 1 : 0;
    }
  }
  return batch;
}

}  // namespace tjs
