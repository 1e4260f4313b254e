#include "tjsim/initmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace tjs {

namespace {

double sz_of(Local s) { return s == Local::up ? 0.5 : (s == Local::down ? -0.5 : 0.0); }

constexpr int kStates = 5;

}  // namespace

BoltzmannModel::BoltzmannModel(int n_sites, std::vector<int> region, SpaceConstraints constraints)
    : n_sites_(n_sites), region_(std::move(region)), constraints_(constraints) {
  if (n_sites_ < 1) throw std::invalid_argument("boltzmann model: need at least one site");
  if (region_.empty()) throw std::invalid_argument("boltzmann model: empty region");
  std::sort(region_.begin(), region_.end());
  region_index_.assign(n_sites_, -1);
  for (std::size_t l = 0; l < region_.size(); ++l) {
    const int site = region_[l];
    if (site < 0 || site >= n_sites_ || region_index_[site] >= 0)
      throw std::invalid_argument("boltzmann model: bad region site list");
    region_index_[site] = static_cast<int>(l);
  }
  if (!constraints_.sz_min_is_set) {
    constraints_.sz_min = -0.5 * static_cast<double>(region_.size());
    constraints_.sz_min_is_set = true;
  }
  const int r = static_cast<int>(region_.size());
  for (auto& c : couplings_) c = Eigen::MatrixXd::Zero(r, r);
  fields_ = Eigen::MatrixXd::Zero(kStates, n_sites_);

  // Enumerate admissible region words once; the constraints are fixed.
  SiteWord word(r, Local::down);
  std::vector<int> digits(r, 0);
  for (;;) {
    int holes = 0, ground = 0;
    double sz = 0.0;
    for (int l = 0; l < r; ++l) {
      const Local s = static_cast<Local>(digits[l]);
      word[l] = s;
      holes += s == Local::hole;
      ground += s == Local::ground;
      sz += sz_of(s);
    }
    if (holes <= constraints_.max_holes && ground <= constraints_.max_ground &&
        sz >= constraints_.sz_min - 1e-12 && sz <= constraints_.sz_max + 1e-12)
      region_words_.push_back(word);
    int l = r - 1;
    while (l >= 0 && digits[l] == kStates - 1) digits[l--] = 0;
    if (l < 0) break;
    ++digits[l];
  }
  if (region_words_.empty())
    throw std::invalid_argument("boltzmann model: constraints admit no region word");
}

double BoltzmannModel::coupling(int state, int site_i, int site_j) const {
  const int a = region_index_[site_i], b = region_index_[site_j];
  if (a < 0 || b < 0) throw std::invalid_argument("coupling sites must lie in the region");
  return couplings_[state](a, b);
}

void BoltzmannModel::set_coupling(int state, int site_i, int site_j, double value) {
  const int a = region_index_[site_i], b = region_index_[site_j];
  if (a < 0 || b < 0 || a == b)
    throw std::invalid_argument("coupling needs two distinct region sites");
  couplings_[state](a, b) = value;
  couplings_[state](b, a) = value;
}

double BoltzmannModel::energy(const SiteWord& word) const {
  if (static_cast<int>(word.size()) != n_sites_)
    throw std::invalid_argument("energy: word length mismatch");
  double e = 0.0;
  const int r = static_cast<int>(region_.size());
  for (int a = 0; a < r; ++a) {
    const Local sa = word[region_[a]];
    for (int b = a + 1; b < r; ++b)
      if (sa == word[region_[b]]) e -= couplings_[static_cast<int>(sa)](a, b);
  }
  for (int j = 0; j < n_sites_; ++j) e -= fields_(static_cast<int>(word[j]), j);
  return e;
}

Eigen::VectorXd BoltzmannModel::region_probabilities() const {
  const int r = static_cast<int>(region_.size());
  Eigen::VectorXd energies(region_words_.size());
  for (std::size_t w = 0; w < region_words_.size(); ++w) {
    const SiteWord& word = region_words_[w];
    double e = 0.0;
    for (int a = 0; a < r; ++a) {
      const Local sa = word[a];
      e -= fields_(static_cast<int>(sa), region_[a]);
      for (int b = a + 1; b < r; ++b)
        if (sa == word[b]) e -= couplings_[static_cast<int>(sa)](a, b);
    }
    energies[static_cast<Eigen::Index>(w)] = e;
  }
  const Eigen::VectorXd boltzmann = (-(energies.array() - energies.minCoeff())).exp();
  return boltzmann / boltzmann.sum();
}

Eigen::Matrix<double, 5, 1> BoltzmannModel::outside_marginal(int site) const {
  if (in_region(site)) throw std::invalid_argument("outside_marginal: site lies in the region");
  Eigen::Matrix<double, 5, 1> weights = fields_.col(site);
  weights = (weights.array() - weights.maxCoeff()).exp();
  return weights / weights.sum();
}

ProbabilityTable probabilities(const BoltzmannModel& model, std::size_t cap) {
  const int n_outside = model.n_sites() - static_cast<int>(model.region().size());
  double total = static_cast<double>(model.region_words().size());
  for (int i = 0; i < n_outside; ++i) total *= kStates;
  if (total > static_cast<double>(cap))
    throw std::runtime_error("probabilities: admissible space exceeds the cap");

  std::vector<int> outside;
  for (int j = 0; j < model.n_sites(); ++j)
    if (!model.in_region(j)) outside.push_back(j);

  const Eigen::VectorXd region_p = model.region_probabilities();
  std::vector<Eigen::Matrix<double, 5, 1>> marginals;
  for (int j : outside) marginals.push_back(model.outside_marginal(j));

  ProbabilityTable table;
  table.words.reserve(static_cast<std::size_t>(total));
  std::vector<double> probs;
  probs.reserve(static_cast<std::size_t>(total));

  std::vector<int> digits(outside.size(), 0);
  SiteWord word(model.n_sites(), Local::down);
  for (;;) {
    double outside_p = 1.0;
    for (std::size_t k = 0; k < outside.size(); ++k) {
      word[outside[k]] = static_cast<Local>(digits[k]);
      outside_p *= marginals[k](digits[k]);
    }
    for (std::size_t w = 0; w < model.region_words().size(); ++w) {
      for (std::size_t l = 0; l < model.region().size(); ++l)
        word[model.region()[l]] = model.region_words()[w][l];
      table.words.push_back(word);
      probs.push_back(region_p[static_cast<Eigen::Index>(w)] * outside_p);
    }
    if (outside.empty()) break;
    int k = static_cast<int>(outside.size()) - 1;
    while (k >= 0 && digits[k] == kStates - 1) digits[k--] = 0;
    if (k < 0) break;
    ++digits[k];
  }
  table.p = Eigen::Map<Eigen::VectorXd>(probs.data(), static_cast<Eigen::Index>(probs.size()));
  return table;
}

namespace {

// Counted-as-target probability per true state for one calibration basis.
Eigen::Matrix<double, 5, 1> basis_response(MeasurementBasisTag tag, const ErrorChannel* channel) {
  Eigen::Matrix<double, 5, 1> q;
  for (int s = 0; s < kStates; ++s) {
    const Local local = static_cast<Local>(s);
    if (channel)
      q[s] = channel->counted_probability(tag, local);
    else {
      const MeasurementBasis mb = measurement_basis(tag);
      const bool imaged = mb.imaged[s];
      q[s] = (mb.target_is_presence ? imaged : !imaged) ? 1.0 : 0.0;
    }
  }
  return q;
}

}  // namespace

DressedExpectations dressed_expectations(const BoltzmannModel& model,
                                         const ErrorChannel* channel) {
  const int n = model.n_sites();
  const int r = static_cast<int>(model.region().size());
  const Eigen::VectorXd p = model.region_probabilities();
  DressedExpectations out;
  for (int b = 0; b < 4; ++b) {
    const Eigen::Matrix<double, 5, 1> q = basis_response(DressedExpectations::bases[b], channel);
    Eigen::MatrixXd g(static_cast<Eigen::Index>(model.region_words().size()), r);
    for (std::size_t w = 0; w < model.region_words().size(); ++w)
      for (int l = 0; l < r; ++l)
        g(static_cast<Eigen::Index>(w), l) = q[static_cast<int>(model.region_words()[w][l])];
    out.one_point[b] = Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd region_one = g.transpose() * p;
    for (int l = 0; l < r; ++l) out.one_point[b][model.region()[l]] = region_one[l];
    for (int j = 0; j < n; ++j)
      if (!model.in_region(j)) out.one_point[b][j] = q.dot(model.outside_marginal(j));
    out.two_point_region[b] = g.transpose() * p.asDiagonal() * g;
    for (int l = 0; l < r; ++l) {
      // Diagonal of the two-point block is the single-site moment: the same
      // counted bit multiplies itself within one shot.
      out.two_point_region[b](l, l) = region_one[l];
    }
  }
  return out;
}

double cost_true(const BoltzmannModel& model, const FitData& data, const ErrorChannel* channel) {
  const DressedExpectations fit = dressed_expectations(model, channel);
  const int r = static_cast<int>(model.region().size());
  double eps_one = 0.0, eps_two = 0.0;
  for (int b = 0; b < 4; ++b) {
    eps_one += (fit.one_point[b] - data.one_point[b]).squaredNorm();
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j) {
        const double d = fit.two_point_region[b](i, j) - data.two_point_region[b](i, j);
        eps_two += d * d;
      }
  }
  return eps_one + eps_two;
}

namespace {

struct FitWorkspace {
  const BoltzmannModel* base;
  const FitData* data;
  Eigen::MatrixXd features;  // region words x region params
  std::array<Eigen::Matrix<double, 5, 1>, 4> q;  // counted-probability per basis
  // Per-word local-state codes: the cost reduces to 5-bin site histograms and
  // 25-bin pair histograms, so the word list is traversed once per probe.
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> site_codes;   // words x r
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> pair_codes;   // words x pairs
  std::vector<std::pair<int, int>> region_pairs;
  Eigen::VectorXd lost_count;  // lost atoms per region word
  int target_word = -1;        // index into region words, -1 when absent
  std::vector<Local> target_outside;
  std::vector<int> outside_sites;
  int n_region_params = 0;  // couplings then region fields
  int n_params = 0;         // + outside fields

  int coupling_param(int state, int a, int b) const {
    const int r = static_cast<int>(base->region().size());
    const int pair = a * r - a * (a + 1) / 2 + (b - a - 1);  // a < b
    return state * (r * (r - 1) / 2) + pair;
  }
};

FitWorkspace make_workspace(const BoltzmannModel& model, const FitData& data,
                            const ErrorChannel* channel, const FitSettings& settings) {
  FitWorkspace ws;
  ws.base = &model;
  ws.data = &data;
  const int r = static_cast<int>(model.region().size());
  const int n_words = static_cast<int>(model.region_words().size());
  const int n_pairs = r * (r - 1) / 2;
  ws.n_region_params = kStates * n_pairs + kStates * r;
  for (int j = 0; j < model.n_sites(); ++j)
    if (!model.in_region(j)) ws.outside_sites.push_back(j);
  ws.n_params = ws.n_region_params + kStates * static_cast<int>(ws.outside_sites.size());

  ws.features = Eigen::MatrixXd::Zero(n_words, ws.n_region_params);
  ws.lost_count = Eigen::VectorXd::Zero(n_words);
  for (int w = 0; w < n_words; ++w) {
    const SiteWord& word = model.region_words()[w];
    for (int a = 0; a < r; ++a) {
      const int s = static_cast<int>(word[a]);
      ws.features(w, kStates * n_pairs + s * r + a) = 1.0;
      if (word[a] == Local::lost) ws.lost_count[w] += 1.0;
      for (int b = a + 1; b < r; ++b)
        if (word[a] == word[b]) {
          const int pair = a * r - a * (a + 1) / 2 + (b - a - 1);
          ws.features(w, s * n_pairs + pair) = 1.0;
        }
    }
  }
  for (int b = 0; b < 4; ++b) ws.q[b] = basis_response(DressedExpectations::bases[b], channel);
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b) ws.region_pairs.emplace_back(a, b);
  ws.site_codes.resize(n_words, r);
  ws.pair_codes.resize(n_words, static_cast<int>(ws.region_pairs.size()));
  for (int w = 0; w < n_words; ++w) {
    const SiteWord& word = model.region_words()[w];
    for (int l = 0; l < r; ++l) ws.site_codes(w, l) = static_cast<std::uint8_t>(word[l]);
    for (std::size_t pp = 0; pp < ws.region_pairs.size(); ++pp)
      ws.pair_codes(w, static_cast<int>(pp)) =
          static_cast<std::uint8_t>(5 * static_cast<int>(word[ws.region_pairs[pp].first]) +
                                    static_cast<int>(word[ws.region_pairs[pp].second]));
  }
  if (!settings.target.empty()) {
    if (static_cast<int>(settings.target.size()) != model.n_sites())
      throw std::invalid_argument("fit: target word length mismatch");
    SiteWord region_word(r, Local::down);
    for (int l = 0; l < r; ++l) region_word[l] = settings.target[model.region()[l]];
    const auto it = std::find(model.region_words().begin(), model.region_words().end(),
                              region_word);
    if (it != model.region_words().end())
      ws.target_word = static_cast<int>(it - model.region_words().begin());
    for (int j : ws.outside_sites) ws.target_outside.push_back(settings.target[j]);
  }
  return ws;
}

struct CostBreakdown {
  double one = 0.0, two = 0.0, lost = 0.0, target = 0.0;
};

// Reusable evaluation buffers; the cost is called hundreds of thousands of
// times during a fit.  Single-coordinate probes update the cached energy
// vector with one axpy instead of a full feature product.
struct Evaluator {
  const FitWorkspace& ws;
  Eigen::VectorXd committed_e;  // features * committed theta (region part)
  Eigen::VectorXd minus_e, p;
  Eigen::Array<double, 5, Eigen::Dynamic> site_hist;
  Eigen::Array<double, 25, Eigen::Dynamic> pair_hist;
  int commits_since_refresh = 0;

  explicit Evaluator(const FitWorkspace& workspace)
      : ws(workspace),
        committed_e(Eigen::VectorXd::Zero(workspace.features.rows())),
        minus_e(workspace.features.rows()),
        p(workspace.features.rows()),
        site_hist(5, workspace.base->region().size()),
        pair_hist(25, workspace.region_pairs.size()) {}

  void commit(const Eigen::VectorXd& theta) {
    committed_e.noalias() = ws.features * theta.head(ws.n_region_params);
    commits_since_refresh = 0;
  }

  // theta must equal the committed vector except possibly at changed_idx.
  void update_committed(const Eigen::VectorXd& theta, int changed_idx, double old_value) {
    if (changed_idx < ws.n_region_params)
      committed_e += (theta[changed_idx] - old_value) * ws.features.col(changed_idx);
    if (++commits_since_refresh >= 1000) commit(theta);
  }

  CostBreakdown operator()(const Eigen::VectorXd& theta) {
    minus_e.noalias() = ws.features * theta.head(ws.n_region_params);
    return cost_from_energy(theta);
  }

  CostBreakdown probe(const Eigen::VectorXd& theta, int changed_idx, double committed_value) {
    if (changed_idx < ws.n_region_params)
      minus_e = committed_e +
                (theta[changed_idx] - committed_value) * ws.features.col(changed_idx);
    else
      minus_e = committed_e;
    return cost_from_energy(theta);
  }

  CostBreakdown cost_from_energy(const Eigen::VectorXd& theta) {
    const BoltzmannModel& model = *ws.base;
    const int r = static_cast<int>(model.region().size());
    const int n_words = static_cast<int>(p.size());
    p = (minus_e.array() - minus_e.maxCoeff()).exp();
    p /= p.sum();

    CostBreakdown cost;
    cost.lost = p.dot(ws.lost_count);
    double target_p = ws.target_word >= 0 ? p[ws.target_word] : 0.0;

    site_hist.setZero();
    for (int l = 0; l < r; ++l) {
      const std::uint8_t* codes = ws.site_codes.col(l).data();
      double* bins = site_hist.col(l).data();
      for (int w = 0; w < n_words; ++w) bins[codes[w]] += p[w];
    }
    pair_hist.setZero();
    for (std::size_t pp = 0; pp < ws.region_pairs.size(); ++pp) {
      const std::uint8_t* codes = ws.pair_codes.col(static_cast<int>(pp)).data();
      double* bins = pair_hist.col(static_cast<int>(pp)).data();
      for (int w = 0; w < n_words; ++w) bins[codes[w]] += p[w];
    }
    for (int b = 0; b < 4; ++b) {
      const auto& q = ws.q[b];
      for (int l = 0; l < r; ++l) {
        const double one = q.dot(site_hist.col(l).matrix());
        const double d = one - ws.data->one_point[b][model.region()[l]];
        cost.one += d * d;
      }
      for (std::size_t pp = 0; pp < ws.region_pairs.size(); ++pp) {
        double two = 0.0;
        const double* bins = pair_hist.col(static_cast<int>(pp)).data();
        for (int alpha = 0; alpha < 5; ++alpha)
          for (int beta = 0; beta < 5; ++beta) two += q[alpha] * q[beta] * bins[5 * alpha + beta];
        const auto [pi, pj] = ws.region_pairs[pp];
        const double d = two - ws.data->two_point_region[b](pi, pj);
        cost.two += d * d;
      }
    }

    // Independent outside sites.
    for (std::size_t k = 0; k < ws.outside_sites.size(); ++k) {
      const int site = ws.outside_sites[k];
      Eigen::Matrix<double, 5, 1> h =
          theta.segment<kStates>(ws.n_region_params + kStates * static_cast<int>(k));
      Eigen::Matrix<double, 5, 1> marg = (h.array() - h.maxCoeff()).exp();
      marg /= marg.sum();
      for (int b = 0; b < 4; ++b) {
        const double d = ws.q[b].dot(marg) - ws.data->one_point[b][site];
        cost.one += d * d;
      }
      cost.lost += marg[static_cast<int>(Local::lost)];
      if (ws.target_word >= 0) target_p *= marg[static_cast<int>(ws.target_outside[k])];
    }
    cost.target = 1.0 - target_p;
    return cost;
  }
};

void write_theta(BoltzmannModel& model, const FitWorkspace& ws, const Eigen::VectorXd& theta) {
  const int r = static_cast<int>(model.region().size());
  for (int s = 0; s < kStates; ++s)
    for (int a = 0; a < r; ++a) {
      model.set_field(s, model.region()[a], theta[ws.n_region_params - kStates * r + s * r + a]);
      for (int b = a + 1; b < r; ++b)
        model.set_coupling(s, model.region()[a], model.region()[b],
                           theta[ws.coupling_param(s, a, b)]);
    }
  for (std::size_t k = 0; k < ws.outside_sites.size(); ++k)
    for (int s = 0; s < kStates; ++s)
      model.set_field(s, ws.outside_sites[k],
                      theta[ws.n_region_params + kStates * static_cast<int>(k) + s]);
}

Eigen::VectorXd read_theta(const BoltzmannModel& model, const FitWorkspace& ws) {
  const int r = static_cast<int>(model.region().size());
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(ws.n_params);
  for (int s = 0; s < kStates; ++s)
    for (int a = 0; a < r; ++a) {
      theta[ws.n_region_params - kStates * r + s * r + a] = model.field(s, model.region()[a]);
      for (int b = a + 1; b < r; ++b)
        theta[ws.coupling_param(s, a, b)] =
            model.coupling(s, model.region()[a], model.region()[b]);
    }
  for (std::size_t k = 0; k < ws.outside_sites.size(); ++k)
    for (int s = 0; s < kStates; ++s)
      theta[ws.n_region_params + kStates * static_cast<int>(k) + s] =
          model.field(s, ws.outside_sites[k]);
  return theta;
}

}  // namespace

FitResult fit(const BoltzmannModel& start, const FitData& data, const ErrorChannel* channel,
              const FitSettings& settings) {
  if (settings.w_one < 0 || settings.w_two < 0 || settings.w_lost < 0 || settings.w_target < 0)
    throw std::invalid_argument("fit: weights must be nonnegative");
  for (int b = 0; b < 4; ++b) {
    if (data.one_point[b].size() != start.n_sites() ||
        data.two_point_region[b].rows() != static_cast<Eigen::Index>(start.region().size()))
      throw std::invalid_argument("fit: data does not cover all sites and region pairs");
  }

  FitWorkspace ws = make_workspace(start, data, channel, settings);
  std::mt19937_64 rng(settings.seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  std::uniform_real_distribution<double> log_weight(-1.0, 1.0);

  int evals_left = settings.budget;
  FitResult best{.model = start};
  best.cost_true = std::numeric_limits<double>::infinity();

  const Eigen::VectorXd theta0 = read_theta(start, ws);
  for (int restart = 0; restart < settings.restarts && evals_left > 0; ++restart) {
    double w1 = settings.w_one, w2 = settings.w_two;
    double wl = settings.w_lost, wt = settings.w_target;
    Eigen::VectorXd theta = theta0;
    if (restart > 0) {
      // Re-weight the surrogate cost and jitter the start, per restart.
      w2 *= std::pow(10.0, log_weight(rng));
      wl *= std::pow(10.0, log_weight(rng));
      wt *= std::pow(10.0, log_weight(rng));
      for (int i = 0; i < ws.n_params; ++i) theta[i] = theta0[i] + jitter(rng);
    }
    Evaluator evaluate(ws);
    const auto fit_cost = [&](const CostBreakdown& c) {
      return w1 * c.one + w2 * c.two + wl * c.lost + wt * c.target;
    };
    const auto eval_at = [&](int idx, double value) {
      const double saved = theta[idx];
      theta[idx] = value;
      const double cost = fit_cost(evaluate.probe(theta, idx, saved));
      theta[idx] = saved;
      --evals_left;
      return cost;
    };

    evaluate.commit(theta);
    double current = fit_cost(evaluate(theta));
    --evals_left;
    Eigen::VectorXd steps = Eigen::VectorXd::Constant(ws.n_params, 0.25);
    std::vector<int> order(ws.n_params);
    std::iota(order.begin(), order.end(), 0);

    bool converged = false;
    while (evals_left >= 4 && !converged && current > settings.cost_tolerance) {
      std::shuffle(order.begin(), order.end(), rng);
      bool any_accept = false;
      for (int idx : order) {
        if (evals_left < 4) break;
        const double s = steps[idx];
        const double center = theta[idx];
        // Probe both directions, then refine with one parabolic jump
        // (quadratic fit through the three samples).
        const double f_plus = eval_at(idx, center + s);
        const double f_minus = eval_at(idx, center - s);
        double best_delta = 0.0, best_cost = current;
        if (f_plus < best_cost) {
          best_cost = f_plus;
          best_delta = s;
        }
        if (f_minus < best_cost) {
          best_cost = f_minus;
          best_delta = -s;
        }
        const double curvature = f_plus + f_minus - 2.0 * current;
        if (curvature > 0.0) {
          const double delta_star =
              std::clamp(-0.5 * s * (f_plus - f_minus) / curvature, -8.0 * s, 8.0 * s);
          const double f_star = eval_at(idx, center + delta_star);
          if (f_star < best_cost) {
            best_cost = f_star;
            best_delta = delta_star;
          }
        } else if (best_delta != 0.0 && evals_left > 0) {
          // Walk downhill while it keeps paying.
          double extend = best_delta;
          for (int grow = 0; grow < 6 && evals_left > 0; ++grow) {
            extend *= 2.0;
            const double f_ext = eval_at(idx, center + extend);
            if (f_ext >= best_cost) break;
            best_cost = f_ext;
            best_delta = extend;
          }
        }
        if (best_cost < current - 1e-18) {
          theta[idx] = center + best_delta;
          evaluate.update_committed(theta, idx, center);
          current = best_cost;
          steps[idx] = std::clamp(0.7 * std::abs(best_delta) + 0.3 * s, 1e-9, 4.0);
          any_accept = true;
        } else {
          steps[idx] *= 0.4;
        }
      }
      if (!any_accept && steps.maxCoeff() < 1e-9) converged = true;
    }
    if (current <= settings.cost_tolerance) converged = true;

    BoltzmannModel candidate = start;
    write_theta(candidate, ws, theta);
    const double true_cost = cost_true(candidate, data, channel);
    if (true_cost < best.cost_true) {
      best.model = candidate;
      best.cost_true = true_cost;
      best.cost_fit = current;
      best.converged = converged;
    }
    best.cost_trace.push_back(best.cost_true);
    if (best.cost_true <= settings.cost_tolerance) break;
  }
  return best;
}

std::vector<SiteWord> sample_initial_configurations(const BoltzmannModel& model, int n,
                                                    std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_initial_configurations: n must be >= 1");
  const Eigen::VectorXd region_p = model.region_probabilities();
  std::vector<double> cumulative(region_p.size());
  std::partial_sum(region_p.data(), region_p.data() + region_p.size(), cumulative.begin());

  std::vector<int> outside;
  std::vector<std::array<double, 5>> outside_cum;
  for (int j = 0; j < model.n_sites(); ++j)
    if (!model.in_region(j)) {
      outside.push_back(j);
      const auto marg = model.outside_marginal(j);
      std::array<double, 5> cum;
      double acc = 0.0;
      for (int s = 0; s < kStates; ++s) cum[s] = (acc += marg[s]);
      outside_cum.push_back(cum);
    }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<SiteWord> draws;
  draws.reserve(n);
  for (int shot = 0; shot < n; ++shot) {
    SiteWord word(model.n_sites(), Local::down);
    const double u = uniform(rng);
    const std::size_t pick =
        std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
    const SiteWord& region_word =
        model.region_words()[std::min(pick, model.region_words().size() - 1)];
    for (std::size_t l = 0; l < model.region().size(); ++l)
      word[model.region()[l]] = region_word[l];
    for (std::size_t k = 0; k < outside.size(); ++k) {
      const double v = uniform(rng);
      int s = 0;
      while (s < kStates - 1 && v > outside_cum[k][s]) ++s;
      word[outside[k]] = static_cast<Local>(s);
    }
    draws.push_back(std::move(word));
  }
  return draws;
}

}  // namespace tjs
