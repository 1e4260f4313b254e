#include "tjsim/basis.hpp"

#include <array>
#include <bit>
#include <stdexcept>

namespace tjs {

char to_char(Local s) {
  switch (s) {
    case Local::down: return 'd';
    case Local::up: return 'u';
    case Local::hole: return 'h';
    case Local::ground: return 'g';
    case Local::lost: return 'L';
  }
  throw std::invalid_argument("bad Local value");
}

Local local_from_char(char c) {
  switch (c) {
    case 'd': return Local::down;
    case 'u': return Local::up;
    case 'h': return Local::hole;
    case 'g': return Local::ground;
    case 'L': return Local::lost;
  }
  throw std::invalid_argument(std::string("bad local state character: ") + c);
}

std::string to_string(const SiteWord& word) {
  std::string s;
  s.reserve(word.size());
  for (Local l : word) s.push_back(to_char(l));
  return s;
}

SiteWord site_word_from_string(const std::string& s) {
  SiteWord word;
  word.reserve(s.size());
  for (char c : s) word.push_back(local_from_char(c));
  return word;
}

Configuration Configuration::with(int site, Local s) const {
  const std::uint64_t bit = std::uint64_t{1} << site;
  Configuration c = *this;
  c.holes &= ~bit;
  c.ups &= ~bit;
  if (s == Local::hole) c.holes |= bit;
  if (s == Local::up) c.ups |= bit;
  if (s == Local::ground || s == Local::lost)
    throw std::invalid_argument("Configuration holds t-J states only");
  return c;
}

std::string Configuration::to_string(int n_sites) const {
  std::string s(n_sites, 'd');
  for (int i = 0; i < n_sites; ++i) s[i] = to_char(at(i));
  return s;
}

Configuration Configuration::from_string(const std::string& word) {
  if (word.size() > 64) throw std::invalid_argument("configuration word longer than 64 sites");
  Configuration c;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const Local s = local_from_char(word[i]);
    if (s == Local::ground || s == Local::lost)
      throw std::invalid_argument("Configuration holds t-J states only");
    c = c.with(static_cast<int>(i), s);
  }
  return c;
}

namespace {

constexpr int kMaxSites = 64;

// Pascal table; C(64,32) still fits in 64 bits.
const std::array<std::array<std::uint64_t, kMaxSites + 1>, kMaxSites + 1>& binomials() {
  static const auto table = [] {
    std::array<std::array<std::uint64_t, kMaxSites + 1>, kMaxSites + 1> c{};
    for (int n = 0; n <= kMaxSites; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
    return c;
  }();
  return table;
}

// Number of words of length `sites` holding exactly `holes` holes and `ups` up
// spins; 0 when infeasible.
std::uint64_t word_count(int sites, int holes, int ups) {
  if (holes < 0 || ups < 0 || holes + ups > sites) return 0;
  return binomials()[sites][holes] * binomials()[sites - holes][ups];
}

void check_sector_args(int n_sites, int n_holes, int n_up) {
  if (n_sites < 1 || n_sites > kMaxSites)
    throw std::invalid_argument("sector: n_sites must be in [1, 64]");
  if (n_holes < 0 || n_up < 0 || n_holes + n_up > n_sites)
    throw std::invalid_argument("sector: need n_holes + n_up <= n_sites with both >= 0");
}

}  // namespace

std::size_t sector_dimension(int n_sites, int n_holes, int n_up) {
  check_sector_args(n_sites, n_holes, n_up);
  const unsigned __int128 dim = static_cast<unsigned __int128>(binomials()[n_sites][n_holes]) *
                                binomials()[n_sites - n_holes][n_up];
  if (dim > static_cast<unsigned __int128>(SIZE_MAX))
    throw std::overflow_error("sector dimension exceeds size_t");
  return static_cast<std::size_t>(dim);
}

SectorBasis::SectorBasis(int n_sites, int n_holes, int n_up, std::size_t dimension_cap)
    : n_sites_(n_sites), n_holes_(n_holes), n_up_(n_up) {
  check_sector_args(n_sites, n_holes, n_up);
  const unsigned __int128 dim = static_cast<unsigned __int128>(binomials()[n_sites][n_holes]) *
                                binomials()[n_sites - n_holes][n_up];
  if (dim > static_cast<unsigned __int128>(dimension_cap))
    throw std::runtime_error("sector dimension exceeds the configured cap");
  configs_.reserve(static_cast<std::size_t>(dim));

  // Depth-first emission in word order (down < up < hole at each site).
  struct Frame {
    Configuration partial;
    int site, holes_left, ups_left;
  };
  std::vector<Frame> stack{{Configuration{}, 0, n_holes, n_up}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.site == n_sites_) {
      configs_.push_back(f.partial);
      continue;
    }
    const int sites_after = n_sites_ - f.site - 1;
    const std::uint64_t bit = std::uint64_t{1} << f.site;
    // Push in reverse choice order so that `down` is explored first.
    if (f.holes_left > 0 && f.holes_left - 1 + f.ups_left <= sites_after) {
      Configuration c = f.partial;
      c.holes |= bit;
      stack.push_back({c, f.site + 1, f.holes_left - 1, f.ups_left});
    }
    if (f.ups_left > 0 && f.holes_left + f.ups_left - 1 <= sites_after) {
      Configuration c = f.partial;
      c.ups |= bit;
      stack.push_back({c, f.site + 1, f.holes_left, f.ups_left - 1});
    }
    if (f.holes_left + f.ups_left <= sites_after)
      stack.push_back({f.partial, f.site + 1, f.holes_left, f.ups_left});
  }
}

bool SectorBasis::contains(const Configuration& c) const {
  if ((c.holes & c.ups) != 0) return false;
  if (n_sites_ < 64 && ((c.holes | c.ups) >> n_sites_) != 0) return false;
  return std::popcount(c.holes) == n_holes_ && std::popcount(c.ups) == n_up_;
}

std::size_t SectorBasis::rank(const Configuration& c) const {
  if (!contains(c)) throw std::invalid_argument("rank: configuration outside sector");
  std::uint64_t r = 0;
  int holes_left = n_holes_, ups_left = n_up_;
  for (int site = 0; site < n_sites_; ++site) {
    const int sites_after = n_sites_ - site - 1;
    const Local x = c.at(site);
    if (x != Local::down)  // words with `down` here come first
      r += word_count(sites_after, holes_left, ups_left);
    if (x == Local::hole)  // then words with `up` here
      r += word_count(sites_after, holes_left, ups_left - 1);
    if (x == Local::hole) --holes_left;
    if (x == Local::up) --ups_left;
  }
  return static_cast<std::size_t>(r);
}

}  // namespace tjs
