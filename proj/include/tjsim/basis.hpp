#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace tjs {

/// Local site states.  The canonical t-J word uses {down, up, hole} with the
/// fixed encoding down=0, up=1, hole=2; {ground, lost} extend the alphabet for
/// the detection/error pipeline and never enter quantum sectors.
enum class Local : std::uint8_t { down = 0, up = 1, hole = 2, ground = 3, lost = 4 };

char to_char(Local s);
Local local_from_char(char c);

/// Classical five-state word (one Local per site), used by the error pipeline.
using SiteWord = std::vector<Local>;

std::string to_string(const SiteWord& word);
SiteWord site_word_from_string(const std::string& s);

/// Hard-core t-J configuration stored as hole and up bitmasks (bit i = site i).
/// Sites not flagged in either mask are spin-down.
struct Configuration {
  std::uint64_t holes = 0;
  std::uint64_t ups = 0;

  Local at(int site) const {
    const std::uint64_t bit = std::uint64_t{1} << site;
    if (holes & bit) return Local::hole;
    return (ups & bit) ? Local::up : Local::down;
  }

  Configuration with(int site, Local s) const;

  bool operator==(const Configuration&) const = default;

  std::string to_string(int n_sites) const;
  static Configuration from_string(const std::string& word);
};

/// Number of configurations with the given conserved quantum numbers.
std::size_t sector_dimension(int n_sites, int n_holes, int n_up);

/// Enumeration of all configurations with fixed hole number and magnetization,
/// in lexicographic order of the site word (down < up < hole, site 0 first).
/// rank() and unrank() are mutually inverse; rank is O(n_sites).
class SectorBasis {
public:
  static constexpr std::size_t default_dimension_cap = 10'000'000;

  SectorBasis(int n_sites, int n_holes, int n_up,
              std::size_t dimension_cap = default_dimension_cap);

  int n_sites() const { return n_sites_; }
  int n_holes() const { return n_holes_; }
  int n_up() const { return n_up_; }
  std::size_t dimension() const { return configs_.size(); }

  const Configuration& config(std::size_t ordinal) const { return configs_[ordinal]; }
  const std::vector<Configuration>& configs() const { return configs_; }

  /// Ordinal of `c` in the enumeration; throws if `c` is outside the sector.
  std::size_t rank(const Configuration& c) const;

  bool contains(const Configuration& c) const;

private:
  int n_sites_, n_holes_, n_up_;
  std::vector<Configuration> configs_;
};

using BasisPtr = std::shared_ptr<const SectorBasis>;

inline BasisPtr make_sector(int n_sites, int n_holes, int n_up,
                            std::size_t cap = SectorBasis::default_dimension_cap) {
  return std::make_shared<SectorBasis>(n_sites, n_holes, n_up, cap);
}

inline std::size_t rank(const SectorBasis& basis, const Configuration& c) {
  return basis.rank(c);
}

}  // namespace tjs
