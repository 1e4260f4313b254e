#include "tjsim/couplings.hpp"

#include <cmath>
#include <stdexcept>

namespace tjs {

BondValues CouplingSet::bond(const LatticeGeometry& g, int i, int j) const {
  const auto key = std::minmax(i, j);
  if (const auto it = bond_overrides.find({key.first, key.second}); it != bond_overrides.end())
    return it->second;
  const double r = g.distance(i, j);
  if (r > range_cutoff) return {};
  const double hop_scale = std::pow(a_ref / r, hop_power);
  const double spin_scale = std::pow(a_ref / r, spin_power);
  return {t_up * hop_scale, t_dn * hop_scale, j_perp * spin_scale, j_z * spin_scale};
}

CouplingSet CouplingSet::equilateral_reference() {
  CouplingSet c;
  c.t_up = mhz(1.1);
  c.t_dn = mhz(1.2);
  c.j_perp = mhz(0.107);
  c.j_z = mhz(-0.071);
  c.a_ref = 14.7;
  return c;
}

CouplingSet CouplingSet::half_ratio_reference() {
  CouplingSet c;
  c.t_up = mhz(1.1);
  c.t_dn = mhz(1.2);
  c.j_perp = mhz(0.110);
  c.j_z = mhz(-0.076);
  c.a_ref = 19.6;
  return c;
}

BondValues equilateral_rung_values() { return {mhz(1.1), mhz(1.2), mhz(0.107), mhz(-0.071)}; }
BondValues equilateral_leg_values() { return {mhz(0.95), mhz(1.0), mhz(0.075), mhz(-0.05)}; }
BondValues half_ratio_rung_values() { return {mhz(1.1), mhz(1.2), mhz(0.110), mhz(-0.076)}; }
BondValues half_ratio_leg_values() { return {mhz(0.40), mhz(0.42), mhz(0.013), mhz(-0.008)}; }

CouplingSet with_ladder_table_overrides(CouplingSet c, const LatticeGeometry& g,
                                        const BondValues& rung, const BondValues& leg) {
  if (g.kind() != LatticeKind::ladder)
    throw std::invalid_argument("ladder table overrides need a ladder geometry");
  for (int i = 0; i + 1 < g.n_sites(); ++i) c.bond_overrides[{i, i + 1}] = rung;
  for (int i = 0; i + 2 < g.n_sites(); ++i) c.bond_overrides[{i, i + 2}] = leg;
  return c;
}

double ramp_value(const LightShiftProgram& p, double T) {
  if (T < 0.0) throw std::invalid_argument("ramp_value: negative time");
  if (p.tau <= 0.0) throw std::invalid_argument("ramp_value: tau must be positive");
  double magnitude;
  if (T <= p.t_knee)
    magnitude = p.t_knee > 0.0 ? p.delta0 + (p.delta_knee - p.delta0) * (T / p.t_knee)
                               : p.delta_knee;
  else
    magnitude = p.delta_knee * std::exp(-(T - p.t_knee) / p.tau);
  return p.sign * magnitude;
}

}  // namespace tjs
