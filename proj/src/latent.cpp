#include "pocsel/latent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pocsel/bounds.hpp"
#include "pocsel/error.hpp"

namespace pocsel {

namespace {

constexpr const char* kModule = "latent_model";

// Outcome table (y0, y1) of one stratum, indexed y0 * 2 + y1.
using OutcomeTable = std::array<double, 4>;

constexpr std::size_t outcome(int y0, int y1) { return static_cast<std::size_t>(y0 * 2 + y1); }

bool allowed(const Cell& c, AssumptionSet a) {
  if (stratum_of(c) == Stratum::ON) return false;
  if (a != AssumptionSet::A1_3 && c.y0 == 1 && c.y1 == 0) return false;
  return true;
}

double share_y1(const LatentJoint& j, int s0, int s1, double mass) {
  return (j.at(0, 1, s0, s1) + j.at(1, 1, s0, s1)) / mass;
}

void require_constructible(const ObservedMoments& m, AssumptionSet a) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(m.p_y1_s1d1) || !in_unit(m.p_y0_s1d0) || !in_unit(m.p_s1_d1) || !in_unit(m.p_s1_d0)) {
    throw Error(kModule, "observed moments must lie in [0,1]");
  }
  if (!(m.p_d1 > 0.0 && m.p_d1 < 1.0)) {
    throw Error(kModule, "Assumption 2 violated: P[D=1] must lie in (0,1)");
  }
  if (m.p_s1_d1 == 0.0) throw Error(kModule, "no selected units in treated arm");
  if (m.p_s1_d0 == 0.0) throw Error(kModule, "no selected units in control arm");
  if (m.p_y0_s1d0 == 0.0) {
    throw Error(kModule, "Assumption 2 violated: P[Y0*=0, OO] = 0 not excluded by data");
  }
  if (!selection_restriction_holds(m)) {
    throw Error(kModule, "selection restriction violated: P[S=1|D=1] < P[S=1|D=0]");
  }
  if (a != AssumptionSet::A1_3 && !outcome_restriction_holds(m)) {
    throw Error(kModule, "outcome restriction violated: P[Y=1|D=1] < P[Y=1|D=0]");
  }
}

// Outcome distribution inside the always-observed stratum attaining the
// requested endpoint. The Y0*=0 column always sums to q0 and the Y0*=1
// column to 1 - q0, so the untreated data restriction holds by construction.
OutcomeTable always_observed_table(const ObservedMoments& m, AssumptionSet a, Endpoint which) {
  const double p1 = m.p_y1_s1d1;
  const double q0 = m.p_y0_s1d0;
  const double alpha = trim_ratio(m);
  // Horowitz-Manski bounds on P[Y1*=1 | OO].
  const double y1_lower = (p1 - (1.0 - alpha)) / alpha;
  const double y1_upper = p1 / alpha;

  double p01 = 0.0;
  double p11 = 0.0;
  if (a == AssumptionSet::A1_3) {
    if (which == Endpoint::Lower) {
      const double diamond = std::max(y1_lower, 0.0);
      p01 = std::max(diamond + q0 - 1.0, 0.0);
      p11 = std::min(1.0 - q0, diamond);
    } else {
      p01 = std::min(y1_upper, q0);
      p11 = std::max(std::min(y1_upper, 1.0) - q0, 0.0);
    }
  } else if (which == Endpoint::Upper) {
    // Shared by A1_4 and A1_5.
    p01 = std::min(y1_upper, 1.0) + q0 - 1.0;
    p11 = 1.0 - q0;
  } else if (a == AssumptionSet::A1_4) {
    const double diamond = std::max(y1_lower, 1.0 - q0);
    p01 = diamond + q0 - 1.0;
    p11 = 1.0 - q0;
  } else {
    p01 = std::max(p1 + q0 - 1.0, 0.0);
    p11 = 1.0 - q0;
  }

  OutcomeTable t{};
  t[outcome(0, 1)] = std::clamp(p01, 0.0, q0);
  t[outcome(1, 1)] = std::clamp(p11, 0.0, 1.0 - q0);
  // The (0,0) cell is the complement q0 - P(0,1); the printed min{..., 0} of
  // the stochastic-dominance variant reduces to the same expression.
  t[outcome(0, 0)] = std::max(q0 - t[outcome(0, 1)], 0.0);
  t[outcome(1, 0)] = std::max((1.0 - q0) - t[outcome(1, 1)], 0.0);
  return t;
}

}  // namespace

double LatentJoint::stratum_mass(Stratum s) const {
  double total = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (stratum_of(cell_at(i)) == s) total += pi[i];
  }
  return total;
}

void LatentJoint::validate() const {
  double total = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (!(pi[i] >= 0.0) || !std::isfinite(pi[i])) {
      throw Error(kModule, "negative or non-finite mass in cell " + std::to_string(i));
    }
    total += pi[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(kModule, "cell masses sum to " + std::to_string(total) + ", not 1");
  }
  if (!(p_d1 > 0.0 && p_d1 < 1.0)) {
    throw Error(kModule, "p_d1 must lie in (0,1)");
  }
}

bool AssumptionReport::satisfies(AssumptionSet a) const noexcept {
  const bool base = holds_a1 && holds_a2 && holds_a3;
  switch (a) {
    case AssumptionSet::A1_3: return base;
    case AssumptionSet::A1_4: return base && holds_a4;
    case AssumptionSet::A1_5: return base && holds_a4 && holds_a5;
  }
  return false;
}

AssumptionReport check_assumptions(const LatentJoint& j) {
  AssumptionReport r;
  auto describe = [](std::size_t i, double mass) {
    const Cell c = cell_at(i);
    std::ostringstream os;
    os << "cell (y0=" << c.y0 << ",y1=" << c.y1 << ",s0=" << c.s0 << ",s1=" << c.s1
       << ") has mass " << mass;
    return os.str();
  };

  const double oo_y0_zero = j.at(0, 0, 1, 1) + j.at(0, 1, 1, 1);
  r.holds_a2 = j.p_d1 > 0.0 && j.p_d1 < 1.0 && oo_y0_zero > 0.0;
  if (!(j.p_d1 > 0.0 && j.p_d1 < 1.0)) r.details.push_back("A2: P[D=1] outside (0,1)");
  if (!(oo_y0_zero > 0.0)) r.details.push_back("A2: P[Y0*=0, OO] = 0");

  r.holds_a3 = true;
  r.holds_a4 = true;
  for (std::size_t i = 0; i < j.pi.size(); ++i) {
    const Cell c = cell_at(i);
    if (j.pi[i] == 0.0) continue;
    if (stratum_of(c) == Stratum::ON) {
      r.holds_a3 = false;
      r.details.push_back("A3: " + describe(i, j.pi[i]));
    }
    if (c.y0 == 1 && c.y1 == 0) {
      r.holds_a4 = false;
      r.details.push_back("A4: " + describe(i, j.pi[i]));
    }
  }

  const double oo = j.stratum_mass(Stratum::OO);
  const double no = j.stratum_mass(Stratum::NO);
  if (oo > 0.0 && no > 0.0) {
    const double y1_oo = share_y1(j, 1, 1, oo);
    const double y1_no = share_y1(j, 0, 1, no);
    r.holds_a5 = y1_oo + kDominanceSlack >= y1_no;
    if (!r.holds_a5) {
      std::ostringstream os;
      os << "A5: P[Y1*=1|OO]=" << y1_oo << " < P[Y1*=1|NO]=" << y1_no;
      r.details.push_back(os.str());
    }
  } else {
    r.holds_a5 = true;
    r.details.push_back(oo > 0.0 ? "A5: vacuous, NO stratum has zero mass"
                                 : "A5: vacuous, OO stratum has zero mass");
  }
  return r;
}

double theta_oo(const LatentJoint& j) {
  const double complier = j.at(0, 1, 1, 1);
  const double denom = j.at(0, 0, 1, 1) + complier;
  if (!(denom > 0.0)) throw Error(kModule, "Assumption 2 violated");
  return complier / denom;
}

ObservedMoments observed_from_latent(const LatentJoint& j) {
  double s1 = 0.0, s0 = 0.0, y1_s1 = 0.0, y0zero_s0 = 0.0;
  for (std::size_t i = 0; i < j.pi.size(); ++i) {
    const Cell c = cell_at(i);
    if (c.s1 == 1) {
      s1 += j.pi[i];
      if (c.y1 == 1) y1_s1 += j.pi[i];
    }
    if (c.s0 == 1) {
      s0 += j.pi[i];
      if (c.y0 == 0) y0zero_s0 += j.pi[i];
    }
  }
  if (!(s1 > 0.0)) throw Error(kModule, "P[S1=1] = 0: treated arm never selected");
  if (!(s0 > 0.0)) throw Error(kModule, "P[S0=1] = 0: control arm never selected");
  ObservedMoments m;
  m.p_y1_s1d1 = y1_s1 / s1;
  m.p_y0_s1d0 = y0zero_s0 / s0;
  m.p_s1_d1 = s1;
  m.p_s1_d0 = s0;
  m.p_d1 = j.p_d1;
  return m;
}

LatentJoint construct_bound_distribution(const ObservedMoments& m, AssumptionSet a, Endpoint which) {
  require_constructible(m, a);
  const OutcomeTable oo_table = always_observed_table(m, a, which);

  const double oo = m.p_s1_d0;
  const double no = m.p_s1_d1 - m.p_s1_d0;
  const double nn = 1.0 - m.p_s1_d1;

  LatentJoint j;
  j.p_d1 = m.p_d1;
  for (int y0 = 0; y0 < 2; ++y0) {
    for (int y1 = 0; y1 < 2; ++y1) j.at(y0, y1, 1, 1) = oo * oo_table[outcome(y0, y1)];
  }

  // Observed-only-when-treated units never have Y0*=1; their Y1* share is
  // whatever the treated outcome rate leaves after the always-observed.
  const double y1_oo_mass = j.at(0, 1, 1, 1) + j.at(1, 1, 1, 1);
  const double y1_no_mass = std::clamp(m.p_y1_s1d1 * m.p_s1_d1 - y1_oo_mass, 0.0, no);
  j.at(0, 1, 0, 1) = y1_no_mass;
  j.at(0, 0, 0, 1) = no - y1_no_mass;

  // Never-observed cells are unrestricted by the data; spread uniformly over
  // the outcome cells the assumption set admits.
  if (a == AssumptionSet::A1_3) {
    for (int y0 = 0; y0 < 2; ++y0) {
      for (int y1 = 0; y1 < 2; ++y1) j.at(y0, y1, 0, 0) = nn / 4.0;
    }
  } else {
    j.at(0, 0, 0, 0) = nn / 3.0;
    j.at(0, 1, 0, 0) = nn / 3.0;
    j.at(1, 1, 0, 0) = nn / 3.0;
  }
  return j;
}

LatentJoint construct_interior_distribution(const ObservedMoments& m, AssumptionSet a, double omega) {
  if (!(omega > 0.0 && omega < 1.0)) {
    throw Error(kModule, "omega must lie in (0,1)");
  }
  const LatentJoint lower = construct_bound_distribution(m, a, Endpoint::Lower);
  const LatentJoint upper = construct_bound_distribution(m, a, Endpoint::Upper);
  LatentJoint j;
  j.p_d1 = m.p_d1;
  for (std::size_t i = 0; i < j.pi.size(); ++i) {
    j.pi[i] = omega * lower.pi[i] + (1.0 - omega) * upper.pi[i];
  }
  return j;
}

LatentJoint random_latent_joint(AssumptionSet a, Rng& rng) {
  std::array<std::size_t, 16> cells{};
  std::size_t count = 0;
  for (std::size_t i = 0; i < 16; ++i) {
    if (allowed(cell_at(i), a)) cells[count++] = i;
  }
  std::array<double, 16> weights{};
  for (;;) {
    LatentJoint j;
    dirichlet_flat(rng, std::span<double>(weights.data(), count));
    for (std::size_t k = 0; k < count; ++k) j.pi[cells[k]] = weights[k];
    j.p_d1 = 0.05 + 0.9 * uniform01(rng);
    if (a != AssumptionSet::A1_5 || check_assumptions(j).holds_a5) return j;
  }
}

std::string to_fixture(const LatentJoint& j) {
  std::string out;
  char buf[32];
  for (double v : j.pi) {
    std::snprintf(buf, sizeof buf, "%.17g ", v);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", j.p_d1);
  out += buf;
  return out;
}

LatentJoint from_fixture(const std::string& text) {
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  LatentJoint j;
  for (double& v : j.pi) {
    if (!(is >> v)) throw Error(kModule, "fixture: expected 17 numbers");
  }
  if (!(is >> j.p_d1)) throw Error(kModule, "fixture: expected 17 numbers");
  std::string rest;
  if (is >> rest) throw Error(kModule, "fixture: trailing content '" + rest + "'");
  j.validate();
  return j;
}

}  // namespace pocsel
