#include "pocsel/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pocsel/error.hpp"

namespace pocsel {

std::string_view to_string(AssumptionSet a) noexcept {
  switch (a) {
    case AssumptionSet::A1_3: return "A1_3";
    case AssumptionSet::A1_4: return "A1_4";
    case AssumptionSet::A1_5: return "A1_5";
  }
  return "?";
}

std::optional<AssumptionSet> parse_assumption_set(std::string_view text) noexcept {
  for (auto a : kAllAssumptionSets) {
    if (text == to_string(a)) return a;
  }
  if (text == "A1-3" || text == "1-3") return AssumptionSet::A1_3;
  if (text == "A1-4" || text == "1-4") return AssumptionSet::A1_4;
  if (text == "A1-5" || text == "1-5") return AssumptionSet::A1_5;
  return std::nullopt;
}

namespace {

void require_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error("bounds_core", std::string(name) + " must lie in [0,1], got " + std::to_string(v));
  }
}

struct Inputs {
  double p1;     // P[Y=1|S=1,D=1]
  double q0;     // P[Y=0|S=1,D=0]
  double alpha;  // trim ratio
};

Inputs validated(const ObservedMoments& m) {
  require_probability(m.p_y1_s1d1, "p_y1_s1d1");
  require_probability(m.p_y0_s1d0, "p_y0_s1d0");
  require_probability(m.p_s1_d1, "p_s1_d1");
  require_probability(m.p_s1_d0, "p_s1_d0");
  require_probability(m.p_d1, "p_d1");
  const double alpha = trim_ratio(m);
  if (m.p_s1_d0 == 0.0) {
    throw Error("bounds_core", "no selected units in control arm");
  }
  if (m.p_y0_s1d0 == 0.0) {
    throw Error("bounds_core",
                "Assumption 2 violated: P[Y0*=0, OO] = 0 not excluded by data");
  }
  return {m.p_y1_s1d1, m.p_y0_s1d0, alpha};
}

BoundsInterval clip(double lb_raw, double ub_raw, AssumptionSet a, bool violated) {
  BoundsInterval out;
  out.assumption_set = a;
  out.lb_raw = lb_raw;
  out.ub_raw = ub_raw;
  out.lb = std::max(lb_raw, 0.0);
  out.ub = std::min(ub_raw, 1.0);
  out.lb_clipped = lb_raw < 0.0;
  out.ub_clipped = ub_raw > 1.0;
  out.restriction_violated = violated;
  out.crossed = out.lb > out.ub;
  return out;
}

// Boole-Frechet lower bound applied to the Horowitz-Manski lower bound on
// P[Y1*=1 | OO]; shared by the first two assumption sets.
double lower_a13_raw(const Inputs& in) {
  const double y1_oo_lower = (in.p1 - (1.0 - in.alpha)) / in.alpha;
  return (y1_oo_lower + in.q0 - 1.0) / in.q0;
}

double upper_a14_raw(const Inputs& in) { return (in.p1 / in.alpha + in.q0 - 1.0) / in.q0; }

}  // namespace

double trim_ratio(const ObservedMoments& m) {
  if (m.p_s1_d1 == 0.0) {
    throw Error("bounds_core", "no selected units in treated arm");
  }
  return m.p_s1_d0 / m.p_s1_d1;
}

bool selection_restriction_holds(const ObservedMoments& m) noexcept {
  return m.p_s1_d1 >= m.p_s1_d0;
}

bool outcome_restriction_holds(const ObservedMoments& m) noexcept {
  return m.p_y1_s1d1 * m.p_s1_d1 >= (1.0 - m.p_y0_s1d0) * m.p_s1_d0;
}

BoundsInterval bounds_a13(const ObservedMoments& m) {
  const Inputs in = validated(m);
  const double ub_raw = in.p1 / (in.alpha * in.q0);
  return clip(lower_a13_raw(in), ub_raw, AssumptionSet::A1_3, in.alpha > 1.0);
}

BoundsInterval bounds_a14(const ObservedMoments& m) {
  const Inputs in = validated(m);
  const bool violated = in.alpha > 1.0 || !outcome_restriction_holds(m);
  return clip(lower_a13_raw(in), upper_a14_raw(in), AssumptionSet::A1_4, violated);
}

BoundsInterval bounds_a15(const ObservedMoments& m) {
  const Inputs in = validated(m);
  const bool violated = in.alpha > 1.0 || !outcome_restriction_holds(m);
  const double lb_raw = (in.p1 + in.q0 - 1.0) / in.q0;
  return clip(lb_raw, upper_a14_raw(in), AssumptionSet::A1_5, violated);
}

BoundsInterval compute_bounds(const ObservedMoments& m, AssumptionSet a) {
  switch (a) {
    case AssumptionSet::A1_3: return bounds_a13(m);
    case AssumptionSet::A1_4: return bounds_a14(m);
    case AssumptionSet::A1_5: return bounds_a15(m);
  }
  throw Error("bounds_core", "unknown assumption set");
}

}  // namespace pocsel
