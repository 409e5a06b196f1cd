#include "pocsel/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "pocsel/error.hpp"
#include "pocsel/lfp.hpp"

namespace pocsel {

namespace {

constexpr const char* kModule = "latent_model";

void require_oracle_inputs(const ObservedMoments& m) {
  if (!(m.p_s1_d1 > 0.0)) throw Error(kModule, "no selected units in treated arm");
  if (!(m.p_s1_d0 > 0.0)) throw Error(kModule, "no selected units in control arm");
  if (!(m.p_y0_s1d0 > 0.0)) {
    throw Error(kModule, "Assumption 2 violated: P[Y0*=0, OO] = 0 not excluded by data");
  }
}

[[noreturn]] void inconsistent() { throw Error(kModule, "moments inconsistent with assumption set"); }

// ---------------------------------------------------------------------------
// LP mode: variables are the 16 cell masses (plus one slack for dominance).
// All moment constraints are linear after clearing denominators.

Envelope envelope_lp(const ObservedMoments& m, AssumptionSet a) {
  const bool dominance = a == AssumptionSet::A1_5;
  lfp::LinearFractionalProgram prog;
  prog.num_vars = dominance ? 17 : 16;
  auto row_where = [&](auto&& pred) {
    std::vector<double> row(prog.num_vars, 0.0);
    for (std::size_t i = 0; i < 16; ++i) {
      if (pred(cell_at(i))) row[i] = 1.0;
    }
    return row;
  };

  prog.add_row(row_where([](const Cell&) { return true; }), 1.0);
  prog.add_row(row_where([](const Cell& c) { return c.s1 == 1; }), m.p_s1_d1);
  prog.add_row(row_where([](const Cell& c) { return c.s0 == 1; }), m.p_s1_d0);
  prog.add_row(row_where([](const Cell& c) { return c.s1 == 1 && c.y1 == 1; }),
               m.p_y1_s1d1 * m.p_s1_d1);
  prog.add_row(row_where([](const Cell& c) { return c.s0 == 1 && c.y0 == 0; }),
               m.p_y0_s1d0 * m.p_s1_d0);

  auto forbidden = [&](const Cell& c) {
    return stratum_of(c) == Stratum::ON || (a != AssumptionSet::A1_3 && c.y0 == 1 && c.y1 == 0);
  };
  for (std::size_t i = 0; i < 16; ++i) {
    if (!forbidden(cell_at(i))) continue;
    std::vector<double> row(prog.num_vars, 0.0);
    row[i] = 1.0;
    prog.add_row(std::move(row), 0.0);
  }

  if (dominance) {
    // Strata masses are pinned by the selection constraints once ON is
    // empty: P[OO] = P[S0=1], P[NO] = P[S1=1] - P[S0=1]. Dominance then reads
    //   P[NO] * P[Y1*=1, OO] - P[OO] * P[Y1*=1, NO] - slack = 0.
    const double oo = m.p_s1_d0;
    const double no = m.p_s1_d1 - m.p_s1_d0;
    std::vector<double> row(prog.num_vars, 0.0);
    row[cell_index(0, 1, 1, 1)] = no;
    row[cell_index(1, 1, 1, 1)] = no;
    row[cell_index(0, 1, 0, 1)] = -oo;
    row[cell_index(1, 1, 0, 1)] = -oo;
    row[16] = -1.0;
    prog.add_row(std::move(row), 0.0);
  }

  prog.numerator.assign(prog.num_vars, 0.0);
  prog.numerator[cell_index(0, 1, 1, 1)] = 1.0;
  prog.denominator.assign(prog.num_vars, 0.0);
  prog.denominator[cell_index(0, 1, 1, 1)] = 1.0;
  prog.denominator[cell_index(0, 0, 1, 1)] = 1.0;

  const auto lo = lfp::solve(prog, lfp::Sense::Minimize);
  const auto hi = lfp::solve(prog, lfp::Sense::Maximize);
  if (lo.status != lfp::Status::Optimal || hi.status != lfp::Status::Optimal) inconsistent();

  auto to_joint = [&](const std::vector<double>& x) {
    LatentJoint j;
    j.p_d1 = m.p_d1;
    // Forbidden cells are zero in exact arithmetic; z / t can leave dust.
    for (std::size_t i = 0; i < 16; ++i) j.pi[i] = forbidden(cell_at(i)) ? 0.0 : std::max(x[i], 0.0);
    return j;
  };
  return Envelope{lo.objective, hi.objective, to_joint(lo.x), to_joint(hi.x)};
}

// ---------------------------------------------------------------------------
// Grid mode. A point is the always-observed outcome table, parameterized by
// x = P[Y0*=0, Y1*=1 | OO] and y = P[Y0*=1, Y1*=1 | OO]; the untreated data
// pins the Y0* margin to q0. The observed-only-when-treated Y1* share then
// follows from the treated outcome rate, and feasibility is checked directly.

class GridSearch {
public:
  GridSearch(const ObservedMoments& m, AssumptionSet a)
      : q0_(m.p_y0_s1d0),
        oo_(m.p_s1_d0),
        no_(m.p_s1_d1 - m.p_s1_d0),
        treated_y1_(m.p_y1_s1d1 * m.p_s1_d1),
        mtr_(a != AssumptionSet::A1_3),
        dominance_(a == AssumptionSet::A1_5) {}

  // Restores the equalities that random or local moves cannot hit exactly.
  std::array<double, 2> repair(double x, double y) const {
    if (mtr_) y = 1.0 - q0_;
    if (no_ == 0.0) {
      if (mtr_) {
        x = treated_y1_ / oo_ - y;
      } else {
        y = treated_y1_ / oo_ - x;
      }
    }
    return {x, y};
  }

  bool feasible(double x, double y) const {
    constexpr double eps = 1e-12;
    if (x < -eps || x > q0_ + eps || y < -eps || y > 1.0 - q0_ + eps) return false;
    const double y1_oo = x + y;
    if (no_ == 0.0) return std::abs(y1_oo * oo_ - treated_y1_) <= eps;
    const double y1_no = (treated_y1_ - y1_oo * oo_) / no_;
    if (y1_no < -eps || y1_no > 1.0 + eps) return false;
    if (dominance_ && y1_no > y1_oo + eps) return false;
    return true;
  }

  double theta(double x) const { return x / q0_; }

  LatentJoint joint(double x, double y, double p_d1) const {
    LatentJoint j;
    j.p_d1 = p_d1;
    x = std::clamp(x, 0.0, q0_);
    y = std::clamp(y, 0.0, 1.0 - q0_);
    j.at(0, 1, 1, 1) = oo_ * x;
    j.at(0, 0, 1, 1) = oo_ * (q0_ - x);
    j.at(1, 1, 1, 1) = oo_ * y;
    j.at(1, 0, 1, 1) = oo_ * (1.0 - q0_ - y);
    const double y1_no = std::clamp(treated_y1_ - (x + y) * oo_, 0.0, no_);
    j.at(0, 1, 0, 1) = y1_no;
    j.at(0, 0, 0, 1) = no_ - y1_no;
    const double nn = 1.0 - oo_ - no_;
    if (mtr_) {
      j.at(0, 0, 0, 0) = j.at(0, 1, 0, 0) = j.at(1, 1, 0, 0) = nn / 3.0;
    } else {
      j.at(0, 0, 0, 0) = j.at(0, 1, 0, 0) = j.at(1, 0, 0, 0) = j.at(1, 1, 0, 0) = nn / 4.0;
    }
    return j;
  }

  // Greedy local search over axis and anti-diagonal moves with a halving
  // step; `direction` is +1 to maximize theta, -1 to minimize.
  std::array<double, 2> climb(std::array<double, 2> p, double direction) const {
    static constexpr std::array<std::array<double, 2>, 6> kMoves{
        {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}}};
    for (double h = 0.125; h > 1e-13; h *= 0.5) {
      bool moved = true;
      while (moved) {
        moved = false;
        for (const auto& mv : kMoves) {
          const auto cand = repair(p[0] + h * mv[0], p[1] + h * mv[1]);
          if (feasible(cand[0], cand[1]) && direction * (cand[0] - p[0]) > 0.0) {
            p = cand;
            moved = true;
          }
        }
      }
    }
    return p;
  }

private:
  double q0_, oo_, no_, treated_y1_;
  bool mtr_, dominance_;
};

Envelope envelope_grid(const ObservedMoments& m, AssumptionSet a, const OracleResolution& res) {
  if (m.p_s1_d1 < m.p_s1_d0) inconsistent();
  const GridSearch search(m, a);
  Rng rng(substream_seed(res.seed, 0));
  const double q0 = m.p_y0_s1d0;

  bool found = false;
  std::array<double, 2> best_lo{}, best_hi{};
  std::array<double, 2> split{};
  for (std::size_t k = 0; k < res.samples; ++k) {
    // Uniform draw of the outcome table with its Y0* margin fixed.
    dirichlet_flat(rng, split);
    const double x = q0 * split[0];
    dirichlet_flat(rng, split);
    const double y = (1.0 - q0) * split[0];
    const auto p = search.repair(x, y);
    if (!search.feasible(p[0], p[1])) continue;
    if (!found || p[0] < best_lo[0]) best_lo = p;
    if (!found || p[0] > best_hi[0]) best_hi = p;
    found = true;
  }
  if (!found) inconsistent();

  best_lo = search.climb(best_lo, -1.0);
  best_hi = search.climb(best_hi, +1.0);
  return Envelope{search.theta(best_lo[0]), search.theta(best_hi[0]),
                  search.joint(best_lo[0], best_lo[1], m.p_d1),
                  search.joint(best_hi[0], best_hi[1], m.p_d1)};
}

}  // namespace

Envelope sharp_envelope_oracle(const ObservedMoments& m, AssumptionSet a,
                               const OracleResolution& resolution) {
  require_oracle_inputs(m);
  if (resolution.mode == OracleMode::Grid) return envelope_grid(m, a, resolution);
  return envelope_lp(m, a);
}

}  // namespace pocsel
