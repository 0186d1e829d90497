#include "sdairp/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdairp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr int kStallLimit = 64;

enum class ColState : unsigned char { AtLower, AtUpper, Basic };

// Two-phase dense tableau simplex over variables with bounds [lb, ub],
// lb finite, ub possibly +inf. Nonbasic variables rest at a bound; entering
// steps honor both the ratio test and the entering variable's own range
// (bound flip).
class Tableau {
 public:
  Tableau(const LinearModel& model, const std::vector<std::pair<double, double>>* bound_override,
          double feas_tol)
      : model_(model), feas_tol_(feas_tol) {
    const std::size_t n = model.vars.size();
    m_ = model.cons.size();

    lb_.reserve(n);
    ub_.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      double lo = model.vars[j].lb, hi = model.vars[j].ub;
      if (bound_override) {
        lo = (*bound_override)[j].first;
        hi = (*bound_override)[j].second;
      }
      lb_.push_back(lo);
      ub_.push_back(hi);
    }
    // slack columns: +1 for <=, -1 for >= (none for ==)
    for (std::size_t i = 0; i < m_; ++i) {
      if (model.cons[i].sense != ConSense::EQ) {
        slack_row_.push_back(static_cast<int>(i));
        slack_sign_.push_back(model.cons[i].sense == ConSense::LE ? 1.0 : -1.0);
        lb_.push_back(0.0);
        ub_.push_back(kInf);
      }
    }
    n_struct_ = n;
    n_real_ = lb_.size();  // structural + slacks

    // Nonbasic start at lb. A <=-row whose positive slack absorbs the
    // residual starts with the slack basic; other rows receive an
    // artificial column (rows scaled so the artificial value is
    // nonnegative).
    std::vector<double> res(m_, 0.0);
    std::vector<int> slack_of_row(m_, -1);
    for (std::size_t s = 0; s < slack_row_.size(); ++s)
      slack_of_row[slack_row_[s]] = static_cast<int>(n_struct_ + s);

    std::vector<double> dense(n_real_, 0.0);
    std::vector<std::vector<double>> rows(m_, std::vector<double>(n_real_, 0.0));
    std::vector<char> needs_artificial(m_, 1);
    std::vector<double> rhs(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      auto& row = rows[i];
      for (const auto& [idx, coef] : model.cons[i].terms) row[idx] += coef;
      const int s = slack_of_row[i];
      if (s >= 0) row[s] = (model.cons[i].sense == ConSense::LE) ? 1.0 : -1.0;
      rhs[i] = model.cons[i].rhs;
      double lhs = 0.0;
      for (std::size_t j = 0; j < n_struct_; ++j)
        if (row[j] != 0.0) lhs += row[j] * lb_[j];
      res[i] = rhs[i] - lhs;
      if (s >= 0 && model.cons[i].sense == ConSense::LE && res[i] >= 0.0)
        needs_artificial[i] = 0;  // slack takes the residual
      else if (s >= 0 && model.cons[i].sense == ConSense::GE && res[i] <= 0.0)
        needs_artificial[i] = 0;  // surplus takes the residual
    }

    std::size_t n_art = 0;
    for (std::size_t i = 0; i < m_; ++i) n_art += needs_artificial[i];
    ncols_ = n_real_ + n_art;
    for (std::size_t k = 0; k < n_art; ++k) {
      lb_.push_back(0.0);
      ub_.push_back(kInf);
    }

    M_.assign(m_ * ncols_, 0.0);
    xB_.assign(m_, 0.0);
    basis_.assign(m_, -1);
    state_.assign(ncols_, ColState::AtLower);
    rhs_ = rhs;

    std::size_t art = n_real_;
    for (std::size_t i = 0; i < m_; ++i) {
      if (!needs_artificial[i]) {
        // slack or surplus basic at |residual|; scale so its coefficient in
        // the basis is +1
        const double flip = model.cons[i].sense == ConSense::GE ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n_real_; ++j) at(i, j) = flip * rows[i][j];
        rhs_[i] = flip * rhs[i];
        const int s = slack_of_row[i];
        basis_[i] = s;
        state_[s] = ColState::Basic;
        xB_[i] = std::fabs(res[i]);
      } else {
        const double flip = res[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n_real_; ++j) at(i, j) = flip * rows[i][j];
        rhs_[i] = flip * rhs[i];
        at(i, art) = 1.0;
        basis_[i] = static_cast<int>(art);
        state_[art] = ColState::Basic;
        xB_[i] = flip * res[i];
        ++art;
      }
    }
  }

  LpStatus run() {
    // Phase 1: minimize the artificial sum.
    std::vector<double> cost(ncols_, 0.0);
    for (std::size_t j = n_real_; j < ncols_; ++j) cost[j] = 1.0;
    init_zrow(cost);
    if (!optimize(cost, /*phase1=*/true)) return LpStatus::Infeasible;  // unreachable in phase 1
    if (phase_objective(cost) > feas_tol_ * 10.0 * (1.0 + std::fabs(rhs_scale())))
      return LpStatus::Infeasible;
    expel_artificials();

    // Phase 2: real objective (normalized to Min).
    std::fill(cost.begin(), cost.end(), 0.0);
    const double sign = model_.sense == ObjSense::Min ? 1.0 : -1.0;
    for (std::size_t j = 0; j < n_struct_; ++j) cost[j] = sign * model_.obj[j];
    init_zrow(cost);
    if (!optimize(cost, /*phase1=*/false)) return LpStatus::Unbounded;
    return LpStatus::Optimal;
  }

  std::vector<double> extract() const {
    std::vector<double> x(n_struct_, 0.0);
    for (std::size_t j = 0; j < n_struct_; ++j)
      x[j] = (state_[j] == ColState::AtUpper) ? ub_[j] : lb_[j];
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_struct_) {
        double v = xB_[i];
        const std::size_t j = basis_[i];
        if (v < lb_[j]) v = lb_[j];
        if (v > ub_[j]) v = ub_[j];
        x[j] = v;
      }
    return x;
  }

  int iterations() const { return iters_; }

 private:
  double& at(std::size_t r, std::size_t c) { return M_[r * ncols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return M_[r * ncols_ + c]; }

  double rhs_scale() const {
    double s = 0.0;
    for (double v : rhs_) s = std::max(s, std::fabs(v));
    return s;
  }

  double value_of(std::size_t j) const {
    return state_[j] == ColState::AtUpper ? ub_[j] : lb_[j];
  }

  void init_zrow(const std::vector<double>& cost) {
    zrow_ = cost;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < ncols_; ++j) zrow_[j] -= cb * at(i, j);
    }
  }

  double phase_objective(const std::vector<double>& cost) const {
    double z = 0.0;
    for (std::size_t i = 0; i < m_; ++i) z += cost[basis_[i]] * xB_[i];
    for (std::size_t j = 0; j < ncols_; ++j)
      if (state_[j] != ColState::Basic && cost[j] != 0.0) z += cost[j] * value_of(j);
    return z;
  }

  bool eligible(std::size_t j) const {
    if (state_[j] == ColState::Basic) return false;
    if (j >= n_real_) return false;  // artificials never re-enter
    if (ub_[j] - lb_[j] < kPivotTol) return false;  // fixed
    if (state_[j] == ColState::AtLower) return zrow_[j] < -kCostTol;
    return zrow_[j] > kCostTol;
  }

  // Returns false on unbounded (phase 2 only).
  bool optimize(const std::vector<double>& cost, bool phase1) {
    int stall = 0;
    bool bland = false;
    double last_obj = phase_objective(cost);
    const long iter_cap = 50000 + 400L * static_cast<long>(m_ + ncols_);

    for (long it = 0;; ++it) {
      if (it > iter_cap) throw std::runtime_error("simplex: iteration cap exceeded");

      // entering column
      int enter = -1;
      if (bland) {
        for (std::size_t j = 0; j < ncols_; ++j)
          if (eligible(j)) {
            enter = static_cast<int>(j);
            break;
          }
      } else {
        double best = kCostTol;
        for (std::size_t j = 0; j < ncols_; ++j) {
          if (!eligible(j)) continue;
          const double viol = state_[j] == ColState::AtLower ? -zrow_[j] : zrow_[j];
          if (viol > best) {
            best = viol;
            enter = static_cast<int>(j);
          }
        }
      }
      if (enter < 0) return true;  // phase optimal

      const double dir = state_[enter] == ColState::AtLower ? 1.0 : -1.0;
      const double enter_from = value_of(enter);

      // ratio test
      double t_best = ub_[enter] - lb_[enter];  // bound flip distance (may be inf)
      int leave_row = -1;
      double leave_alpha = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double alpha = dir * at(i, static_cast<std::size_t>(enter));
        if (std::fabs(alpha) < kPivotTol) continue;
        const std::size_t b = basis_[i];
        double t;
        if (alpha > 0.0) {
          t = (xB_[i] - lb_[b]) / alpha;  // basic falls to its lower bound
        } else {
          if (std::isinf(ub_[b])) continue;
          t = (xB_[i] - ub_[b]) / alpha;  // basic rises to its upper bound
        }
        if (t < 0.0) t = 0.0;
        if (t < t_best - 1e-12) {
          t_best = t;
          leave_row = static_cast<int>(i);
          leave_alpha = alpha;
        } else if (leave_row >= 0 && t <= t_best + 1e-12) {
          // tie break: Bland takes the smallest basic index, otherwise the
          // numerically largest pivot
          const bool take = bland ? basis_[i] < basis_[leave_row]
                                  : std::fabs(alpha) > std::fabs(leave_alpha);
          if (take) {
            leave_row = static_cast<int>(i);
            leave_alpha = alpha;
          }
        }
      }

      if (leave_row < 0) {
        if (std::isinf(t_best)) {
          if (phase1) throw std::runtime_error("simplex: phase-1 unbounded");
          return false;  // unbounded
        }
        // bound flip
        const double delta = dir * t_best;
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = at(i, static_cast<std::size_t>(enter));
          if (a != 0.0) xB_[i] -= a * delta;
        }
        state_[enter] =
            state_[enter] == ColState::AtLower ? ColState::AtUpper : ColState::AtLower;
      } else {
        pivot(static_cast<std::size_t>(leave_row), static_cast<std::size_t>(enter),
              enter_from + dir * t_best);
      }
      ++iters_;

      const double z = phase_objective(cost);
      if (z < last_obj - 1e-12 * (1.0 + std::fabs(last_obj))) {
        stall = 0;
        bland = false;
      } else if (++stall > kStallLimit) {
        bland = true;  // anti-cycling: Bland's rule until progress resumes
      }
      last_obj = z;
    }
  }

  void pivot(std::size_t row, std::size_t enter, double enter_value) {
    const std::size_t leave = basis_[row];
    const double piv = at(row, enter);
    const double move = enter_value - value_of(enter);
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double a = at(i, enter);
      if (a != 0.0) xB_[i] -= a * move;
    }
    // leaving variable exits to the bound it reached
    const std::size_t lb_leave = leave;
    const double gone = xB_[row] - at(row, enter) * move;
    state_[lb_leave] = (!std::isinf(ub_[lb_leave]) &&
                        std::fabs(gone - ub_[lb_leave]) < std::fabs(gone - lb_[lb_leave]))
                           ? ColState::AtUpper
                           : ColState::AtLower;

    const double inv = 1.0 / piv;
    for (std::size_t j = 0; j < ncols_; ++j) at(row, j) *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = at(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < ncols_; ++j) at(i, j) -= f * at(row, j);
      at(i, enter) = 0.0;
    }
    const double zf = zrow_[enter];
    if (zf != 0.0)
      for (std::size_t j = 0; j < ncols_; ++j) zrow_[j] -= zf * at(row, j);
    zrow_[enter] = 0.0;

    basis_[row] = static_cast<int>(enter);
    state_[enter] = ColState::Basic;
    xB_[row] = enter_value;
  }

  // After phase 1, pivot leftover artificials out of the basis where a
  // nonzero real column exists; otherwise the row is redundant and the
  // artificial stays pinned at zero.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (static_cast<std::size_t>(basis_[i]) < n_real_) continue;
      int target = -1;
      for (std::size_t j = 0; j < n_real_; ++j)
        if (state_[j] != ColState::Basic && std::fabs(at(i, j)) > 1e-7) {
          target = static_cast<int>(j);
          break;
        }
      if (target < 0) {
        xB_[i] = 0.0;
        ub_[basis_[i]] = 0.0;
        continue;
      }
      const double delta = xB_[i] / at(i, static_cast<std::size_t>(target));
      pivot(i, static_cast<std::size_t>(target), value_of(target) + delta);
    }
    for (std::size_t j = n_real_; j < ncols_; ++j) ub_[j] = 0.0;
  }

  const LinearModel& model_;
  double feas_tol_;
  std::size_t m_ = 0, n_struct_ = 0, n_real_ = 0, ncols_ = 0;
  std::vector<double> M_, xB_, rhs_, zrow_, lb_, ub_;
  std::vector<int> basis_;
  std::vector<ColState> state_;
  std::vector<int> slack_row_;
  std::vector<double> slack_sign_;
  int iters_ = 0;
};

}  // namespace

LpResult solve_lp(const LinearModel& model,
                  const std::vector<std::pair<double, double>>* bound_override, double feas_tol) {
  model.validate();
  LpResult res;

  if (model.cons.empty()) {
    // pure bound problem
    res.x.resize(model.vars.size());
    for (std::size_t j = 0; j < model.vars.size(); ++j) {
      double lo = model.vars[j].lb, hi = model.vars[j].ub;
      if (bound_override) {
        lo = (*bound_override)[j].first;
        hi = (*bound_override)[j].second;
      }
      if (lo > hi) {
        res.status = LpStatus::Infeasible;
        return res;
      }
      const double c = (model.sense == ObjSense::Min ? 1.0 : -1.0) * model.obj[j];
      if (c >= 0.0) {
        res.x[j] = lo;
      } else if (std::isinf(hi)) {
        res.status = LpStatus::Unbounded;
        return res;
      } else {
        res.x[j] = hi;
      }
    }
    res.status = LpStatus::Optimal;
    res.objective = model.objective_value(res.x);
    return res;
  }

  if (bound_override)
    for (const auto& [lo, hi] : *bound_override)
      if (lo > hi) {
        res.status = LpStatus::Infeasible;
        return res;
      }

  Tableau tab(model, bound_override, feas_tol);
  res.status = tab.run();
  res.iterations = tab.iterations();
  if (res.status == LpStatus::Optimal) {
    res.x = tab.extract();
    res.objective = model.objective_value(res.x);
  }
  return res;
}

}  // namespace sdairp
