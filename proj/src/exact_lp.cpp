#include "massart/exact_lp.hpp"

#include <cstddef>

#include "massart/errors.hpp"

namespace massart::lp {
namespace {

using Row = std::vector<Rational>;

struct Tableau {
  std::vector<Row> rows;  // constraint rows; last entry is the right-hand side
  Row cost;               // reduced costs; last entry is -objective
  std::vector<std::size_t> basis;

  std::size_t cols() const { return cost.size() - 1; }

  void pivot(std::size_t r, std::size_t c) {
    const Rational p = rows[r][c];
    for (auto& v : rows[r]) v /= p;
    auto eliminate = [&](Row& row) {
      if (row[c] == 0) return;
      const Rational f = row[c];
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (rows[r][j] != 0) row[j] -= f * rows[r][j];
      }
    };
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != r) eliminate(rows[i]);
    }
    eliminate(cost);
    basis[r] = c;
  }

  void price_out(const Row& objective) {
    cost = objective;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Rational cb = objective[basis[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < cost.size(); ++j) cost[j] -= cb * rows[i][j];
    }
  }

  /// Minimizes over columns [0, limit). Returns false when unbounded.
  bool run(std::size_t limit) {
    for (;;) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (cost[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return true;
      std::size_t leave = rows.size();
      Rational best;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][enter] <= 0) continue;
        Rational ratio = rows[i].back() / rows[i][enter];
        if (leave == rows.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows.size()) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

Solution solve(const Problem& problem) {
  const std::size_t n = problem.objective.size();
  const std::vector<bool> free = problem.free.empty() ? std::vector<bool>(n, false) : problem.free;
  if (free.size() != n) throw ContractError("lp::solve: free flags size mismatch");
  for (const auto& c : problem.constraints) {
    if (c.coeffs.size() != n) throw ContractError("lp::solve: constraint width mismatch");
  }

  // Structural columns: each variable, plus a negative part for free ones.
  std::vector<std::size_t> neg_col(n, 0);
  std::size_t structural = n;
  for (std::size_t j = 0; j < n; ++j) {
    if (free[j]) neg_col[j] = structural++;
  }
  std::size_t slack_count = 0, art_count = 0;
  for (const auto& c : problem.constraints) {
    if (c.relation != Relation::equal) ++slack_count;
    // Rows whose normalized form is "<=" start with their slack basic.
    const bool flip = c.rhs < 0;
    const bool le = (c.relation == Relation::less_equal && !flip) ||
                    (c.relation == Relation::greater_equal && flip);
    if (!le) ++art_count;
  }
  const std::size_t first_slack = structural;
  const std::size_t first_art = first_slack + slack_count;
  const std::size_t width = first_art + art_count;

  Tableau tab;
  tab.rows.reserve(problem.constraints.size());
  std::size_t slack = first_slack, art = first_art;
  for (const auto& c : problem.constraints) {
    Row row(width + 1, Rational(0));
    const bool flip = c.rhs < 0;
    const Rational sign = flip ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = sign * c.coeffs[j];
      if (free[j]) row[neg_col[j]] = -row[j];
    }
    row[width] = sign * c.rhs;
    Relation rel = c.relation;
    if (flip && rel == Relation::less_equal) {
      rel = Relation::greater_equal;
    } else if (flip && rel == Relation::greater_equal) {
      rel = Relation::less_equal;
    }
    std::size_t basic;
    if (rel == Relation::less_equal) {
      row[slack] = 1;
      basic = slack++;
    } else if (rel == Relation::greater_equal) {
      row[slack++] = -1;
      row[art] = 1;
      basic = art++;
    } else {
      row[art] = 1;
      basic = art++;
    }
    tab.rows.push_back(std::move(row));
    tab.basis.push_back(basic);
  }

  // Phase 1: minimize the artificial sum.
  Row phase1(width + 1, Rational(0));
  for (std::size_t j = first_art; j < width; ++j) phase1[j] = 1;
  tab.price_out(phase1);
  tab.run(width);
  if (-tab.cost[width] != 0) return {Status::infeasible, 0, {}};

  // Drive zero-level artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < tab.rows.size();) {
    if (tab.basis[i] < first_art) {
      ++i;
      continue;
    }
    std::size_t col = first_art;
    for (std::size_t j = 0; j < first_art; ++j) {
      if (tab.rows[i][j] != 0) {
        col = j;
        break;
      }
    }
    if (col == first_art) {
      tab.rows.erase(tab.rows.begin() + static_cast<std::ptrdiff_t>(i));
      tab.basis.erase(tab.basis.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      tab.pivot(i, col);
      ++i;
    }
  }

  // Phase 2 on structural and slack columns only.
  Row phase2(width + 1, Rational(0));
  for (std::size_t j = 0; j < n; ++j) {
    const Rational c = problem.maximize ? -problem.objective[j] : problem.objective[j];
    phase2[j] = c;
    if (free[j]) phase2[neg_col[j]] = -c;
  }
  tab.price_out(phase2);
  if (!tab.run(first_art)) return {Status::unbounded, 0, {}};

  std::vector<Rational> column_value(width, Rational(0));
  for (std::size_t i = 0; i < tab.rows.size(); ++i) column_value[tab.basis[i]] = tab.rows[i][width];
  Solution sol;
  sol.status = Status::optimal;
  sol.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    sol.x[j] = column_value[j];
    if (free[j]) sol.x[j] -= column_value[neg_col[j]];
  }
  sol.value = 0;
  for (std::size_t j = 0; j < n; ++j) sol.value += problem.objective[j] * sol.x[j];
  return sol;
}

}  // namespace massart::lp
