#pragma once

#include "logrank/rational.hpp"

#include <vector>

namespace logrank {

/// Exact equilibrium of a finite zero-sum game.
struct GameSolution {
    Rational value;                 // payoff to the row (maximizing) player
    std::vector<Rational> row_mix;  // equilibrium mixture over row strategies
    std::vector<Rational> col_mix;  // equilibrium mixture over column strategies
};

/// Solve the zero-sum game with payoff[i][j] = payoff to the row maximizer
/// when row i meets column j. Exact rational simplex (Bland's rule), so the
/// returned value and mixtures satisfy the equilibrium conditions exactly:
///   min_j (row_mix^T payoff)_j == value == max_i (payoff col_mix)_i.
[[nodiscard]] GameSolution solve_zero_sum(const std::vector<std::vector<Rational>>& payoff);

/// Floating-point variant of the same simplex. Used as the fast inner solver
/// in double-oracle loops whose certificates are re-derived exactly from the
/// returned mixtures; do not rely on the value beyond ~1e-12.
struct ApproxGameSolution {
    double value = 0;
    std::vector<double> row_mix;
    std::vector<double> col_mix;
};
[[nodiscard]] ApproxGameSolution solve_zero_sum_approx(const std::vector<std::vector<double>>& payoff);

}  // namespace logrank
