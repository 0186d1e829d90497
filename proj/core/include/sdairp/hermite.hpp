#pragma once

#include <optional>
#include <vector>

namespace sdairp {

// Probabilist's Hermite polynomial He_n(x) via the recurrence
// He_0 = 1, He_1 = x, He_{n+1} = x He_n - n He_{n-1}.
double hermite_eval(int degree, double x);

// Basis {He_0, ..., He_M}: M functions beyond the constant.
struct HermiteBasis {
  int M = 1;
  std::vector<double> row(double x) const;  // length M + 1
};

// Least-squares fit of observed stock-out costs against the Hermite basis of
// the inventory level. Coefficients come from the minimum-norm solution of a
// rank-revealing factorization; the basis is severely ill-conditioned on
// clustered inputs, so only the fitted values (the orthogonal projection of
// the targets, unique even when beta is not) are reproducible.
struct FitResult {
  int M = 1;
  std::vector<double> beta;           // beta_0 .. beta_M
  std::vector<double> fitted;         // projection of targets at the training inputs
  double condition = 0.0;             // sigma_max / sigma_min over retained singular values
  int rank = 0;
};

FitResult fit(const std::vector<double>& xs, const std::vector<double>& ys, int M);

// beta . basis(x), clamped to [0, rho] when a clamp bound is supplied. Raw
// extrapolation of the ill-conditioned fit can go negative (phantom profit)
// or blow past the stock-out cost; the clamp keeps payoffs sane and is on by
// default in the policy layer.
double predict(const FitResult& f, double x, std::optional<double> clamp_rho = std::nullopt);

}  // namespace sdairp
