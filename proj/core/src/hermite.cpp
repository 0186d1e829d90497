#include "sdairp/hermite.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <stdexcept>

namespace sdairp {

double hermite_eval(int degree, double x) {
  if (degree < 0) throw std::invalid_argument("hermite_eval: negative degree");
  if (degree == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int k = 1; k < degree; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> HermiteBasis::row(double x) const {
  std::vector<double> r(M + 1);
  r[0] = 1.0;
  if (M >= 1) r[1] = x;
  for (int k = 1; k < M; ++k) r[k + 1] = x * r[k] - k * r[k - 1];
  return r;
}

FitResult fit(const std::vector<double>& xs, const std::vector<double>& ys, int M) {
  if (M < 1) throw std::invalid_argument("fit: basis size M must be >= 1");
  if (xs.size() != ys.size() || xs.empty())
    throw std::invalid_argument("fit: need equally many xs and ys, at least one");

  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  const Eigen::Index cols = M + 1;
  Eigen::MatrixXd X(n, cols);
  HermiteBasis basis{M};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = basis.row(xs[i]);
    for (Eigen::Index j = 0; j < cols; ++j) X(i, j) = row[j];
  }
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(ys.data(), n);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double cutoff = smax * 1e-12 * std::max<double>(n, cols);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(cols);
  int rank = 0;
  double smin = smax;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cutoff) {
      beta += svd.matrixV().col(k) * (svd.matrixU().col(k).dot(y) / sv(k));
      smin = sv(k);
      ++rank;
    }
  }

  FitResult out;
  out.M = M;
  out.beta.assign(beta.data(), beta.data() + cols);
  Eigen::VectorXd fitted = X * beta;
  out.fitted.assign(fitted.data(), fitted.data() + n);
  out.condition = (rank > 0 && smin > 0.0) ? smax / smin : 0.0;
  out.rank = rank;
  return out;
}

double predict(const FitResult& f, double x, std::optional<double> clamp_rho) {
  HermiteBasis basis{f.M};
  const auto row = basis.row(x);
  double v = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) v += f.beta[j] * row[j];
  if (clamp_rho) v = std::clamp(v, 0.0, *clamp_rho);
  return v;
}

}  // namespace sdairp
