#include "phoneboost/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "phoneboost/error.hpp"
#include "phoneboost/random.hpp"

namespace phoneboost::svm {

double LinearSvm::decision(std::span<const double> x) const {
  double acc = bias;
  for (std::size_t d = 0; d < weights.size(); ++d) acc += weights[d] * x[d];
  return acc;
}

LinearSvm train_linear_svm(std::span<const double> samples, std::size_t dim, std::span<const int> labels,
                           const Options& options) {
  const std::size_t n = labels.size();
  if (samples.size() != n * dim) throw InvalidArgument("sample matrix does not match label count");
  if (n == 0) throw InvalidArgument("SVM training needs samples");
  if (!(options.c > 0.0)) throw InvalidArgument("SVM C must be positive");

  // w[dim] is the bias weight of the implicit constant feature.
  std::vector<double> w(dim + 1, 0.0);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> qd(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = samples.subspan(i * dim, dim);
    qd[i] = std::inner_product(row.begin(), row.end(), row.begin(), 1.0);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(options.seed);

  LinearSvm out;
  for (std::size_t epoch = 0; epoch < options.max_epochs; ++epoch) {
    out.epochs = epoch + 1;
    rng.shuffle(std::span(order));
    double max_pg = -std::numeric_limits<double>::infinity();
    double min_pg = std::numeric_limits<double>::infinity();
    for (const std::size_t i : order) {
      const auto row = samples.subspan(i * dim, dim);
      const double y = labels[i] > 0 ? 1.0 : -1.0;
      double margin = w[dim];
      for (std::size_t d = 0; d < dim; ++d) margin += w[d] * row[d];
      const double g = y * margin - 1.0;
      double pg = g;
      if (alpha[i] == 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha[i] == options.c) {
        pg = std::max(g, 0.0);
      }
      max_pg = std::max(max_pg, pg);
      min_pg = std::min(min_pg, pg);
      if (std::abs(pg) > 1e-14) {
        const double old = alpha[i];
        alpha[i] = std::clamp(old - g / qd[i], 0.0, options.c);
        const double step = (alpha[i] - old) * y;
        for (std::size_t d = 0; d < dim; ++d) w[d] += step * row[d];
        w[dim] += step;
      }
    }
    if (max_pg - min_pg < options.tolerance) break;
  }
  out.weights.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(dim));
  out.bias = w[dim];
  return out;
}

}  // namespace phoneboost::svm
