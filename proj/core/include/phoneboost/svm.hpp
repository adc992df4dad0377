#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace phoneboost::svm {

struct Options {
  double c = 1.0;
  std::size_t max_epochs = 2000;
  /// Stop once the spread of projected gradients falls below this.
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
};

struct LinearSvm {
  std::vector<double> weights;
  double bias = 0.0;
  std::size_t epochs = 0;

  double decision(std::span<const double> x) const;
};

/// L2-regularized hinge-loss (L1-loss) linear SVM solved by dual coordinate
/// descent. The bias is learned as the weight of a constant 1 feature and is
/// regularized with the rest. Visiting order per epoch is a seeded shuffle,
/// so results depend only on the data, its order, and options.seed.
///
/// `samples` is row-major, one row of `dim` values per label.
LinearSvm train_linear_svm(std::span<const double> samples, std::size_t dim, std::span<const int> labels,
                           const Options& options = {});

}  // namespace phoneboost::svm
