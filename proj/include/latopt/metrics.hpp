#pragma once

#include <vector>

namespace latopt {

// Mean pairwise Euclidean distance between flattened design fields:
// 2/(n(n-1)) * sum_{i<j} ||a_i - a_j||_2. Needs at least two fields of the
// same length.
double design_diversity(const std::vector<std::vector<double>>& fields);

struct RunStats {
  double mean = 0.0;
  double stddev = 0.0;   // sample standard deviation (n-1 in the denominator)
  bool single = false;   // true when only one value was given (stddev = 0)
};

RunStats run_stats(const std::vector<double>& xs);

}  // namespace latopt
