#include "latopt/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace latopt {

double design_diversity(const std::vector<std::vector<double>>& fields) {
  const std::size_t n = fields.size();
  if (n < 2) throw std::invalid_argument("design_diversity: need at least two fields");
  const std::size_t len = fields[0].size();
  for (const auto& f : fields)
    if (f.size() != len)
      throw std::invalid_argument("design_diversity: fields differ in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < len; ++k) {
        const double d = fields[i][k] - fields[j][k];
        d2 += d * d;
      }
      acc += std::sqrt(d2);
    }
  }
  return 2.0 * acc / (static_cast<double>(n) * static_cast<double>(n - 1));
}

RunStats run_stats(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("run_stats: empty sample");
  RunStats st;
  // Welford's update: besides its usual stability, it keeps the mean and
  // the spread bit-exact (x and 0) when every sample is the same value,
  // which a naive sum-then-divide does not guarantee.
  double mean = 0.0;
  double m2 = 0.0;
  double n = 0.0;
  for (double x : xs) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  st.mean = mean;
  if (xs.size() == 1) {
    st.single = true;
    return st;
  }
  st.stddev = std::sqrt(m2 / (n - 1.0));
  return st;
}

}  // namespace latopt
