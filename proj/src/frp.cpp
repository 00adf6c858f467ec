#include "rwdispatch/frp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rwd::frp {

double empirical_quantile(const std::vector<double>& samples, double p) {
  if (samples.empty())
    throw std::invalid_argument("quantile of an empty sample set");
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("quantile fraction outside [0, 1]");
  std::vector<double> s = samples;
  std::sort(s.begin(), s.end());
  const double h = static_cast<double>(s.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return s[lo] + frac * (s[hi] - s[lo]);
}

Histogram build_histogram(const std::vector<double>& samples,
                          double bin_width) {
  if (!(bin_width > 0.0))
    throw std::invalid_argument("bin width must be positive");
  Histogram h;
  h.bin_width = bin_width;
  if (samples.empty()) return h;
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  const long first = static_cast<long>(std::floor(*mn / bin_width));
  long last = static_cast<long>(std::floor(*mx / bin_width));
  h.counts.assign(static_cast<std::size_t>(last - first + 1), 0);
  for (double v : samples) {
    long b = static_cast<long>(std::floor(v / bin_width)) - first;
    b = std::clamp(b, 0L, last - first);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  h.bin_edges.resize(h.counts.size() + 1);
  for (std::size_t i = 0; i < h.bin_edges.size(); ++i)
    h.bin_edges[i] = static_cast<double>(first + static_cast<long>(i)) * bin_width;
  return h;
}

market::FrpRequirement requirements_from_samples(const SampleSet& set) {
  market::FrpRequirement req;
  req.fru = std::max(0.0, empirical_quantile(set.samples, 0.975));
  req.frd = std::max(0.0, -empirical_quantile(set.samples, 0.025));
  return req;
}

}  // namespace rwd::frp
