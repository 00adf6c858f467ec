#pragma once

#include <string>
#include <vector>

#include "rwdispatch/market.hpp"

namespace rwd::frp {

/// Net-load forecast-error samples for one dispatch mode.
struct SampleSet {
  std::vector<double> samples;  // MW
  std::string provenance;       // mode label (FBD / Cap-...)
};

struct Histogram {
  double bin_width = 0.0;
  std::vector<double> bin_edges;      // ascending, integer multiples of width
  std::vector<std::size_t> counts;    // one per bin, edges.size() == counts.size() + 1
};

/// Order-statistic quantile with linear interpolation at index h = (n-1)p.
/// Throws on an empty sample set.
double empirical_quantile(const std::vector<double>& samples, double p);

/// Half-open bins [edge, edge + width) anchored at 0.
Histogram build_histogram(const std::vector<double>& samples,
                          double bin_width);

/// FRU from the 97.5% quantile, FRD from the negated 2.5% quantile, both
/// clamped at 0. Requirements come from raw quantiles, never from binned
/// data; the histogram is visualization-only.
market::FrpRequirement requirements_from_samples(const SampleSet& samples);

}  // namespace rwd::frp
