#include <cmath>
#include <random>

#include <doctest.h>

#include "rwdispatch/uncertainty.hpp"

using namespace rwd::uncertainty;

TEST_CASE("apply_cap examples") {
  CapProfile one;
  one.uniform = 1.0;
  CHECK(apply_cap({20.0, 20.0}, one, 0) == std::vector<double>{19.0, 19.0});
  CapProfile zero;
  CHECK(apply_cap({20.0, 20.0}, zero, 0) == std::vector<double>{20.0, 20.0});
  CHECK(apply_cap({0.5, 20.0}, one, 0) == std::vector<double>{0.0, 19.0});
}

TEST_CASE("apply_cap is monotone in the cap") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int it = 0; it < 100; ++it) {
    const std::vector<double> v{u(rng) * 8, u(rng) * 8};
    CapProfile small, big;
    small.uniform = u(rng);
    big.uniform = small.uniform + u(rng);
    const auto a = apply_cap(v, small, 0);
    const auto b = apply_cap(v, big, 0);
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(b[k] <= a[k]);
  }
}

TEST_CASE("per-unit and per-interval cap overrides") {
  CapProfile p;
  p.uniform = 1.0;
  p.per_unit = std::vector<double>{0.5, 2.0};
  p.per_interval_override[3] = {4.0, 4.0};
  CHECK(p.at(0, 0) == 0.5);
  CHECK(p.at(1, 0) == 2.0);
  CHECK(p.at(0, 3) == 4.0);
  CHECK(p.total(2, 0) == 2.5);
  CHECK(p.total(2, 3) == 8.0);
}

TEST_CASE("advisory and binding totals with cross-feeding") {
  CHECK(advisory_ver_total({19.0, 19.0}) == 38.0);
  CHECK(advisory_ver_total({}) == 0.0);
  CHECK(advisory_ver_total({20.0, 20.0}) == 40.0);

  // unit 1's surplus over its own cap covers unit 2's shortfall
  CHECK(binding_ver_total({22.0, 15.0}, std::vector<double>{19.0, 19.0}) ==
        37.0);
  CHECK(binding_ver_total({20.0, 20.0}, std::vector<double>{19.0, 19.0}) ==
        38.0);
  CHECK(binding_ver_total({20.0, 20.0}, std::nullopt) == 40.0);
}

TEST_CASE("sampler moments and degenerate cases") {
  std::mt19937_64 rng(99);
  double sum = 0.0, sumsq = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const auto r = sample_realization({20.0}, 0.1, rng);
    sum += r[0];
    sumsq += r[0] * r[0];
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sumsq / n - mean * mean);
  CHECK(mean == doctest::Approx(20.0).epsilon(0.0025));
  CHECK(sd == doctest::Approx(2.0).epsilon(0.025));

  auto exact = sample_realization({20.0, 0.0}, 0.0, rng);
  CHECK(exact == std::vector<double>{20.0, 0.0});
  for (int k = 0; k < 1000; ++k)
    CHECK(sample_realization({0.05}, 5.0, rng)[0] >= 0.0);
}

TEST_CASE("net-load delta arithmetic") {
  CHECK(net_load_delta_fbd({20.0, 20.0}, {18.0, 19.0}) == doctest::Approx(3.0));
  CHECK(net_load_delta_fbd({20.0, 20.0}, {20.0, 20.0}) == 0.0);
  CHECK(net_load_delta_fbd({20.0, 20.0}, {22.0, 21.0}) ==
        doctest::Approx(-3.0));

  CHECK(net_load_delta_rfbd(35.0, 38.0) == doctest::Approx(3.0));
  CHECK(net_load_delta_rfbd(41.0, 38.0) == 0.0);
}

TEST_CASE("rfbd delta identity against the fbd delta") {
  std::mt19937_64 rng(314159);
  CapProfile caps;
  caps.uniform = 1.0;
  const std::vector<double> advisory{20.0, 20.0};
  const auto capped = apply_cap(advisory, caps, 1);
  const double capped_total = advisory_ver_total(capped);
  const double cap_sum = caps.total(advisory.size(), 1);
  for (int k = 0; k < 10000; ++k) {
    const auto realized = sample_realization(advisory, 0.1, rng);
    double realized_total = 0.0;
    for (double v : realized) realized_total += v;
    const double fbd = net_load_delta_fbd(advisory, realized);
    const double rfbd = net_load_delta_rfbd(realized_total, capped_total);
    CHECK(rfbd == doctest::Approx(std::max(0.0, fbd - cap_sum)).scale(1.0));
    CHECK(rfbd >= 0.0);
    CHECK(binding_ver_total(realized, capped) <= capped_total + 1e-12);
    if (realized_total <= capped_total)
      CHECK(binding_ver_total(realized, capped) ==
            doctest::Approx(realized_total));
  }
}
