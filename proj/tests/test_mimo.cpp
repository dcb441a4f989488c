#include <doctest.h>

#include <cmath>
#include <sstream>

#include "moo/mimo.hpp"

using namespace moo;
using V = std::vector<double>;

namespace {

// Rate formula evaluated in extended precision, independently of the library.
long double rate_oracle(long double k, long double n, long double p) {
  const long double sinr = (p / k) * (n - k) / (1e-13L * 1.72e9L + p * 0.54L);
  return 10e6L * (1 - k / 1000.0L) * std::log2(1 + sinr);
}

}  // namespace

TEST_CASE("default constants") {
  const mimo::Params p;
  CHECK(p.bandwidth == 10e6);
  CHECK(p.noise_power == 1e-13);
  CHECK(p.cell_area == 0.0625);
  CHECK(p.lambda1 == 1.72e9);
  CHECK(p.lambda2 == 0.54);
  CHECK(p.coherence_block == 1000);
  CHECK(p.amplifier_efficiency == 0.31);
  CHECK(p.power_per_antenna == 1);
  CHECK(p.power_per_user == 0.3);
  CHECK(p.static_power == 10);
  CHECK(p.computational_efficiency == 12.8e9);
  CHECK(p.max_antennas == 500);
  CHECK(p.max_power_per_antenna == 20);
  CHECK(p.effective_precoding_interval() == 1000);
}

TEST_CASE("average user rate") {
  const mimo::Params p;
  CHECK(mimo::average_user_rate({1, 2, 0}, p) == 0.0);
  const double r = mimo::average_user_rate({100, 300, 1}, p);
  CHECK(r == doctest::Approx(double(rate_oracle(100, 300, 1))).epsilon(1e-14));
  // prelog at K = 100 is 0.9
  const double log_term = std::log2(1 + 2 / (1.72e-4 + 0.54));
  CHECK(r / (p.bandwidth * log_term) == doctest::Approx(0.9).epsilon(1e-14));

  for (double k : {1.0, 7.0, 50.0, 250.0})
    for (double n : {2 * k, 2 * k + 10, 500.0})
      for (double pw : {1e-3, 0.09, 3.0, 1e3}) {
        if (n > 500 || pw > n * p.max_power_per_antenna) continue;
        CHECK(mimo::average_user_rate({k, n, pw}, p) == doctest::Approx(double(rate_oracle(k, n, pw))).epsilon(1e-13));
      }
}

TEST_CASE("rate input errors") {
  const mimo::Params p;
  CHECK_THROWS_AS(mimo::average_user_rate({251, 500, 1}, p), Error);
  CHECK_THROWS_AS(mimo::average_user_rate({1.5, 10, 1}, p), Error);
  mimo::Params short_block;
  short_block.coherence_block = 10;
  CHECK_THROWS_AS(mimo::average_user_rate({10, 20, 1}, short_block), Error);
}

TEST_CASE("total power") {
  const mimo::Params p;
  CHECK(mimo::total_power({1, 2, 0}, p) == doctest::Approx(12.3000046875).epsilon(1e-15));
  CHECK(mimo::total_power({1, 2, 0.31}, p) - mimo::total_power({1, 2, 0}, p) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(0.31 / p.amplifier_efficiency == 1.0);
  CHECK(mimo::precoding_flops({100, 300, 0}, p) / p.computational_efficiency == 7.03125);
  mimo::Params half = p;
  half.precoding_interval = 500;
  CHECK(mimo::precoding_flops({100, 300, 0}, half) == 2 * mimo::precoding_flops({100, 300, 0}, p));
  for (double k : {1.0, 20.0, 250.0}) CHECK(mimo::total_power({k, 500, 0}, p) > p.static_power);
}

TEST_CASE("objectives") {
  const mimo::Params p;
  CHECK(mimo::objectives({1, 2, 0}, p) == V{0, 0, 0});
  const auto g = mimo::objectives({40, 200, 2.5}, p);
  CHECK(g[1] == (40 / p.cell_area) * g[0]);
  CHECK(g[1] / g[0] == doctest::Approx(40 / 0.0625));
  CHECK(g[2] == 40 * g[0] / mimo::total_power({40, 200, 2.5}, p));
}

TEST_CASE("user rate strictly increasing in N") {
  const mimo::Params p;
  for (double k : {1.0, 10.0, 100.0})
    for (double pw : {1e-3, 0.1, 10.0}) {
      double prev = -1;
      for (double n = 2 * k; n <= 500; n += 1) {
        const double r = mimo::average_user_rate({k, n, pw}, p);
        CHECK(r > prev);
        prev = r;
      }
    }
}

TEST_CASE("high-power saturation") {
  mimo::Params p;
  p.max_power_per_antenna = 1e6;
  for (double k : {1.0, 10.0, 100.0})
    for (double n : {2 * k, 300.0}) {
      const double limit = p.bandwidth * (1 - k / p.coherence_block) * std::log2(1 + (n - k) / (k * p.lambda2));
      CHECK(mimo::average_user_rate({k, n, 1e6}, p) == doctest::Approx(limit).epsilon(1e-3));
    }
}

TEST_CASE("energy efficiency bounds") {
  const mimo::Params p;
  for (double k : {1.0, 30.0, 200.0})
    for (double pw : {0.0, 0.01, 5.0, 4000.0}) {
      const auto g = mimo::objectives({k, 450, pw}, p);
      CHECK(g[2] <= g[0] * k / p.static_power);
      CHECK((g[2] == 0.0) == (pw == 0.0));
    }
}

TEST_CASE("as_problem") {
  const auto prob = mimo::as_problem({});
  CHECK(prob.dims() == 3);
  CHECK(prob.num_objectives() == 3);
  CHECK(prob.integral == std::vector<bool>{true, true, false});
  CHECK(prob.lower == V{1, 2, 0});
  CHECK(prob.upper == V{250, 500, 10000});
  CHECK(*prob.origin == V{1, 2, 0});
  CHECK(prob.feasible(V{250, 500, 10000}));
  CHECK_FALSE(prob.feasible(V{251, 500, 1}));
  CHECK_FALSE(prob.feasible(V{1, 2, 41}));
  CHECK_FALSE(prob.feasible(V{2, 3, 1}));
  CHECK(prob.objectives[2].unit == "bit/J");
  CHECK_NOTHROW(prob.validate());
}

TEST_CASE("params file") {
  std::istringstream in("# override\n  eta = 0.5 \nC_N=0.25\nT=500 # half block\n\n");
  const auto p = mimo::parse_params(in);
  CHECK(p.amplifier_efficiency == 0.5);
  CHECK(p.power_per_antenna == 0.25);
  CHECK(p.effective_precoding_interval() == 500);
  CHECK(p.bandwidth == 10e6);

  for (const char* bad : {"foo=1", "eta", "eta=abc", "eta=1.5", "N_max=3.5", "B=-1", "eta=0.5x"}) {
    std::istringstream b(bad);
    CHECK_THROWS_AS(mimo::parse_params(b), Error);
  }
  CHECK_THROWS_AS(mimo::load_params("/nonexistent/params.txt"), Error);

  std::istringstream all(
      "B=1\nsigma2=1\nA=1\nLambda1=1\nLambda2=1\nUpsilon=2000\neta=1\nC_N=1\nC_K=1\nC_0=1\nL_eff=1\nN_max=10\nP_max=1\nT=1\n");
  const auto q = mimo::parse_params(all);
  CHECK(q.coherence_block == 2000);
  CHECK(q.max_antennas == 10);
  CHECK(mimo::as_problem(q).upper == V{5, 10, 10});
}
