#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "uavsc/secmetrics.hpp"

using namespace uavsc;

namespace {

// Regularized upper incomplete gamma by composite Simpson on the density.
double q_by_quadrature(int m, double x) {
  if (x <= 0.0) return 1.0;
  const int n = 20000;
  const double h = x / n;
  auto f = [&](double t) { return t <= 0.0 ? (m == 1 ? 1.0 : 0.0) : std::exp((m - 1) * std::log(t) - t - std::lgamma(m)); };
  double s = f(0.0) + f(x);
  for (int i = 1; i < n; ++i) s += f(i * h) * (i % 2 ? 4.0 : 2.0);
  return 1.0 - s * h / 3.0;
}

}  // namespace

TEST_CASE("connection probabilities at their limits") {
  CHECK(scp_h0(1e-9, 1e-12, 0.0) == 1.0);
  CHECK(scp_h0(0.0, 1e-12, 1.0) == 0.0);
  CHECK(scp_h0(0.0, 1e-12, 0.0) == 1.0);
  CHECK(scp_h0(1e-12, 1e-12, 1.0) == doctest::Approx(std::exp(-1.0)));
  // Interference-limited: zero once the desired power cannot beat noise alone.
  CHECK(scp_h1(1e-12, 1e-12, 1e-12, 1.0) == 0.0);
  CHECK(scp_h1(3e-12, 1e-12, 1e-12, 1.0) == doctest::Approx(1.0 - std::exp(-2.0)));
  CHECK(scp_h1(3e-12, 0.0, 1e-12, 1.0) == scp_h0(3e-12, 1e-12, 1.0));
  CHECK(ccp(3e-12, 0.0, 1e-12, 1.0, 1.0) == 0.0);
  CHECK(ccp(3e-12, 1e-12, 1e-12, 1.0, 1.0) == doctest::Approx((1.0 - std::exp(-2.0)) * std::exp(-1.0)));
}

TEST_CASE("outage forms reuse the connection forms on Willie's link") {
  CHECK(sop_h0(2e-12, 1e-12, 1.5) == scp_h0(2e-12, 1e-12, 1.5));
  CHECK(sop_h1(5e-12, 1e-12, 1e-12, 1.5) == scp_h1(5e-12, 1e-12, 1e-12, 1.5));
}

TEST_CASE("probabilities decrease with the target rate") {
  double prev0 = 2.0, prev1 = 2.0;
  for (int i = 0; i <= 300; ++i) {
    const double r = 0.1 * i;
    const double s0 = scp_h0(1e-6, 1e-12, r), s1 = scp_h1(1e-6, 1e-8, 1e-12, r);
    CHECK(s0 <= prev0);
    CHECK(s1 <= prev1);
    prev0 = s0;
    prev1 = s1;
  }
}

TEST_CASE("optimal threshold") {
  CHECK(optimal_threshold(1.0, 2.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
  CHECK(optimal_threshold(3.0, 3.0) == 3.0);
  // Near-equal variances: log-mean tends to the common value.
  const double s0 = 1e-9, s1 = s0 * (1.0 + 1e-10);
  CHECK(optimal_threshold(s0, s1) == doctest::Approx(s0 * (1.0 + 0.5e-10)).epsilon(1e-15));
  const double a = 2.0, b = 5.0;
  CHECK(optimal_threshold(a, b) == doctest::Approx(a * b / (b - a) * std::log(b / a)).epsilon(1e-14));
}

TEST_CASE("incomplete gamma against quadrature") {
  for (int m : {1, 2, 5, 10, 50, 100}) {
    for (double x : {0.3, 1.0, 4.0, 9.5, 48.0, 95.0, 130.0}) {
      const double ref = q_by_quadrature(m, x);
      CHECK(gamma_q(m, x) == doctest::Approx(ref).epsilon(1e-8).scale(1.0));
      CHECK(gamma_p(m, x) + gamma_q(m, x) == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  CHECK(gamma_q(1, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(gamma_q(2, 2.0) == doctest::Approx(3.0 * std::exp(-2.0)).epsilon(1e-15));
  // Deep lower tail without cancellation: P(m, x) ~ x^m / m!.
  CHECK(gamma_p(10, 1e-3) == doctest::Approx(1e-30 / 3628800.0).epsilon(1e-3));
  CHECK_THROWS_AS(gamma_q(0, 1.0), std::invalid_argument);
}

TEST_CASE("detection error at the exact single-symbol point") {
  const DetectionStats st{1.0, 2.0, 2.0 * std::log(2.0), 1};
  const DepResult r = dep(st, st.q_th);
  CHECK(r.p_f == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(r.p_m == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.p_e == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("detection error properties") {
  const DetectionStats same{2.0, 2.0, 2.0, 100};
  for (double q : {0.5, 2.0, 7.0}) CHECK(dep(same, q).p_e == 1.0);
  CHECK_THROWS_AS(dep(same, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(detection_stats(1.0, 1.0, 0.0, 1.0, 0), std::invalid_argument);

  // Minimum error falls with the block length and sits at the optimal threshold.
  double prev = 2.0;
  for (int m : {1, 10, 50, 100, 200}) {
    const DetectionStats st{1.0, 1.5, optimal_threshold(1.0, 1.5), m};
    const double best = dep(st, st.q_th).p_e;
    CHECK(best < prev);
    CHECK(dep(st, 0.9 * st.q_th).p_e >= best);
    CHECK(dep(st, 1.1 * st.q_th).p_e >= best);
    prev = best;
  }
}

TEST_CASE("redundancy rate") {
  const double s2 = 1e-12, eta = 0.01;
  const Redundancy r = secrecy_redundancy(5e-9, 1e-12, s2, eta);
  CHECK_FALSE(r.clamped);
  CHECK(r.r_w == doctest::Approx(std::log2(1.0 + (5e-9 - 1e-12) / (s2 - std::log(eta) * 1e-12))));
  CHECK(secrecy_redundancy(1e-12, 2e-12, s2, eta).clamped);
  const double rw0 = h0_redundancy(5e-9, s2, eta);
  CHECK(sop_h0(5e-9, s2, rw0) <= eta);
  CHECK(sop_h0(5e-9, s2, rw0) == doctest::Approx(eta).epsilon(1e-12));
  CHECK(h0_redundancy(0.0, s2, eta) == 0.0);
}

TEST_CASE("security report composes the slot metrics") {
  LinkPowers p;
  p.p_ba = 1e-6;
  p.p_ca = 1e-9;
  p.p_bw0 = 5e-9;
  p.p_bw = 5e-9 - 1e-12;
  p.p_cw = 1e-12;
  const RateTargets t;
  const SecurityReport r = evaluate_security(p, t);
  CHECK(r.r_s == doctest::Approx(t.r_t - r.r_w));
  CHECK(r.rate == doctest::Approx(t.kappa * r.scp1 * r.r_s + (1.0 - t.kappa) * r.ccp * t.r_c));
  CHECK(r.p_e == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(security_csv_header().size() == security_csv_row(r).size());
}

TEST_CASE("worked values") {
  CHECK(sop_h0(3.536e-9, 1e-12, 1.0) == doctest::Approx(std::exp(-1e-12 / 3.536e-9)).epsilon(1e-15));
  CHECK(sop_h0(3.536e-9, 1e-12, 1.0) == doctest::Approx(0.99972).epsilon(1e-5));
  // Covert decoding factor on top of a given secret connection probability.
  const double gt = 1.0, s2 = 1e-12, p_ca = 1e-7;
  const double p_ba = gt * s2 - gt * p_ca * std::log(0.1);  // scp_h1 = 0.9
  REQUIRE(scp_h1(p_ba, p_ca, s2, 1.0) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(ccp(p_ba, p_ca, s2, 1.0, 4.0) == doctest::Approx(0.9 * std::exp(-1.5e-4)).epsilon(1e-12));
  CHECK(ccp(p_ba, p_ca, s2, 1.0, 4.0) == doctest::Approx(0.89987).epsilon(1e-5));
  const Redundancy r = secrecy_redundancy(1e-10 + 1e-11, 1e-11, 1e-12, 0.01);
  CHECK(r.r_w == doctest::Approx(std::log2(1.0 + 1e-10 / (1e-12 - std::log(0.01) * 1e-11))).epsilon(1e-12));
  CHECK(r.r_w == doctest::Approx(1.6441).epsilon(1e-4));
  const Redundancy zero = secrecy_redundancy(2e-9, 2e-9, 1e-12, 0.01);
  CHECK(zero.r_w == 0.0);
  CHECK_FALSE(zero.clamped);
  // Limits of the detection error in the threshold.
  const DetectionStats st{1.0, 2.0, 2.0 * std::log(2.0), 10};
  CHECK(dep(st, 1e-9).p_e == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dep(st, 1e3).p_e == doctest::Approx(1.0).epsilon(1e-12));
}
