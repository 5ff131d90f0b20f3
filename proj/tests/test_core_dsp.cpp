#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "emphlab/core_dsp.hpp"
#include "emphlab/errors.hpp"

using namespace emphlab;

TEST_CASE("FrameConfig default profile and validation") {
  FrameConfig cfg;
  CHECK(cfg.sample_rate_hz == 16000);
  CHECK(cfg.frame_len == 160);
  CHECK(cfg.window_len == 480);
  CHECK(cfg.lookahead_len == 160);
  CHECK_NOTHROW(cfg.validate());

  const auto ms = FrameConfig::from_ms(16000, 10, 30, 10);
  CHECK(ms.frame_len == 160);
  CHECK(ms.window_len == 480);
  CHECK(ms.lookahead_len == 160);

  CHECK_THROWS_AS((FrameConfig{16000, 160, 100, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((FrameConfig{16000, 160, 480, 321}.validate()), std::invalid_argument);
  CHECK_THROWS_AS(FrameConfig::from_ms(16000, 10, 30, -1), std::invalid_argument);
}

TEST_CASE("EmphasisCoeff tap is gamma times alpha") {
  const EmphasisCoeff c(0.7, 0.9);
  CHECK(c.tap() == 0.7 * 0.9);
  CHECK_THROWS_AS(EmphasisCoeff(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(EmphasisCoeff(0.5, 1.0), std::invalid_argument);
}

TEST_CASE("make_window") {
  CHECK(make_window(WindowKind::rectangular, 4) == std::vector<double>{1, 1, 1, 1});

  const auto h3 = make_window(WindowKind::hanning, 3);
  CHECK(h3[0] == 0.0);
  CHECK(h3[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(h3[2] == 0.0);

  const auto h5 = make_window(WindowKind::hanning, 5);
  const double expected[] = {0.0, 0.5, 1.0, 0.5, 0.0};
  for (int i = 0; i < 5; ++i) CHECK(h5[i] == doctest::Approx(expected[i]).epsilon(1e-15));

  CHECK_THROWS_AS(make_window(WindowKind::hanning, 1), std::invalid_argument);

  SUBCASE("symmetric with weights in [0, 1]") {
    for (std::size_t n : {2u, 7u, 480u, 1440u, 1441u}) {
      const auto w = make_window(WindowKind::hanning, n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(w[i] == w[n - 1 - i]);
        CHECK(w[i] >= 0.0);
        CHECK(w[i] <= 1.0);
      }
    }
  }
}

TEST_CASE("autocorr_01 direct sums") {
  const std::vector<double> ones{1, 1};
  const auto p = autocorr_01(ones, ones);
  CHECK(p.r0 == 2.0);
  CHECK(p.r1 == 1.0);
  REQUIRE(p.ratio);
  CHECK(*p.ratio == 0.5);

  const std::vector<double> alt{1, -1, 1, -1};
  const auto q = autocorr_01(alt, make_window(WindowKind::rectangular, 4));
  CHECK(q.r0 == 4.0);
  CHECK(q.r1 == -3.0);
  CHECK(*q.ratio == -0.75);

  const std::vector<double> zeros(3, 0.0);
  const auto s = autocorr_01(zeros, make_window(WindowKind::hanning, 3));
  CHECK(s.r0 == 0.0);
  CHECK(s.r1 == 0.0);
  CHECK(s.silent());

  CHECK_THROWS_AS(autocorr_01(ones, alt), std::invalid_argument);
}

TEST_CASE("autocorr_01 satisfies |r1| <= r0 on random input") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> len(2, 600);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = len(rng);
    std::vector<double> x(n);
    for (double& v : x) v = g(rng) * (trial % 3 == 0 ? 1e-6 : 1.0);
    const auto w = make_window(trial % 2 ? WindowKind::hanning : WindowKind::rectangular, n);
    const auto p = autocorr_01(x, w);
    CHECK(p.r0 >= 0.0);
    CHECK(std::abs(p.r1) <= p.r0);
    if (p.ratio) CHECK(std::abs(*p.ratio) <= 1.0);
  }
}

TEST_CASE("pre_emphasize examples") {
  FilterState st;
  const std::vector<double> impulse{1, 0, 0};
  const auto y = pre_emphasize(impulse, 0.7, st);
  CHECK(y[0] == 1.0);
  CHECK(y[1] == -0.7);
  CHECK(y[2] == 0.0);
  CHECK(st.prev_input == 0.0);

  FilterState id;
  const std::vector<double> ones{1, 1, 1};
  CHECK(pre_emphasize(ones, 0.0, id) == ones);

  FilterState carry;
  const std::vector<double> a{1.0};
  const std::vector<double> b{0.0};
  CHECK(pre_emphasize(a, 0.5, carry) == std::vector<double>{1.0});
  CHECK(pre_emphasize(b, 0.5, carry) == std::vector<double>{-0.5});

  CHECK_THROWS_AS(pre_emphasize(a, 1.5, carry), std::invalid_argument);
}

TEST_CASE("de_emphasize examples") {
  FilterState st;
  const std::vector<double> d{1, -0.7, 0, 0};
  const auto x = de_emphasize(d, 0.7, st);
  CHECK(x[0] == 1.0);
  CHECK(std::abs(x[1]) < 1e-15);
  CHECK(std::abs(x[2]) < 1e-15);
  CHECK(std::abs(x[3]) < 1e-15);

  FilterState geo;
  const std::vector<double> impulse{1, 0, 0};
  CHECK(de_emphasize(impulse, 0.5, geo) == std::vector<double>{1.0, 0.5, 0.25});
  CHECK(geo.prev_output == 0.25);

  FilterState id;
  const std::vector<double> any{0.3, -2.0, 5.5};
  CHECK(de_emphasize(any, 0.0, id) == any);

  CHECK_THROWS_AS(de_emphasize(any, 1.0, id), InstabilityError);
  CHECK_THROWS_AS(de_emphasize(any, -1.2, id), InstabilityError);
}

TEST_CASE("FilterState tracks the last input and output sample") {
  FilterState st;
  const std::vector<double> frame{0.25, -1.0, 3.0};
  const auto y = pre_emphasize(frame, 0.4, st);
  CHECK(st.prev_input == 3.0);
  CHECK(st.prev_output == y.back());
}

TEST_CASE("perfect reconstruction with per-frame tap switching") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> tap(-0.99, 0.99);
  std::uniform_int_distribution<int> frame_len(1, 200);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(4000);
    for (double& v : x) v = g(rng);
    FilterState enc;
    FilterState dec;
    std::vector<double> y;
    for (std::size_t pos = 0; pos < x.size();) {
      const std::size_t n = std::min<std::size_t>(frame_len(rng), x.size() - pos);
      const double t = tap(rng);
      const auto d = pre_emphasize(std::span(x).subspan(pos, n), t, enc);
      const auto r = de_emphasize(d, t, dec);
      y.insert(y.end(), r.begin(), r.end());
      pos += n;
    }
    double err = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      err += (x[i] - y[i]) * (x[i] - y[i]);
      ref += x[i] * x[i];
    }
    CHECK(std::sqrt(err / ref) < 1e-12);
  }
}

TEST_CASE("pre_emphasize is linear in the signal") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  std::vector<double> x(300);
  for (double& v : x) v = g(rng);
  for (double c : {-3.0, 0.5, 2.0}) {
    std::vector<double> cx(x);
    for (double& v : cx) v *= c;
    FilterState s1{0.2, 0.0};
    FilterState s2{0.2 * c, 0.0};
    const auto y = pre_emphasize(x, 0.63, s1);
    const auto cy = pre_emphasize(cx, 0.63, s2);
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(cy[i] == doctest::Approx(c * y[i]).epsilon(1e-12));
    }
    CHECK(s2.prev_input == doctest::Approx(c * s1.prev_input));
  }
}

TEST_CASE("analysis_buffer covers previous frame, current frame and look-ahead") {
  std::vector<double> x(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i + 1);
  const FrameConfig cfg;
  const auto first = analysis_buffer(x, 0, cfg);
  REQUIRE(first.size() == 480);
  CHECK(first[0] == 0.0);
  CHECK(first[159] == 0.0);
  CHECK(first[160] == 1.0);
  CHECK(first[479] == 320.0);

  const auto third = analysis_buffer(x, 2, cfg);
  CHECK(third[0] == 161.0);
  CHECK(third[479] == 640.0);

  const auto last = analysis_buffer(x, 5, cfg);  // frame [800, 960), look-ahead past the end
  CHECK(last[0] == 641.0);
  CHECK(last[359] == 1000.0);
  CHECK(last[360] == 0.0);
}
