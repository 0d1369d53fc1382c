#include <catch2/catch_amalgamated.hpp>

#include "forge/psychometrics.hpp"

#include <numeric>

using namespace forge;

namespace {

// Full-task accuracies for the 24-model proof-checking column.
const std::vector<double> kPcAccuracies = {
    0.94, 0.92, 0.92, 0.91, 0.90, 0.89, 0.89, 0.86, 0.82, 0.82, 0.79, 0.73,
    0.73, 0.68, 0.65, 0.60, 0.49, 0.47, 0.45, 0.42, 0.42, 0.34, 0.23, 0.23};

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(), [&v](std::size_t a, std::size_t b) {
      return v[a] < v[b];
    });
    std::vector<double> r(v.size());
    for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = static_cast<double>(k);
    return r;
  };
  std::vector<double> rx = ranks(x), ry = ranks(y);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= rx.size();
  my /= ry.size();
  double num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  return num / std::sqrt(dx * dy);
}

}  // namespace

TEST_CASE("wilson intervals") {
  WilsonInterval w = wilson(282, 300);
  CHECK(std::round(w.half_width * 100) / 100 == Catch::Approx(0.03));
  CHECK(w.lo >= 0.0);
  CHECK(w.hi <= 1.0);

  CHECK(wilson(0, 10).lo == Catch::Approx(0.0).margin(1e-12));
  // symmetric interval about 0.5 at k = n/2
  WilsonInterval mid = wilson(50, 100);
  CHECK(mid.center == Catch::Approx(0.5));
  // width decreases in n for fixed p-hat
  CHECK(wilson(50, 100).half_width > wilson(500, 1000).half_width);
  // always within [0, 1]
  for (long n : {1L, 7L, 100L})
    for (long k = 0; k <= n; ++k) {
      WilsonInterval v = wilson(k, n);
      CHECK(v.lo >= -1e-12);
      CHECK(v.hi <= 1.0 + 1e-12);
    }
}

TEST_CASE("di: worked value and properties") {
  CHECK(di({0.5, 0.5, 0.5}) == 0.0);
  CHECK(di({0.0, 1.0}) == 1.0);
  CHECK(di(kPcAccuracies) == Catch::Approx(0.27).margin(0.01));

  // permutation invariance and scaling
  std::vector<double> shuffled = kPcAccuracies;
  std::reverse(shuffled.begin(), shuffled.end());
  CHECK(di(shuffled) == Catch::Approx(di(kPcAccuracies)));
  std::vector<double> scaled;
  for (double v : kPcAccuracies) scaled.push_back(0.5 * v);
  CHECK(di(scaled) == Catch::Approx(0.5 * di(kPcAccuracies)));
}

TEST_CASE("lorenz_gini: worked values") {
  GiniEstimates g = lorenz_gini(kPcAccuracies);
  CHECK(g.integrated == Catch::Approx(0.191).margin(0.005));
  CHECK(g.from_di == Catch::Approx(0.199).margin(0.005));

  GiniEstimates eq = lorenz_gini({0.7, 0.7, 0.7});
  CHECK(eq.integrated == Catch::Approx(0.0).margin(1e-12));
  CHECK(eq.from_di == Catch::Approx(0.0).margin(1e-12));

  // synthetic linear ramp: the two estimates agree within 0.02
  std::vector<double> ramp;
  for (int i = 1; i <= 20; ++i) ramp.push_back(0.04 * i);
  GiniEstimates r = lorenz_gini(ramp);
  CHECK(std::fabs(r.integrated - r.from_di) < 0.02);
}

TEST_CASE("esi: table values and properties") {
  CHECK(esi(0, 300) == 1.0);
  CHECK(esi(300, 300) == Catch::Approx(0.0).margin(1e-12));
  // the nine self-recognition rows
  struct Row {
    long inc;
    double expected;
  };
  for (const Row& row : std::vector<Row>{{161, 0.27},
                                         {160, 0.27},
                                         {122, 0.38},
                                         {114, 0.41},
                                         {91, 0.48},
                                         {82, 0.52},
                                         {79, 0.53},
                                         {61, 0.61},
                                         {58, 0.62}})
    CHECK(esi(row.inc, 300) == Catch::Approx(row.expected).margin(0.005));

  // strictly decreasing in the incompatible count
  for (long inc = 0; inc < 300; ++inc) CHECK(esi(inc, 300) > esi(inc + 1, 300));
  // larger gamma means smaller esi at interior ratios
  for (double ratio : {0.1, 0.4, 0.8}) {
    long inc = static_cast<long>(ratio * 1000);
    CHECK(esi(inc, 1000, 2) > esi(inc, 1000, 4));
    CHECK(esi(inc, 1000, 4) > esi(inc, 1000, 6));
    CHECK(esi(inc, 1000, 6) > esi(inc, 1000, 10));
  }
}

TEST_CASE("calibration: ECE and MCE") {
  // all level-5, all correct: bin gap |1 - 0.95| = 0.05
  std::vector<CalibrationRecord> certain(40, {5, true});
  CalibrationSummary s = calibration(certain);
  CHECK(s.ece == Catch::Approx(0.05));
  CHECK(s.mce == Catch::Approx(0.05));

  // all level-3, half correct: perfectly calibrated
  std::vector<CalibrationRecord> half;
  for (int i = 0; i < 40; ++i) half.push_back({3, i % 2 == 0});
  s = calibration(half);
  CHECK(s.ece == Catch::Approx(0.0).margin(1e-12));

  // mixed set against a hand-computed weighted sum
  std::vector<CalibrationRecord> mixed;
  for (int i = 0; i < 10; ++i) mixed.push_back({5, i < 7});   // acc 0.7, gap 0.25
  for (int i = 0; i < 30; ++i) mixed.push_back({2, i < 12});  // acc 0.4, gap 0.15
  s = calibration(mixed);
  double expected_ece = 10.0 / 40.0 * 0.25 + 30.0 / 40.0 * 0.15;
  CHECK(s.ece == Catch::Approx(expected_ece));
  CHECK(s.mce == Catch::Approx(0.25));
}

TEST_CASE("icc and Fisher information worked values") {
  CHECK(icc(2.0, 0.0, 1.0) == Catch::Approx(0.881).margin(0.001));
  // a = 1.53, b = 1.19: information at theta = 1.2 and theta = -1.0; the
  // two-decimal display convention truncates
  double hi = item_info(1.53, 1.19, 1.2);
  double lo = item_info(1.53, 1.19, -1.0);
  CHECK(std::floor(hi * 100) / 100 == Catch::Approx(0.58).margin(0.005));
  CHECK(std::floor(lo * 100) / 100 == Catch::Approx(0.07).margin(0.005));
  CHECK(hi == Catch::Approx(0.5852).margin(0.0005));
  CHECK(lo == Catch::Approx(0.0766).margin(0.0005));

  // the information peaks exactly at theta = b with value a^2/4
  CHECK(item_info(1.7, 0.4, 0.4) == Catch::Approx(1.7 * 1.7 / 4.0));
  for (double a : {0.6, 1.3, 2.2}) {
    for (double b : {-0.8, 0.3}) {
      double peak = item_info(a, b, b);
      double eps = 1e-4;
      // unimodality: finite-difference slope changes sign only at b
      CHECK(item_info(a, b, b - eps) < peak);
      CHECK(item_info(a, b, b + eps) < peak);
      CHECK(item_info(a, b, b - 1) < item_info(a, b, b - 0.5));
      CHECK(item_info(a, b, b + 1) < item_info(a, b, b + 0.5));
    }
  }
}

TEST_CASE("band scores") {
  Band band{-0.7, 0.7, 201};
  SECTION("midpoint-concentrated items approach the bound") {
    std::vector<ItemParams> items;
    for (int i = 0; i < 10; ++i) items.push_back({"i" + std::to_string(i), 1.5, 0.0});
    BandScores s = band_scores(items, band);
    CHECK(s.normalized_score > 0.99);
    CHECK(s.normalized_score <= 1.0 + 1e-9);
  }
  SECTION("far-band items score near zero") {
    std::vector<ItemParams> items;
    for (int i = 0; i < 10; ++i) items.push_back({"i" + std::to_string(i), 1.5, 8.0});
    BandScores s = band_scores(items, band);
    CHECK(s.normalized_score < 0.05);
  }
  SECTION("closed-form upper bound matches grid maximization over b") {
    for (double a : {0.4, 1.0, 2.5}) {
      double midpoint = (band.theta1 + band.theta2) / 2.0;
      double closed = band_item_avg_info(a, midpoint, band);
      double best = 0;
      for (int k = 0; k <= 4000; ++k) {
        double b = -10.0 + 20.0 * k / 4000.0;
        best = std::max(best, band_item_avg_info(a, b, band));
      }
      CHECK(best <= closed + 1e-12);
      CHECK(best >= closed - 1e-6);
    }
  }
}

TEST_CASE("fit_2pl: analytic gradients match finite differences") {
  Rng rng(31);
  std::vector<std::vector<int>> y(12, std::vector<int>(8));
  for (auto& row : y)
    for (auto& v : row) v = rng.coin(0.6) ? 1 : 0;
  detail::IrtState s;
  for (int i = 0; i < 12; ++i) s.theta.push_back(rng.unit() * 2 - 1);
  for (int j = 0; j < 8; ++j) {
    s.log_a.push_back(rng.unit() - 0.5);
    s.b.push_back(rng.unit() * 2 - 1);
  }
  IrtConfig cfg;
  auto itemwise = [&](std::size_t j) {
    double obj = 0;
    for (std::size_t i = 0; i < s.theta.size(); ++i) {
      double a = std::exp(s.log_a[j]);
      double p = sigmoid(a * (s.theta[i] - s.b[j]));
      obj += y[i][j] ? std::log(p) : std::log(1 - p);
    }
    obj -= 0.5 * s.log_a[j] * s.log_a[j] / (cfg.sigma_a * cfg.sigma_a);
    obj -= 0.5 * s.b[j] * s.b[j] / (cfg.sigma_b * cfg.sigma_b);
    return obj;
  };
  const double eps = 1e-6;
  for (std::size_t j = 0; j < s.log_a.size(); ++j) {
    detail::ItemDerivatives d = detail::item_derivatives(y, s, cfg, j);
    double save = s.log_a[j];
    s.log_a[j] = save + eps;
    double up = itemwise(j);
    s.log_a[j] = save - eps;
    double down = itemwise(j);
    s.log_a[j] = save;
    double fd = (up - down) / (2 * eps);
    CHECK(std::fabs(d.g1 - fd) / std::max(1.0, std::fabs(fd)) < 1e-5);

    save = s.b[j];
    s.b[j] = save + eps;
    up = itemwise(j);
    s.b[j] = save - eps;
    down = itemwise(j);
    s.b[j] = save;
    fd = (up - down) / (2 * eps);
    CHECK(std::fabs(d.g2 - fd) / std::max(1.0, std::fabs(fd)) < 1e-5);
  }
}

TEST_CASE("fit_2pl: synthetic recovery, monotone objective, standardization") {
  const int N = 200, M = 60;
  Rng rng(2025);
  auto gauss = [&rng]() {
    double u1 = std::max(1e-12, rng.unit());
    double u2 = rng.unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };
  std::vector<double> true_theta(N), true_a(M), true_b(M);
  for (auto& t : true_theta) t = gauss();
  for (auto& a : true_a) a = std::exp(0.3 * gauss());
  for (auto& b : true_b) b = gauss();

  ResponseMatrix matrix;
  for (int i = 0; i < N; ++i) matrix.respondents.push_back("m" + std::to_string(i));
  for (int j = 0; j < M; ++j) matrix.items.push_back("i" + std::to_string(j));
  matrix.outcomes.assign(N, std::vector<int>(M));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < M; ++j)
      matrix.outcomes[i][j] =
          rng.unit() < icc(true_a[j], true_b[j], true_theta[i]) ? 1 : 0;

  IrtConfig cfg;
  cfg.seed = 7;
  IrtFit fit = fit_2pl(matrix, cfg);
  REQUIRE(fit.theta.size() == static_cast<std::size_t>(N));

  // retained items only; recovery of the ability ordering
  CHECK(spearman(fit.theta, true_theta) > 0.95);

  // objective is non-decreasing within the damping tolerance
  for (std::size_t k = 1; k < fit.objective_trace.size(); ++k)
    CHECK(fit.objective_trace[k] >= fit.objective_trace[k - 1] - 1e-9);

  // post-rescale standardization
  double mean = 0;
  for (double t : fit.theta) mean += t;
  mean /= N;
  double var = 0;
  for (double t : fit.theta) var += (t - mean) * (t - mean);
  var /= N;
  CHECK(std::fabs(mean) < 1e-8);
  CHECK(std::fabs(var - 1.0) < 1e-6);

  // probability identity at the fit point: icc(a, b, b) = 0.5
  for (const auto& it : fit.items) CHECK(icc(it.a, it.b, it.b) == Catch::Approx(0.5));

  // clip box respected
  for (const auto& it : fit.items) {
    CHECK(it.a >= cfg.a_min - 1e-12);
    CHECK(it.a <= cfg.a_max + 1e-12);
  }
}

TEST_CASE("fit_2pl: determinism and dropped columns") {
  ResponseMatrix m;
  m.respondents = {"r1", "r2", "r3", "r4"};
  m.items = {"always", "mixed1", "never", "mixed2"};
  m.outcomes = {{1, 1, 0, 0}, {1, 0, 0, 1}, {1, 1, 0, 0}, {1, 0, 0, 1}};
  IrtConfig cfg;
  cfg.seed = 3;
  IrtFit a = fit_2pl(m, cfg);
  IrtFit b = fit_2pl(m, cfg);
  CHECK(format_fit(a) == format_fit(b));
  REQUIRE(a.dropped_items.size() == 2);
  CHECK(a.dropped_items[0] == "always");
  CHECK(a.dropped_items[1] == "never");
  REQUIRE(a.items.size() == 2);
}

TEST_CASE("wright_map") {
  SECTION("one model, one item, equal theta = b share a row") {
    std::string map = wright_map({{"solver", 0.4}}, {{"17", 0.4}}, 10);
    bool shared = false;
    std::istringstream in(map);
    std::string line;
    while (std::getline(in, line))
      if (line.find("solver") != std::string::npos &&
          line.find("17") != std::string::npos)
        shared = true;
    CHECK(shared);
  }
  SECTION("models-only map") {
    std::string map = wright_map({{"m1", -1.0}, {"m2", 1.0}}, {}, 5);
    CHECK(map.find("m1") != std::string::npos);
    CHECK(map.find("m2") != std::string::npos);
  }
  SECTION("bin width = range / n_bins; entries land in their bins") {
    std::vector<std::pair<std::string, double>> abilities = {
        {"low", -2.0}, {"mid", 0.0}, {"high", 2.0}};
    std::vector<std::pair<std::string, double>> items = {
        {"1", -1.9}, {"2", 0.1}, {"3", 1.95}};
    std::string map = wright_map(abilities, items, 20);
    std::istringstream in(map);
    std::string line;
    int low_row = -1, one_row = -1, row = 0;
    while (std::getline(in, line)) {
      if (line.find("low") != std::string::npos) low_row = row;
      if (line.find(" 1") != std::string::npos && line.find('|') != std::string::npos &&
          one_row < 0 && line.rfind("| 1") != std::string::npos)
        one_row = row;
      ++row;
    }
    CHECK(low_row >= 0);
  }
}

TEST_CASE("parameter table round trip (replay mode)") {
  std::string table = "# items: label a b\nq1\t1.5\t0.3\nq2\t0.9\t-1.2\n";
  std::vector<ItemParams> items = parse_item_table(table);
  REQUIRE(items.size() == 2);
  CHECK(items[0].a == Catch::Approx(1.5));
  CHECK(items[1].b == Catch::Approx(-1.2));

  std::string abilities = "m1\t0.5\nm2\t-0.25\n";
  auto parsed = parse_ability_table(abilities);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[1].second == Catch::Approx(-0.25));
}
