// Interval estimates, discrimination and stability indices, calibration, and
// the 2PL IRT pipeline (joint MAP fit with damped Newton block updates,
// Fisher information analytics, band scores, Wright maps).

#ifndef FORGE_PSYCHOMETRICS_HPP_
#define FORGE_PSYCHOMETRICS_HPP_

#include <cmath>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "forge/rng.hpp"

namespace forge {

// ---------------------------------------------------------------------------
// Wilson score interval.

struct WilsonInterval {
  double center, half_width, lo, hi;
};

inline WilsonInterval wilson(long k, long n, double z = 1.96) {
  if (n < 1 || k < 0 || k > n) throw std::invalid_argument("wilson: need 0 <= k <= n, n >= 1");
  double p = static_cast<double>(k) / static_cast<double>(n);
  double z2 = z * z;
  double denom = 1.0 + z2 / static_cast<double>(n);
  double center = (p + z2 / (2.0 * static_cast<double>(n))) / denom;
  double half = z *
                std::sqrt(p * (1.0 - p) / static_cast<double>(n) +
                          z2 / (4.0 * static_cast<double>(n) * static_cast<double>(n))) /
                denom;
  return {center, half, center - half, center + half};
}

// ---------------------------------------------------------------------------
// Discriminability index: mean pairwise absolute accuracy difference.

inline double di(const std::vector<double>& accuracies) {
  const std::size_t n = accuracies.size();
  if (n < 2) throw std::invalid_argument("di needs at least two accuracies");
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      sum += std::fabs(accuracies[i] - accuracies[j]);
  return sum / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

// Gini coefficient, both by trapezoidal integration of the Lorenz curve and
// through the DI/(2 mu) approximation.
struct GiniEstimates {
  double integrated;
  double from_di;
};

inline GiniEstimates lorenz_gini(const std::vector<double>& accuracies) {
  const std::size_t n = accuracies.size();
  if (n < 2) throw std::invalid_argument("lorenz_gini needs at least two accuracies");
  std::vector<double> sorted = accuracies;
  std::sort(sorted.begin(), sorted.end());
  double total = 0;
  for (double v : sorted) total += v;
  double mean = total / static_cast<double>(n);

  double area = 0;  // under the Lorenz curve, trapezoidal rule
  double cum = 0;
  double prev_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cum += sorted[i];
    double y = total == 0 ? 0 : cum / total;
    area += (prev_y + y) / 2.0 / static_cast<double>(n);
    prev_y = y;
  }
  GiniEstimates out;
  out.integrated = 1.0 - 2.0 * area;
  out.from_di = mean == 0 ? 0 : di(accuracies) / (2.0 * mean);
  return out;
}

// ---------------------------------------------------------------------------
// Epistemic stability index: 1 - log(1 + gamma*inc/total) / log(1 + gamma).

inline double esi(long incompatible, long total, double gamma = 5.0) {
  if (total < 1 || incompatible < 0 || incompatible > total)
    throw std::invalid_argument("esi: need 0 <= incompatible <= total, total >= 1");
  if (gamma <= 0) throw std::invalid_argument("esi: gamma must be positive");
  double ratio = static_cast<double>(incompatible) / static_cast<double>(total);
  return 1.0 - std::log1p(gamma * ratio) / std::log1p(gamma);
}

// ---------------------------------------------------------------------------
// Calibration: fixed five-level confidence mapping, per-bin gaps, ECE, MCE.

inline double confidence_of_level(int level) {
  switch (level) {
    case 1: return 0.05;
    case 2: return 0.25;
    case 3: return 0.5;
    case 4: return 0.75;
    case 5: return 0.95;
  }
  throw std::invalid_argument("confidence level must be in 1..5");
}

struct CalibrationRecord {
  int level;  // 1..5
  bool correct;
};

struct CalibrationSummary {
  struct Bin {
    int level;
    long count = 0;
    double accuracy = 0;
    double confidence = 0;
    double gap = 0;
  };
  std::vector<Bin> bins;  // levels 1..5, empty bins included with count 0
  double ece = 0;
  double mce = 0;
};

inline CalibrationSummary calibration(const std::vector<CalibrationRecord>& records) {
  if (records.empty()) throw std::invalid_argument("calibration needs records");
  CalibrationSummary out;
  long total = static_cast<long>(records.size());
  for (int level = 1; level <= 5; ++level) {
    CalibrationSummary::Bin bin;
    bin.level = level;
    bin.confidence = confidence_of_level(level);
    long correct = 0;
    for (const auto& r : records)
      if (r.level == level) {
        ++bin.count;
        correct += r.correct ? 1 : 0;
      }
    if (bin.count > 0) {
      bin.accuracy = static_cast<double>(correct) / static_cast<double>(bin.count);
      bin.gap = std::fabs(bin.accuracy - bin.confidence);
      out.ece += static_cast<double>(bin.count) / static_cast<double>(total) * bin.gap;
      out.mce = std::max(out.mce, bin.gap);
    }
    out.bins.push_back(bin);
  }
  return out;
}

// ---------------------------------------------------------------------------
// 2PL model basics.

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double icc(double a, double b, double theta) {
  return sigmoid(a * (theta - b));
}

inline double item_info(double a, double b, double theta) {
  double p = icc(a, b, theta);
  return a * a * p * (1.0 - p);
}

struct ItemParams {
  std::string label;
  double a = 1.0;  // discrimination, within the clip box
  double b = 0.0;  // difficulty
};

inline double task_info(const std::vector<ItemParams>& items, double theta) {
  double total = 0;
  for (const auto& it : items) total += item_info(it.a, it.b, theta);
  return total;
}

// ---------------------------------------------------------------------------
// Band-normalized discrimination score.

struct Band {
  double theta1, theta2;
  int grid = 201;
};

struct BandScores {
  double avg_info = 0;            // grid-averaged task information over the band
  double mean_info_per_item = 0;
  double upper_bound = 0;         // idealized: every difficulty at the midpoint
  double normalized_score = 0;    // avg_info / upper_bound, in [0, 1]
};

// Closed form of the band-averaged item information for difficulty b:
// (1/|Theta|) * a * [sigmoid(a(theta2-b)) - sigmoid(a(theta1-b))], maximal at
// the band midpoint.
inline double band_item_avg_info(double a, double b, const Band& band) {
  return a * (sigmoid(a * (band.theta2 - b)) - sigmoid(a * (band.theta1 - b))) /
         (band.theta2 - band.theta1);
}

inline BandScores band_scores(const std::vector<ItemParams>& items, const Band& band) {
  if (!(band.theta1 < band.theta2) || band.grid < 2)
    throw std::invalid_argument("band must satisfy theta1 < theta2, grid >= 2");
  BandScores out;
  const int G = band.grid;
  double sum = 0;
  for (int g = 0; g < G; ++g) {
    double theta = band.theta1 + (band.theta2 - band.theta1) *
                                     static_cast<double>(g) / (G - 1);
    sum += task_info(items, theta);
  }
  out.avg_info = sum / G;
  out.mean_info_per_item = items.empty() ? 0 : out.avg_info / items.size();
  double midpoint = (band.theta1 + band.theta2) / 2.0;
  for (const auto& it : items)
    out.upper_bound += band_item_avg_info(it.a, midpoint, band);
  out.normalized_score = out.upper_bound == 0 ? 0 : out.avg_info / out.upper_bound;
  return out;
}

// ---------------------------------------------------------------------------
// Response matrices and the joint MAP fit.

struct ResponseMatrix {
  std::vector<std::string> respondents;
  std::vector<std::string> items;
  std::vector<std::vector<int>> outcomes;  // respondents x items, 0/1
};

struct IrtConfig {
  double sigma_a = 0.5;
  double sigma_b = 2.0;
  double damping = 0.5;
  double a_min = 0.2;
  double a_max = 4.0;
  double tol = 1e-6;
  int max_iter = 500;
  std::uint64_t seed = 0;
};

struct IrtFit {
  std::vector<std::string> respondents;
  std::vector<double> theta;
  std::vector<ItemParams> items;            // informative items only
  std::vector<std::string> dropped_items;   // all-correct/all-incorrect columns
  bool converged = false;
  int iterations = 0;
  std::vector<double> objective_trace;      // one entry per accepted iteration
  IrtConfig config;
};

namespace detail {

struct IrtState {
  std::vector<double> theta, log_a, b;
};

inline double irt_objective(const std::vector<std::vector<int>>& y,
                            const IrtState& s, const IrtConfig& cfg) {
  const std::size_t N = s.theta.size(), M = s.log_a.size();
  double obj = 0;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < M; ++j) {
      double a = std::exp(s.log_a[j]);
      double p = sigmoid(a * (s.theta[i] - s.b[j]));
      p = std::min(1.0 - 1e-12, std::max(1e-12, p));
      obj += y[i][j] ? std::log(p) : std::log(1.0 - p);
    }
  }
  for (double t : s.theta) obj -= 0.5 * t * t;
  for (double la : s.log_a) obj -= 0.5 * la * la / (cfg.sigma_a * cfg.sigma_a);
  for (double bb : s.b) obj -= 0.5 * bb * bb / (cfg.sigma_b * cfg.sigma_b);
  return obj;
}

// Gradient and Hessian of the itemwise objective in (log a_j, b_j).
struct ItemDerivatives {
  double g1 = 0, g2 = 0, h11 = 0, h22 = 0, h12 = 0;
};

inline ItemDerivatives item_derivatives(const std::vector<std::vector<int>>& y,
                                        const IrtState& s, const IrtConfig& cfg,
                                        std::size_t j) {
  ItemDerivatives d;
  const double a = std::exp(s.log_a[j]);
  for (std::size_t i = 0; i < s.theta.size(); ++i) {
    double t = s.theta[i] - s.b[j];
    double p = sigmoid(a * t);
    double w = p * (1.0 - p);
    double r = y[i][j] - p;
    d.g1 += r * a * t;
    d.g2 += -r * a;
    d.h11 += -w * (a * t) * (a * t);
    d.h22 += -w * a * a;
    d.h12 += w * (a * t) * a;  // = -sum w * (a t) * (-a)
  }
  d.g1 -= s.log_a[j] / (cfg.sigma_a * cfg.sigma_a);
  d.g2 -= s.b[j] / (cfg.sigma_b * cfg.sigma_b);
  d.h11 -= 1.0 / (cfg.sigma_a * cfg.sigma_a);
  d.h22 -= 1.0 / (cfg.sigma_b * cfg.sigma_b);
  return d;
}

inline void irt_iteration(const std::vector<std::vector<int>>& y, IrtState& s,
                          const IrtConfig& cfg, double damping) {
  const std::size_t N = s.theta.size(), M = s.log_a.size();
  // item step: one damped Newton step on the 2x2 system per item
  for (std::size_t j = 0; j < M; ++j) {
    ItemDerivatives d = item_derivatives(y, s, cfg, j);
    double det = d.h11 * d.h22 - d.h12 * d.h12;
    if (std::fabs(det) < 1e-12) continue;
    double step_la = -(d.h22 * d.g1 - d.h12 * d.g2) / det;
    double step_b = -(-d.h12 * d.g1 + d.h11 * d.g2) / det;
    s.log_a[j] += damping * step_la;
    s.b[j] += damping * step_b;
    s.log_a[j] = std::min(std::log(cfg.a_max), std::max(std::log(cfg.a_min), s.log_a[j]));
  }
  // respondent step: scalar damped Newton per respondent
  for (std::size_t i = 0; i < N; ++i) {
    double g = -s.theta[i], h = -1.0;
    for (std::size_t j = 0; j < M; ++j) {
      double a = std::exp(s.log_a[j]);
      double p = sigmoid(a * (s.theta[i] - s.b[j]));
      g += (y[i][j] - p) * a;
      h -= a * a * p * (1.0 - p);
    }
    s.theta[i] += damping * (-g / h);
  }
  // identifiability: standardize theta, compensate (b, log a)
  double mean = 0;
  for (double t : s.theta) mean += t;
  mean /= static_cast<double>(N);
  double var = 0;
  for (double t : s.theta) var += (t - mean) * (t - mean);
  var /= static_cast<double>(N);
  double sd = std::sqrt(std::max(var, 1e-12));
  for (double& t : s.theta) t = (t - mean) / sd;
  for (std::size_t j = 0; j < M; ++j) {
    s.b[j] = (s.b[j] - mean) / sd;
    s.log_a[j] += std::log(sd);
    s.log_a[j] = std::min(std::log(cfg.a_max), std::max(std::log(cfg.a_min), s.log_a[j]));
  }
}

}  // namespace detail

inline IrtFit fit_2pl(const ResponseMatrix& matrix, const IrtConfig& cfg = {}) {
  const std::size_t N = matrix.respondents.size();
  if (N < 2) throw std::invalid_argument("fit_2pl needs at least two respondents");

  IrtFit fit;
  fit.respondents = matrix.respondents;
  fit.config = cfg;

  // drop non-informative columns
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < matrix.items.size(); ++j) {
    long sum = 0;
    for (std::size_t i = 0; i < N; ++i) sum += matrix.outcomes[i][j];
    if (sum == 0 || sum == static_cast<long>(N))
      fit.dropped_items.push_back(matrix.items[j]);
    else
      keep.push_back(j);
  }
  if (keep.empty()) throw std::invalid_argument("fit_2pl needs an informative item");
  const std::size_t M = keep.size();
  std::vector<std::vector<int>> y(N, std::vector<int>(M));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < M; ++j) y[i][j] = matrix.outcomes[i][keep[j]];

  detail::IrtState s;
  s.theta.resize(N);
  s.log_a.resize(M);
  s.b.resize(M);

  // theta from smoothed logits of per-respondent accuracy, standardized
  for (std::size_t i = 0; i < N; ++i) {
    double correct = 0;
    for (std::size_t j = 0; j < M; ++j) correct += y[i][j];
    double acc = (correct + 0.5) / (static_cast<double>(M) + 1.0);
    s.theta[i] = std::log(acc / (1.0 - acc));
  }
  {
    double mean = 0;
    for (double t : s.theta) mean += t;
    mean /= static_cast<double>(N);
    double var = 0;
    for (double t : s.theta) var += (t - mean) * (t - mean);
    var /= static_cast<double>(N);
    double sd = std::sqrt(std::max(var, 1e-12));
    for (double& t : s.theta) t = (t - mean) / sd;
  }
  // log a ~ N(0, 0.25^2), b ~ N(0, 1), Box-Muller over the seeded stream
  Rng rng(cfg.seed);
  auto gauss = [&rng]() {
    double u1 = std::max(1e-12, rng.unit());
    double u2 = rng.unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };
  for (std::size_t j = 0; j < M; ++j) {
    s.log_a[j] = 0.25 * gauss();
    s.b[j] = gauss();
  }

  double objective = detail::irt_objective(y, s, cfg);
  fit.objective_trace.push_back(objective);

  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    detail::IrtState prev = s;
    double damping = cfg.damping;
    double new_obj = objective;
    // halving retry keeps the accepted objective non-decreasing (within 1e-9)
    for (int retry = 0; retry < 60; ++retry) {
      s = prev;
      detail::irt_iteration(y, s, cfg, damping);
      new_obj = detail::irt_objective(y, s, cfg);
      if (new_obj >= objective - 1e-9) break;
      damping /= 2.0;
    }
    fit.objective_trace.push_back(new_obj);
    objective = new_obj;

    double delta2 = 0, norm2 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      delta2 += (s.theta[i] - prev.theta[i]) * (s.theta[i] - prev.theta[i]);
      norm2 += prev.theta[i] * prev.theta[i];
    }
    for (std::size_t j = 0; j < M; ++j) {
      delta2 += (s.log_a[j] - prev.log_a[j]) * (s.log_a[j] - prev.log_a[j]);
      delta2 += (s.b[j] - prev.b[j]) * (s.b[j] - prev.b[j]);
      norm2 += prev.log_a[j] * prev.log_a[j] + prev.b[j] * prev.b[j];
    }
    if (std::sqrt(delta2) <= cfg.tol * std::max(1.0, std::sqrt(norm2))) {
      fit.converged = true;
      ++iter;
      break;
    }
  }
  fit.iterations = iter;
  fit.theta = s.theta;
  for (std::size_t j = 0; j < M; ++j)
    fit.items.push_back({matrix.items[keep[j]], std::exp(s.log_a[j]), s.b[j]});
  return fit;
}

// ---------------------------------------------------------------------------
// Wright map: respondents and items on one theta scale, binned rows.

inline std::string wright_map(const std::vector<std::pair<std::string, double>>& abilities,
                              const std::vector<std::pair<std::string, double>>& items,
                              int n_bins = 20) {
  if (abilities.empty() && items.empty())
    throw std::invalid_argument("wright_map needs at least one entry");
  double lo = 1e300, hi = -1e300;
  for (const auto& [_, t] : abilities) {
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  for (const auto& [_, b] : items) {
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  if (hi <= lo) hi = lo + 1e-6;
  double width = (hi - lo) / n_bins;

  std::ostringstream out;
  out << "MODEL-ITEM MAP: models and items on the same theta scale\n";
  out << "theta range: [" << std::fixed << std::setprecision(2) << lo << ", " << hi
      << "]\n";
  out << "     theta | Models                         | Items (b in bin)\n";
  out << std::string(80, '-') << "\n";
  for (int bin = 0; bin < n_bins; ++bin) {
    double b_lo = lo + bin * width;
    double b_hi = bin == n_bins - 1 ? hi + 1e-9 : lo + (bin + 1) * width;
    double center = b_lo + width / 2.0;
    std::string model_col, item_col;
    for (const auto& [name, t] : abilities)
      if (t >= b_lo && t < b_hi) {
        if (!model_col.empty()) model_col += ", ";
        model_col += name;
      }
    for (const auto& [name, b] : items)
      if (b >= b_lo && b < b_hi) {
        if (!item_col.empty()) item_col += " ";
        item_col += name;
      }
    std::ostringstream row;
    row << std::setw(10) << std::fixed << std::setprecision(2) << center << " | "
        << std::left << std::setw(30) << model_col << " | " << item_col;
    out << row.str() << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Replay mode: parameter tables as delimited text (label <tab> value(s)).

inline std::vector<std::pair<std::string, double>>
parse_ability_table(const std::string& text) {
  std::vector<std::pair<std::string, double>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string label;
    double theta;
    if (row >> label >> theta) out.emplace_back(label, theta);
  }
  return out;
}

inline std::vector<ItemParams> parse_item_table(const std::string& text) {
  std::vector<ItemParams> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    ItemParams item;
    if (row >> item.label >> item.a >> item.b) out.push_back(item);
  }
  return out;
}

inline std::string format_fit(const IrtFit& fit) {
  std::ostringstream out;
  out << "# respondents: label theta\n";
  for (std::size_t i = 0; i < fit.respondents.size(); ++i)
    out << fit.respondents[i] << "\t" << std::setprecision(10) << fit.theta[i] << "\n";
  out << "# items: label a b\n";
  for (const auto& it : fit.items)
    out << it.label << "\t" << std::setprecision(10) << it.a << "\t" << it.b << "\n";
  if (!fit.dropped_items.empty()) {
    out << "# dropped:";
    for (const auto& d : fit.dropped_items) out << " " << d;
    out << "\n";
  }
  return out.str();
}

}  // namespace forge

#endif  // FORGE_PSYCHOMETRICS_HPP_
