#include "oodlab/metrics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace oodlab {

namespace {

// Per distinct score value, ascending: how many in/out samples sit at the
// value, plus suffix counts of samples strictly above it.
struct ScoreTable {
  std::vector<double> values;
  std::vector<std::size_t> in_above;   // in-dist samples with score > values[i]
  std::vector<std::size_t> out_above;  // out-dist samples with score > values[i]
  std::size_t num_in = 0;
  std::size_t num_out = 0;
};

ScoreTable build_table(std::span<const ScoredSample> samples) {
  ScoreTable table;
  std::vector<ScoredSample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredSample& a, const ScoredSample& b) { return a.score < b.score; });
  for (const ScoredSample& s : sorted) {
    table.num_in += s.is_in_distribution ? 1 : 0;
    table.num_out += s.is_in_distribution ? 0 : 1;
  }
  if (table.num_in == 0 || table.num_out == 0) {
    throw std::invalid_argument(
        "detection metrics need at least one in-distribution and one "
        "out-of-distribution sample");
  }

  std::size_t i = 0;
  std::vector<std::size_t> in_at, out_at;
  while (i < sorted.size()) {
    std::size_t j = i;
    std::size_t in_count = 0, out_count = 0;
    while (j < sorted.size() && sorted[j].score == sorted[i].score) {
      in_count += sorted[j].is_in_distribution ? 1 : 0;
      out_count += sorted[j].is_in_distribution ? 0 : 1;
      ++j;
    }
    table.values.push_back(sorted[i].score);
    in_at.push_back(in_count);
    out_at.push_back(out_count);
    i = j;
  }

  const std::size_t k = table.values.size();
  table.in_above.assign(k, 0);
  table.out_above.assign(k, 0);
  std::size_t in_suffix = 0, out_suffix = 0;
  for (std::size_t v = k; v-- > 0;) {
    table.in_above[v] = in_suffix;
    table.out_above[v] = out_suffix;
    in_suffix += in_at[v];
    out_suffix += out_at[v];
  }
  return table;
}

}  // namespace

RocCurve roc_curve(std::span<const ScoredSample> samples) {
  const ScoreTable table = build_table(samples);
  const double n_in = static_cast<double>(table.num_in);
  const double n_out = static_cast<double>(table.num_out);

  RocCurve curve;
  curve.points.reserve(table.values.size() + 2);
  curve.points.push_back({-std::numeric_limits<double>::infinity(), 1.0, 1.0});
  for (std::size_t v = 0; v < table.values.size(); ++v) {
    curve.points.push_back({table.values[v],
                            static_cast<double>(table.in_above[v]) / n_in,
                            static_cast<double>(table.out_above[v]) / n_out});
  }
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  return curve;
}

double auroc(std::span<const ScoredSample> samples) {
  const RocCurve curve = roc_curve(samples);
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const RocPoint& hi = curve.points[i];      // lower threshold, higher rates
    const RocPoint& lo = curve.points[i + 1];
    area += 0.5 * (hi.tpr + lo.tpr) * (hi.fpr - lo.fpr);
  }
  return area;
}

double tnr_at_tpr95(std::span<const ScoredSample> samples) {
  const ScoreTable table = build_table(samples);
  const double n_in = static_cast<double>(table.num_in);
  const double n_out = static_cast<double>(table.num_out);

  // The -inf boundary always satisfies TPR = 1; walk up while TPR holds.
  double tnr = 0.0;  // at -inf no out sample is rejected
  for (std::size_t v = 0; v < table.values.size(); ++v) {
    const double tpr = static_cast<double>(table.in_above[v]) / n_in;
    if (tpr >= 0.95) {
      tnr = static_cast<double>(table.num_out - table.out_above[v]) / n_out;
    } else {
      break;
    }
  }
  return tnr;
}

double dtacc(std::span<const ScoredSample> samples) {
  const ScoreTable table = build_table(samples);
  const double n_in = static_cast<double>(table.num_in);
  const double n_out = static_cast<double>(table.num_out);

  // Equal priors; both +/-inf boundaries give error 0.5.
  double min_error = 0.5;
  for (std::size_t v = 0; v < table.values.size(); ++v) {
    const std::size_t in_le = table.num_in - table.in_above[v];
    const double error = 0.5 * (static_cast<double>(in_le) / n_in +
                                static_cast<double>(table.out_above[v]) / n_out);
    min_error = std::min(min_error, error);
  }
  return 1.0 - min_error;
}

DetectionReport detection_report(std::span<const ScoredSample> samples) {
  DetectionReport report;
  const ScoreTable table = build_table(samples);
  report.num_in = table.num_in;
  report.num_out = table.num_out;
  report.auroc = auroc(samples);
  report.tnr_at_tpr95 = tnr_at_tpr95(samples);
  report.dtacc = dtacc(samples);
  return report;
}

}  // namespace oodlab
