#include "siamix/metrics.hpp"

#include <cstdio>
#include <sstream>

namespace siamix {

ConfusionCounts confusion_counts(const LabelMap& pred, const LabelMap& truth, int32_t cls) {
  if (pred.shape != truth.shape)
    throw ShapeError("confusion_counts: pred " + shape_str(pred.shape) + " vs truth " + shape_str(truth.shape));
  ConfusionCounts c;
  for (size_t i = 0; i < pred.values.size(); ++i) {
    const bool p = pred.values[i] == cls;
    const bool t = truth.values[i] == cls;
    if (p && t) c.tp++;
    else if (p && !t) c.fp++;
    else if (!p && t) c.fn++;
    else c.tn++;
  }
  return c;
}

F1Iou f1_iou(const ConfusionCounts& counts) {
  F1Iou r;
  const int64_t f1_den = 2 * counts.tp + counts.fp + counts.fn;
  const int64_t iou_den = counts.tp + counts.fp + counts.fn;
  if (f1_den == 0 || iou_den == 0) {
    r.degenerate = true;
    return r;
  }
  r.f1 = static_cast<double>(2 * counts.tp) / static_cast<double>(f1_den);
  r.iou = static_cast<double>(counts.tp) / static_cast<double>(iou_den);
  return r;
}

MetricsReport report_from_counts(const std::vector<ConfusionCounts>& per_class_counts) {
  MetricsReport rep;
  double sum_f1 = 0.0, sum_iou = 0.0;
  for (size_t c = 0; c < per_class_counts.size(); ++c) {
    ClassMetrics cm;
    cm.cls = static_cast<int32_t>(c);
    cm.counts = per_class_counts[c];
    cm.scores = f1_iou(cm.counts);
    sum_f1 += cm.scores.f1;
    sum_iou += cm.scores.iou;
    rep.per_class.push_back(cm);
  }
  if (!rep.per_class.empty()) {
    rep.mean_f1 = sum_f1 / static_cast<double>(rep.per_class.size());
    rep.mean_iou = sum_iou / static_cast<double>(rep.per_class.size());
  }
  if (rep.per_class.size() > 1) {
    rep.building_f1 = rep.per_class[1].scores.f1;
    rep.building_iou = rep.per_class[1].scores.iou;
  }
  return rep;
}

template <typename T>
LabelMap argmax_map(const Tensor<T>& logits) {
  if (logits.rank() != 4) throw ShapeError("argmax_map expects [B,C,H,W], got " + shape_str(logits.shape()));
  const int64_t B = logits.dim(0), C = logits.dim(1), H = logits.dim(2), W = logits.dim(3);
  LabelMap out = LabelMap::zeros({B, H, W});
  auto v = logits.data();
  const int64_t hw = H * W;
  for (int64_t b = 0; b < B; ++b) {
    for (int64_t p = 0; p < hw; ++p) {
      int32_t best = 0;
      T best_v = v[static_cast<size_t>(b * C * hw + p)];
      for (int64_t c = 1; c < C; ++c) {
        const T cur = v[static_cast<size_t>((b * C + c) * hw + p)];
        if (cur > best_v) {
          best_v = cur;
          best = static_cast<int32_t>(c);
        }
      }
      out.values[static_cast<size_t>(b * hw + p)] = best;
    }
  }
  return out;
}

std::string metrics_csv(const MetricsReport& report) {
  std::ostringstream os;
  os << "class,tp,fp,fn,tn,f1,iou\n";
  char buf[160];
  for (const auto& cm : report.per_class) {
    std::snprintf(buf, sizeof(buf), "%d,%lld,%lld,%lld,%lld,%.10f,%.10f\n", cm.cls,
                  static_cast<long long>(cm.counts.tp), static_cast<long long>(cm.counts.fp),
                  static_cast<long long>(cm.counts.fn), static_cast<long long>(cm.counts.tn),
                  cm.scores.f1, cm.scores.iou);
    os << buf;
  }
  return os.str();
}

MetricsReport parse_metrics_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);  // header
  std::vector<ConfusionCounts> counts;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    ConfusionCounts c;
    int cls = 0;
    long long tp, fp, fn, tn;
    double f1, iou;
    if (std::sscanf(line.c_str(), "%d,%lld,%lld,%lld,%lld,%lf,%lf", &cls, &tp, &fp, &fn, &tn, &f1, &iou) != 7)
      throw DataError("metrics csv: bad row '" + line + "'");
    c.tp = tp; c.fp = fp; c.fn = fn; c.tn = tn;
    counts.push_back(c);
  }
  return report_from_counts(counts);
}

template LabelMap argmax_map(const Tensor<float>&);
template LabelMap argmax_map(const Tensor<double>&);

}  // namespace siamix
