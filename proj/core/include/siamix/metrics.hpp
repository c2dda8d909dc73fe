#pragma once

#include <string>
#include <vector>

#include "siamix/tensor.hpp"
#include "siamix/types.hpp"

namespace siamix {

struct ConfusionCounts {
  int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  int64_t total() const { return tp + fp + fn + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp; fp += o.fp; fn += o.fn; tn += o.tn;
    return *this;
  }
};

// exact integer counts treating `cls` as positive
ConfusionCounts confusion_counts(const LabelMap& pred, const LabelMap& truth, int32_t cls);

struct F1Iou {
  double f1 = 0.0;
  double iou = 0.0;
  bool degenerate = false;  // zero denominator (class absent on both sides)
};

// F1 = 2TP/(2TP+FP+FN), IoU = TP/(TP+FP+FN); zero denominators yield 0 with
// the degenerate flag set
F1Iou f1_iou(const ConfusionCounts& counts);

struct ClassMetrics {
  int32_t cls = 0;
  ConfusionCounts counts;
  F1Iou scores;
};

struct MetricsReport {
  std::vector<ClassMetrics> per_class;
  double mean_f1 = 0.0;
  double mean_iou = 0.0;
  double building_f1 = 0.0;   // class 1
  double building_iou = 0.0;

  // detection is scored on the building class, change on the class mean
  double headline_f1(Task task) const { return task == Task::detection ? building_f1 : mean_f1; }
  double headline_iou(Task task) const { return task == Task::detection ? building_iou : mean_iou; }
};

MetricsReport report_from_counts(const std::vector<ConfusionCounts>& per_class_counts);

// [B,C,H,W] logits -> [B,H,W] argmax class map
template <typename T>
LabelMap argmax_map(const Tensor<T>& logits);

// one row per class: class,tp,fp,fn,tn,f1,iou
std::string metrics_csv(const MetricsReport& report);
MetricsReport parse_metrics_csv(const std::string& text);

}  // namespace siamix
