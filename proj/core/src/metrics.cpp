#include "htdc/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <json.hpp>

#include "htdc/errors.hpp"

namespace htdc {

FuseRule fuse_rule_from_string(const std::string& name) {
  if (name == "or") return FuseRule::Or;
  if (name == "majority") return FuseRule::Majority;
  throw ConfigError("unknown fusion rule '" + name + "' (expected or|majority)");
}

std::vector<bool> fuse_flags(std::span<const std::vector<bool>> flags, FuseRule rule) {
  if (flags.empty()) throw ConfigError("fuse_edges: no edge results");
  const std::size_t n = flags.front().size();
  for (const auto& f : flags) {
    if (f.size() != n) throw ConfigError("fuse_edges: edge results differ in length");
  }
  std::vector<bool> out(n, false);
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t votes = 0;
    for (const auto& f : flags) votes += f[t] ? 1 : 0;
    out[t] = rule == FuseRule::Or ? votes > 0 : 2 * votes > flags.size();
  }
  return out;
}

std::vector<bool> fuse_edges(std::span<const DetectionResult> results, FuseRule rule) {
  std::vector<std::vector<bool>> flags;
  flags.reserve(results.size());
  for (const auto& r : results) flags.push_back(r.flags);
  return fuse_flags(flags, rule);
}

ConfusionCounts confusion(const std::vector<bool>& flags, std::span<const int> labels) {
  if (flags.size() != labels.size()) {
    throw ConfigError("confusion: " + std::to_string(flags.size()) + " flags vs " +
                      std::to_string(labels.size()) + " labels");
  }
  ConfusionCounts c;
  for (std::size_t t = 0; t < flags.size(); ++t) {
    if (labels[t] != 0 && labels[t] != 1) throw ConfigError("confusion: labels must be 0 or 1");
    const bool attack = labels[t] == 1;
    if (flags[t]) {
      attack ? ++c.tp : ++c.fp;
    } else {
      attack ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

ConfusionCounts confusion(std::span<const bool> flags, std::span<const int> labels) {
  return confusion(std::vector<bool>(flags.begin(), flags.end()), labels);
}

namespace {

Metric ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ClfScores clf_scores(const ConfusionCounts& c) {
  ClfScores s;
  s.tpr = ratio(c.tp, c.tp + c.fn);
  s.tnr = ratio(c.tn, c.tn + c.fp);
  s.ppv = ratio(c.tp, c.tp + c.fp);
  if (s.ppv && s.tpr && (*s.ppv + *s.tpr) > 0.0) {
    s.f1 = 2.0 * *s.ppv * *s.tpr / (*s.ppv + *s.tpr);
  }
  if (s.tpr && s.tnr) s.s_clf = (*s.tpr + *s.tnr) / 2.0;
  return s;
}

std::vector<AttackInterval> intervals_from_labels(std::span<const int> labels) {
  std::vector<AttackInterval> out;
  for (std::size_t i = 0; i < labels.size();) {
    if (labels[i] != 1) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < labels.size() && labels[j + 1] == 1) ++j;
    out.push_back({i, j});
    i = j + 1;
  }
  return out;
}

double ttd_score(const std::vector<bool>& flags, std::span<const AttackInterval> intervals) {
  if (intervals.empty()) throw ConfigError("ttd_score: no attack intervals");
  double acc = 0.0;
  for (const auto& iv : intervals) {
    if (iv.start > iv.end || iv.end >= flags.size()) {
      throw ConfigError("ttd_score: attack interval [" + std::to_string(iv.start) + ", " +
                        std::to_string(iv.end) + "] outside the " + std::to_string(flags.size()) +
                        "-step sequence");
    }
    std::size_t ttd = iv.duration();
    for (std::size_t t = iv.start; t <= iv.end; ++t) {
      if (flags[t]) {
        ttd = t - iv.start;
        break;
      }
    }
    acc += static_cast<double>(ttd) / static_cast<double>(iv.duration());
  }
  return std::clamp(1.0 - acc / static_cast<double>(intervals.size()), 0.0, 1.0);
}

double ranking_score(double s_ttd, double s_clf) { return (s_ttd + s_clf) / 2.0; }

MetricsReport report_from_counts(const ConfusionCounts& counts, Metric s_ttd) {
  MetricsReport r;
  r.counts = counts;
  const auto s = clf_scores(counts);
  r.tpr = s.tpr;
  r.tnr = s.tnr;
  r.ppv = s.ppv;
  r.f1 = s.f1;
  r.s_clf = s.s_clf;
  r.s_ttd = s_ttd;
  if (r.s_ttd && r.s_clf) r.s = ranking_score(*r.s_ttd, *r.s_clf);
  return r;
}

MetricsReport evaluate(const std::vector<bool>& flags, std::span<const int> labels) {
  const auto counts = confusion(flags, labels);
  const auto intervals = intervals_from_labels(labels);
  Metric s_ttd;
  if (!intervals.empty()) s_ttd = ttd_score(flags, intervals);
  return report_from_counts(counts, s_ttd);
}

std::string metrics_to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  auto put = [&](const char* key, const Metric& m) {
    j[key] = m ? nlohmann::ordered_json(*m) : nlohmann::ordered_json(nullptr);
  };
  put("S", r.s);
  put("S_TTD", r.s_ttd);
  put("S_CLF", r.s_clf);
  put("F1", r.f1);
  put("TPR", r.tpr);
  put("TNR", r.tnr);
  put("PPV", r.ppv);
  j["TP"] = r.counts.tp;
  j["FP"] = r.counts.fp;
  j["TN"] = r.counts.tn;
  j["FN"] = r.counts.fn;
  return j.dump(2);
}

std::string metrics_table(const MetricsReport& r, const std::string& row_label) {
  auto cell = [](const Metric& m) {
    char buf[32];
    if (m) {
      std::snprintf(buf, sizeof(buf), "%8.4f", *m);
    } else {
      std::snprintf(buf, sizeof(buf), "%8s", "n/a");
    }
    return std::string(buf);
  };
  auto count = [](std::size_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%6zu", v);
    return std::string(buf);
  };
  char head[256];
  std::snprintf(head, sizeof(head), "%-10s%8s%8s%8s%8s%8s%8s%8s%6s%6s%6s%6s\n", "", "S", "S_TTD",
                "S_CLF", "F1", "TPR", "TNR", "PPV", "TP", "FP", "TN", "FN");
  char label[32];
  std::snprintf(label, sizeof(label), "%-10s", row_label.substr(0, 10).c_str());
  return std::string(head) + label + cell(r.s) + cell(r.s_ttd) + cell(r.s_clf) + cell(r.f1) +
         cell(r.tpr) + cell(r.tnr) + cell(r.ppv) + count(r.counts.tp) + count(r.counts.fp) +
         count(r.counts.tn) + count(r.counts.fn) + "\n";
}

}  // namespace htdc
