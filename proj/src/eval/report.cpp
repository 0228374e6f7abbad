#include <cstdio>
#include <fstream>
#include <string>

#include "scat/error.hpp"
#include "scat/evaluation.hpp"

namespace scat::eval {

EvalReport report_from_predictions(const std::vector<std::int32_t>& truth, const std::vector<std::size_t>& predicted,
                                   std::size_t num_classes) {
  if (truth.size() != predicted.size()) throw ValidationError("evaluate: label and prediction counts differ");
  EvalReport rep;
  rep.confusion.assign(num_classes, std::vector<std::size_t>(num_classes, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || static_cast<std::size_t>(truth[i]) >= num_classes || predicted[i] >= num_classes) {
      throw ValidationError("evaluate: class id out of range");
    }
    ++rep.confusion[static_cast<std::size_t>(truth[i])][predicted[i]];
    if (static_cast<std::size_t>(truth[i]) == predicted[i]) ++correct;
  }

  rep.per_class.resize(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    std::size_t tp = rep.confusion[c][c];
    std::size_t predicted_c = 0;
    std::size_t actual_c = 0;
    for (std::size_t o = 0; o < num_classes; ++o) {
      predicted_c += rep.confusion[o][c];
      actual_c += rep.confusion[c][o];
    }
    auto& m = rep.per_class[c];
    m.support = actual_c;
    m.precision = predicted_c ? static_cast<double>(tp) / static_cast<double>(predicted_c) : 0.0;
    m.recall = actual_c ? static_cast<double>(tp) / static_cast<double>(actual_c) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    rep.macro_precision += m.precision;
    rep.macro_recall += m.recall;
    rep.macro_f1 += m.f1;
  }
  if (num_classes > 0) {
    rep.macro_precision /= static_cast<double>(num_classes);
    rep.macro_recall /= static_cast<double>(num_classes);
    rep.macro_f1 /= static_cast<double>(num_classes);
  }
  rep.accuracy = truth.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(truth.size());
  return rep;
}

EvalReport evaluate(const Classifier& clf, const Matrix& features, const std::vector<std::int32_t>& labels) {
  if (labels.size() != features.rows) throw ValidationError("evaluate: label count does not match rows");
  if (features.cols != clf.num_features) throw ValidationError("evaluate: feature width does not match classifier");
  std::vector<std::size_t> predicted(features.rows);
  for (std::size_t i = 0; i < features.rows; ++i) predicted[i] = clf.predict(features.row(i));
  return report_from_predictions(labels, predicted, clf.num_classes);
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  j["per_class"] = nlohmann::json::array();
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    nlohmann::json e;
    e["class"] = c;
    if (c < class_names.size()) e["name"] = class_names[c];
    e["precision"] = per_class[c].precision;
    e["recall"] = per_class[c].recall;
    e["f1"] = per_class[c].f1;
    e["support"] = per_class[c].support;
    j["per_class"].push_back(std::move(e));
  }
  j["macro_precision"] = macro_precision;
  j["macro_recall"] = macro_recall;
  j["macro_f1"] = macro_f1;
  j["accuracy"] = accuracy;
  j["confusion"] = confusion;
  return j;
}

void export_embeddings(const Matrix& features, const std::vector<std::int32_t>& labels,
                       const std::vector<std::string>& doc_ids, const std::filesystem::path& path) {
  if (labels.size() != features.rows || doc_ids.size() != features.rows) {
    throw ValidationError("export_embeddings: features, labels and doc_ids lengths differ");
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "doc_id\tlabel";
  for (std::size_t j = 0; j < features.cols; ++j) out << "\tf" << j;
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < features.rows; ++i) {
    out << doc_ids[i] << '\t' << labels[i];
    for (float x : features.row(i)) {
      std::snprintf(buf, sizeof buf, "%.6g", static_cast<double>(x));
      out << '\t' << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace scat::eval
