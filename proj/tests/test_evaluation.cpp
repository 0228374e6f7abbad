#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "scat/error.hpp"
#include "scat/evaluation.hpp"

using namespace scat;
using namespace scat::eval;

namespace {

Matrix from_rows(const std::vector<std::vector<float>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  return m;
}

}  // namespace

TEST_CASE("extract_topics") {
  auto p = nn::ModelParams<float>::zeros(1, 3, nn::Variant::none, 1, 1.0);
  p.W = {0.1f, 0.9f, 0.5f};
  const std::vector<std::string> vocab{"a", "b", "c"};
  const auto t = extract_topics(p, vocab, 2);
  REQUIRE(t.size() == 1);
  CHECK(t[0] == Topic{{"b", 0.9f}, {"c", 0.5f}});

  const auto all = extract_topics(p, vocab, 3);
  CHECK(all[0].size() == 3);
  CHECK(all[0].back().first == "a");

  // Positive rescaling of a row leaves the word order unchanged; ties go to the lower index.
  auto q = p;
  for (auto& w : q.W) w *= 3.5f;
  CHECK(extract_topics(q, vocab, 3)[0][1].first == "c");
  q.W = {0.5f, 0.2f, 0.5f};
  CHECK(extract_topics(q, vocab, 1)[0][0].first == "a");

  CHECK_THROWS_AS(extract_topics(p, {"a", "b"}, 2), ValidationError);
}

TEST_CASE("classifier: separable toy set") {
  const auto X = from_rows({{0.0f, 0.1f}, {0.2f, 0.0f}, {0.1f, 0.3f}, {1.0f, 0.9f}, {0.8f, 1.0f}, {0.9f, 0.7f}});
  const std::vector<std::int32_t> y{0, 0, 0, 1, 1, 1};
  const auto clf = train_classifier(X, y);
  const auto rep = evaluate(clf, X, y);
  CHECK(rep.accuracy == 1.0);
  CHECK(rep.macro_f1 == 1.0);
  CHECK(rep.macro_precision == 1.0);
  CHECK(rep.macro_recall == 1.0);
}

TEST_CASE("classifier: identical features predict the majority class") {
  const auto X = from_rows({{0.4f, -0.2f}, {0.4f, -0.2f}, {0.4f, -0.2f}, {0.4f, -0.2f}, {0.4f, -0.2f}});
  const std::vector<std::int32_t> y{1, 0, 1, 2, 1};
  const auto clf = train_classifier(X, y);
  const std::vector<float> f{0.4f, -0.2f};
  CHECK(clf.predict(f) == 1);
}

TEST_CASE("classifier: row order does not matter") {
  std::mt19937_64 rng(4);
  std::normal_distribution<float> n01;
  std::vector<std::vector<float>> rows;
  std::vector<std::int32_t> y;
  for (int i = 0; i < 40; ++i) {
    const int c = i % 3;
    rows.push_back({n01(rng) + c, n01(rng) - c, n01(rng)});
    y.push_back(c);
  }
  const auto base = train_classifier(from_rows(rows), y);
  std::vector<std::size_t> perm(rows.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (int trial = 0; trial < 3; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<float>> r2;
    std::vector<std::int32_t> y2;
    for (auto i : perm) r2.push_back(rows[i]), y2.push_back(y[i]);
    const auto c2 = train_classifier(from_rows(r2), y2);
    CHECK(c2.weights == base.weights);
    CHECK(c2.bias == base.bias);
  }
}

TEST_CASE("classifier: input errors") {
  const auto X = from_rows({{0.0f}, {1.0f}});
  CHECK_THROWS_AS(train_classifier(X, {0}), ValidationError);
  CHECK_THROWS_AS(train_classifier(X, {0, 0}), ValidationError);
  CHECK_THROWS_AS(train_classifier(X, {0, -1}), ValidationError);
  const auto clf = train_classifier(X, {0, 1});
  CHECK_THROWS_AS(evaluate(clf, from_rows({{0.0f, 1.0f}}), {0}), ValidationError);
}

TEST_CASE("metrics from a fixed confusion matrix") {
  // truth/pred pairs giving [[1,1],[0,2]]
  const auto rep = report_from_predictions({0, 0, 1, 1}, {0, 1, 1, 1}, 2);
  CHECK(rep.confusion == std::vector<std::vector<std::size_t>>{{1, 1}, {0, 2}});
  CHECK(rep.per_class[0].precision == 1.0);
  CHECK(rep.per_class[0].recall == 0.5);
  CHECK(rep.per_class[0].f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(rep.per_class[1].precision == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(rep.per_class[1].recall == 1.0);
  CHECK(rep.per_class[1].f1 == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(rep.macro_f1 == doctest::Approx(0.7333333333333334).epsilon(1e-15));
  CHECK(rep.accuracy == 0.75);
  CHECK(rep.per_class[1].support == 2);
}

TEST_CASE("metrics: zero denominators and relabeling") {
  const auto rep = report_from_predictions({0, 0, 2}, {0, 0, 0}, 3);
  CHECK(rep.per_class[1].precision == 0.0);
  CHECK(rep.per_class[1].recall == 0.0);
  CHECK(rep.per_class[1].f1 == 0.0);
  CHECK(rep.per_class[2].precision == 0.0);

  // A consistent permutation of class ids leaves the macro scores unchanged.
  std::mt19937_64 rng(8);
  std::vector<std::int32_t> truth;
  std::vector<std::size_t> pred;
  for (int i = 0; i < 60; ++i) truth.push_back(static_cast<std::int32_t>(rng() % 4)), pred.push_back(rng() % 4);
  const auto a = report_from_predictions(truth, pred, 4);
  const std::size_t perm[] = {2, 0, 3, 1};
  std::vector<std::int32_t> t2;
  std::vector<std::size_t> p2;
  for (std::size_t i = 0; i < truth.size(); ++i)
    t2.push_back(static_cast<std::int32_t>(perm[truth[i]])), p2.push_back(perm[pred[i]]);
  const auto b = report_from_predictions(t2, p2, 4);
  CHECK(b.macro_f1 == doctest::Approx(a.macro_f1).epsilon(1e-14));
  CHECK(b.macro_precision == doctest::Approx(a.macro_precision).epsilon(1e-14));
  CHECK(b.accuracy == a.accuracy);

  CHECK_THROWS_AS(report_from_predictions({0, 5}, {0, 0}, 2), ValidationError);
}

TEST_CASE("report JSON has the expected fields") {
  auto rep = report_from_predictions({0, 1}, {0, 1}, 2);
  rep.class_names = {"x", "y"};
  const auto j = nlohmann::json::parse(rep.to_json().dump());
  for (const char* key : {"per_class", "macro_precision", "macro_recall", "macro_f1", "accuracy", "confusion"})
    CHECK(j.contains(key));
  CHECK(j["per_class"].size() == 2);
  CHECK(j["per_class"][1]["name"] == "y");
  CHECK(j["macro_f1"].get<double>() == 1.0);
}

TEST_CASE("encode_matrix") {
  corpus::DocMatrix docs;
  docs.cols = 12;
  std::mt19937_64 rng(2);
  for (int d = 0; d < 10; ++d) {
    corpus::SparseRow r;
    for (std::uint32_t i = 0; i < 12; ++i)
      if (rng() % 2) r.index.push_back(i), r.weight.push_back(0.5f);
    docs.push_back(r, d % 2, "d" + std::to_string(d));
  }
  docs.push_back(docs.rows[3], 1, "dup");

  auto p = nn::init_params<float>(10, 12, nn::Variant::scat, 3, 1.0, 4);
  for (auto& b : p.b) b = 0.3f;
  const auto plain = encode_matrix(docs, p, false);
  CHECK(plain.rows == 11);
  CHECK(plain.cols == 10);
  for (std::size_t i = 0; i < plain.rows; ++i) {
    const auto z = nn::encode_preact<float>(docs.rows[i], p);
    for (std::size_t j = 0; j < 10; ++j) CHECK(plain.row(i)[j] == z[j]);
  }
  CHECK(std::equal(plain.row(3).begin(), plain.row(3).end(), plain.row(10).begin()));

  const auto comp = encode_matrix(docs, p, true);
  for (std::size_t i = 0; i < comp.rows; ++i) {
    std::size_t pos = 0;
    for (std::size_t j = 0; j < 10; ++j) {
      pos += comp.row(i)[j] > 0;
      if (plain.row(i)[j] <= 0) CHECK(comp.row(i)[j] == plain.row(i)[j]);
    }
    CHECK(pos <= 3);
  }

  // Encoding a concatenation equals concatenating the encodings.
  corpus::DocMatrix head, tail;
  head.cols = tail.cols = 12;
  for (std::size_t i = 0; i < docs.size(); ++i)
    (i < 4 ? head : tail).push_back(docs.rows[i], docs.labels[i], docs.doc_ids[i]);
  auto joined = encode_matrix(head, p, true).data;
  const auto t = encode_matrix(tail, p, true).data;
  joined.insert(joined.end(), t.begin(), t.end());
  CHECK(joined == comp.data);

  docs.cols = 11;
  CHECK_THROWS_AS(encode_matrix(docs, p, false), ValidationError);
}

TEST_CASE("export_embeddings") {
  fixtures::TempDir dir("export");
  const auto X = from_rows({{0.5f, -0.125f}});
  export_embeddings(X, {1}, {"a/1"}, dir / "one.tsv");
  CHECK(fixtures::read_text(dir / "one.tsv") == "doc_id\tlabel\tf0\tf1\na/1\t1\t0.5\t-0.125\n");

  const auto Y = from_rows({{0.1234567f, 1.0f, 0.0f}, {-0.75f, 2.5e-7f, 3.0f}, {0.0f, 0.0f, 0.0f}});
  export_embeddings(Y, {0, 1, -1}, {"x", "y", "z"}, dir / "three.tsv");
  std::istringstream in(fixtures::read_text(dir / "three.tsv"));
  std::string line;
  std::getline(in, line);
  CHECK(std::count(line.begin(), line.end(), '\t') == 4);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string id, label, cell;
    std::getline(cells, id, '\t');
    std::getline(cells, label, '\t');
    for (std::size_t j = 0; j < 3; ++j) {
      REQUIRE(std::getline(cells, cell, '\t'));
      CHECK(std::stof(cell) == doctest::Approx(Y.row(rows)[j]).epsilon(1e-5));
    }
    ++rows;
  }
  CHECK(rows == 3);
  CHECK_THROWS_AS(export_embeddings(Y, {0}, {"x"}, dir / "bad.tsv"), ValidationError);
  CHECK_THROWS_AS(export_embeddings(X, {0}, {"x"}, dir / "no" / "such" / "dir.tsv"), IoError);
}
