// scat: command-line front end for the corpus pipeline, training, topic
// extraction, classification, gradient checking and embedding export.
//
// Exit codes: 0 success, 1 I/O, 2 usage/validation, 3 numeric failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "scat/competition.hpp"
#include "scat/corpus.hpp"
#include "scat/error.hpp"
#include "scat/evaluation.hpp"
#include "scat/model_file.hpp"
#include "scat/training.hpp"

namespace {

using namespace scat;

struct PrepArgs {
  std::string input;
  std::string output;
  std::size_t max_vocab = 2000;
  std::size_t min_df = 3;
  std::string stopwords;
  std::string weighting = "log_normalized_tf";
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct TrainArgs {
  std::string corpus;
  std::string output;
  std::size_t hidden = 0;
  std::string variant = "scat";
  std::optional<std::size_t> k;
  double alpha = 1.0;
  std::size_t epochs = 50;
  std::size_t batch = 100;
  double lr = 1e-3;
  std::string optimizer = "adam";
  std::uint64_t seed = 0;
  bool deterministic = false;
  std::size_t threads = 0;
  std::size_t patience = 5;
  double val_fraction = 0.1;
};

struct TopicsArgs {
  std::string model;
  std::size_t top_n = 10;
};

struct ClassifyArgs {
  std::string model;
  std::string train;
  std::string test;
  bool competition_at_inference = false;
  std::size_t clf_epochs = 500;
  double clf_lr = 0.05;
  std::string output;
};

struct GradcheckArgs {
  std::size_t v = 10;
  std::size_t h = 4;
  std::string variant = "none";
  std::optional<std::size_t> k;
  double alpha = 1.0;
  double eps = 1e-5;
  std::uint64_t seed = 0;
};

struct ExportArgs {
  std::string model;
  std::string corpus;
  std::string output;
  bool competition_at_inference = false;
};

int run_prep(const PrepArgs& a) {
  corpus::CorpusConfig cfg;
  cfg.max_vocab = a.max_vocab;
  cfg.min_doc_freq = a.min_df;
  cfg.weighting = corpus::weighting_from_string(a.weighting);
  cfg.test_fraction = a.test_fraction;
  cfg.split_seed = a.seed;
  if (!a.stopwords.empty()) cfg.stopwords = corpus::read_stopwords(a.stopwords);

  auto loaded = corpus::load_20newsgroups(a.input, cfg);
  corpus::write_archive(a.output + ".train", {loaded.train, loaded.vocab, loaded.class_names, cfg});
  corpus::write_archive(a.output + ".test", {loaded.test, loaded.vocab, loaded.class_names, cfg});
  if (loaded.skipped_files > 0) {
    std::cerr << "warning: skipped " << loaded.skipped_files << " unreadable files\n";
  }
  std::cout << "train=" << loaded.train.size() << " test=" << loaded.test.size() << " vocab=" << loaded.vocab.size()
            << " classes=" << loaded.class_names.size() << " skipped=" << loaded.skipped_files
            << " layout=" << (loaded.bydate_layout ? "bydate" : "flat") << '\n';
  return 0;
}

int run_train(const TrainArgs& a) {
  const auto archive = corpus::read_archive(a.corpus);
  const auto variant = nn::variant_from_string(a.variant);
  std::size_t k = 1;
  if (a.k) {
    k = *a.k;
  } else if (variant != nn::Variant::none) {
    k = train::default_k(a.hidden);
  }
  if (variant != nn::Variant::none && (k < 1 || k > a.hidden)) {
    throw ValidationError("--k " + std::to_string(k) + " must lie in [1, --hidden " + std::to_string(a.hidden) + "]");
  }

  train::TrainConfig cfg;
  cfg.epochs = a.epochs;
  cfg.batch_size = a.batch;
  cfg.learning_rate = a.lr;
  cfg.optimizer = train::optimizer_from_string(a.optimizer);
  cfg.seed = a.seed;
  cfg.deterministic = a.deterministic;
  cfg.threads = a.threads;
  cfg.validation_fraction = a.val_fraction;
  cfg.early_stop_patience = a.patience > 0 ? std::optional<std::size_t>(a.patience) : std::nullopt;

  auto params = nn::init_params<float>(a.hidden, archive.docs.cols, variant, k, a.alpha, a.seed);
  std::cout << "epoch\ttrain_loss\tval_loss\n";
  auto result = train::fit(archive.docs, std::move(params), cfg, &std::cout);

  io::ModelFile model{std::move(result.params), archive.config.weighting, archive.vocab.tokens(),
                      archive.class_names};
  io::save_model(a.output, model);
  std::cerr << "epochs_run=" << result.report.epochs_run << " best_epoch=" << result.report.best_epoch
            << " checksum=" << std::hex << result.report.params_checksum << std::dec << '\n';
  return 0;
}

int run_topics(const TopicsArgs& a) {
  const auto model = io::load_model(a.model);
  const auto topics = eval::extract_topics(model.params, model.vocab, a.top_n);
  for (std::size_t j = 0; j < topics.size(); ++j) {
    std::cout << "topic_" << j << ':';
    for (const auto& [word, weight] : topics[j]) std::cout << ' ' << word;
    std::cout << '\n';
  }
  return 0;
}

void require_same_vocab(const io::ModelFile& model, const corpus::CorpusArchive& archive, const std::string& name) {
  if (model.vocab != archive.vocab.tokens()) {
    throw ValidationError("vocabulary of " + name + " does not match the model");
  }
}

int run_classify(const ClassifyArgs& a) {
  const auto model = io::load_model(a.model);
  const auto train_set = corpus::read_archive(a.train);
  const auto test_set = corpus::read_archive(a.test);
  require_same_vocab(model, train_set, a.train);
  require_same_vocab(model, test_set, a.test);

  const auto train_x = eval::encode_matrix(train_set.docs, model.params, a.competition_at_inference);
  const auto test_x = eval::encode_matrix(test_set.docs, model.params, a.competition_at_inference);
  eval::ClassifierConfig ccfg;
  ccfg.epochs = a.clf_epochs;
  ccfg.learning_rate = a.clf_lr;
  const auto clf = eval::train_classifier(train_x, train_set.docs.labels, ccfg);
  auto report = eval::evaluate(clf, test_x, test_set.docs.labels);
  report.class_names = train_set.class_names;

  const std::string text = report.to_json().dump(2);
  if (!a.output.empty()) {
    std::FILE* f = std::fopen(a.output.c_str(), "w");
    if (!f) throw IoError("cannot open for writing: " + a.output);
    std::fputs(text.c_str(), f);
    std::fputc('\n', f);
    std::fclose(f);
  }
  std::cout << text << '\n';
  return 0;
}

int run_gradcheck(const GradcheckArgs& a) {
  const auto variant = nn::variant_from_string(a.variant);
  std::size_t k = 1;
  if (a.k) {
    k = *a.k;
  } else if (variant != nn::Variant::none && a.h >= 2) {
    k = train::default_k(a.h);
  }
  const auto prob = train::make_grad_check_problem(a.v, a.h, variant, k, a.alpha, a.seed);
  const double err = train::grad_check(prob.params, prob.x, train::default_grad_check_mode(variant), a.eps);
  const bool pass = err < 1e-4;
  std::printf("max_relative_error=%.3e threshold=1e-04 %s\n", err, pass ? "PASS" : "FAIL");
  return pass ? 0 : 3;
}

int run_export(const ExportArgs& a) {
  const auto model = io::load_model(a.model);
  const auto archive = corpus::read_archive(a.corpus);
  require_same_vocab(model, archive, a.corpus);
  const auto features = eval::encode_matrix(archive.docs, model.params, a.competition_at_inference);
  eval::export_embeddings(features, archive.docs.labels, archive.docs.doc_ids, a.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-chance competitive autoencoder for text"};
  app.require_subcommand(1);

  PrepArgs prep;
  auto* c_prep = app.add_subcommand("prep", "Build train/test corpus archives from a class-per-directory tree");
  c_prep->add_option("--input", prep.input, "Corpus root directory")->required();
  c_prep->add_option("--output", prep.output, "Output path; writes <output>.train and <output>.test")->required();
  c_prep->add_option("--max-vocab", prep.max_vocab, "Vocabulary size cap")->capture_default_str();
  c_prep->add_option("--min-df", prep.min_df, "Minimum document frequency")->capture_default_str();
  c_prep->add_option("--stopwords", prep.stopwords, "Stopword file, one token per line");
  c_prep->add_option("--weighting", prep.weighting, "log_normalized_tf or binary")->capture_default_str();
  c_prep->add_option("--test-fraction", prep.test_fraction, "Test share for flat layouts")->capture_default_str();
  c_prep->add_option("--seed", prep.seed, "Split seed for flat layouts")->capture_default_str();

  TrainArgs tr;
  auto* c_train = app.add_subcommand("train", "Train an autoencoder on a corpus archive");
  c_train->add_option("--corpus", tr.corpus, "Training corpus archive")->required();
  c_train->add_option("--hidden", tr.hidden, "Hidden width (number of topics)")->required()->check(CLI::PositiveNumber);
  c_train->add_option("--output", tr.output, "Model file to write")->required();
  c_train->add_option("--variant", tr.variant, "scat, ksparse, kate or none")->capture_default_str();
  c_train->add_option("--k", tr.k, "Competition size (default: ceil(hidden/2))");
  c_train->add_option("--alpha", tr.alpha, "K-Sparse inference multiplier / KATE energy gain")->capture_default_str();
  c_train->add_option("--epochs", tr.epochs)->capture_default_str();
  c_train->add_option("--batch", tr.batch)->capture_default_str();
  c_train->add_option("--lr", tr.lr)->capture_default_str();
  c_train->add_option("--optimizer", tr.optimizer, "adam or sgd_momentum")->capture_default_str();
  c_train->add_option("--seed", tr.seed)->capture_default_str();
  c_train->add_flag("--deterministic", tr.deterministic, "Serial, fixed-order gradient reduction");
  c_train->add_option("--threads", tr.threads, "Worker threads (0: all cores)")->capture_default_str();
  c_train->add_option("--patience", tr.patience, "Early-stopping patience in epochs (0: off)")->capture_default_str();
  c_train->add_option("--val-fraction", tr.val_fraction)->capture_default_str();

  TopicsArgs tp;
  auto* c_topics = app.add_subcommand("topics", "Print the top words of every hidden neuron");
  c_topics->add_option("--model", tp.model)->required();
  c_topics->add_option("--top-n", tp.top_n)->capture_default_str();

  ClassifyArgs cl;
  auto* c_classify = app.add_subcommand("classify", "Softmax classification on learned encodings");
  c_classify->add_option("--model", cl.model)->required();
  c_classify->add_option("--train", cl.train, "Training corpus archive")->required();
  c_classify->add_option("--test", cl.test, "Test corpus archive")->required();
  c_classify->add_flag("--competition-at-inference", cl.competition_at_inference);
  c_classify->add_option("--clf-epochs", cl.clf_epochs, "Full-batch classifier steps")->capture_default_str();
  c_classify->add_option("--clf-lr", cl.clf_lr)->capture_default_str();
  c_classify->add_option("--output", cl.output, "Also write the report JSON here");

  GradcheckArgs gc;
  auto* c_grad = app.add_subcommand("gradcheck", "Finite-difference check of the analytic backward pass");
  c_grad->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
  c_grad->add_option("--v", gc.v)->capture_default_str()->check(CLI::PositiveNumber);
  c_grad->add_option("--h", gc.h)->capture_default_str()->check(CLI::PositiveNumber);
  c_grad->add_option("--variant", gc.variant)->capture_default_str();
  c_grad->add_option("--k", gc.k);
  c_grad->add_option("--alpha", gc.alpha)->capture_default_str();
  c_grad->add_option("--eps", gc.eps)->capture_default_str();
  c_grad->add_option("--seed", gc.seed)->capture_default_str();

  ExportArgs ex;
  auto* c_export = app.add_subcommand("export", "Write document encodings as TSV");
  c_export->add_option("--model", ex.model)->required();
  c_export->add_option("--corpus", ex.corpus)->required();
  c_export->add_option("--output", ex.output)->required();
  c_export->add_flag("--competition-at-inference", ex.competition_at_inference);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*c_prep) return run_prep(prep);
    if (*c_train) return run_train(tr);
    if (*c_topics) return run_topics(tp);
    if (*c_classify) return run_classify(cl);
    if (*c_grad) return run_gradcheck(gc);
    if (*c_export) return run_export(ex);
  } catch (const scat::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
