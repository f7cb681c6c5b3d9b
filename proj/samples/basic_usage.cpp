// Fits LDA and NMF on a small synthetic corpus and prints direct accuracy.

#include <iostream>

#include "emotopic/emotopic.hpp"

int main() {
  using namespace emotopic;

  SyntheticSpec spec;
  spec.docs_per_class = 60;
  spec.decorate = true;
  auto raw = make_synthetic(spec);

  PreprocessConfig prep;
  prep.stopwords = {"ve", "bir", "cok", "bu"};
  prep.stemmer = std::make_shared<SuffixStemmer>(std::vector<std::string>{"lar", "ler", "yum"});
  Corpus corpus = build_corpus(raw, prep);
  auto [train, test] = split_train_test(corpus, 0.8, 42);

  LdaParams lda;
  lda.topics = 3;
  lda.alpha = 0.1;
  lda.iterations = 300;
  lda.burn_in = 100;
  TopicModel model = fit_lda(train, lda);
  auto labeling = label_topics(model, train);
  std::cout << "lda accuracy " << evaluate(model, labeling, test).accuracy << "\n";
  for (std::size_t k = 0; k < model.topics(); ++k) {
    std::cout << "  topic " << k << " (" << labeling.class_of_topic(k) << "):";
    for (const auto& wt : top_words(model, k, 5)) std::cout << ' ' << model.vocab->term(wt.term);
    std::cout << "\n";
  }

  NmfParams nmf;
  nmf.rank = 3;
  TopicModel nmf_model = as_topic_model(fit_nmf(to_term_matrix(train, MatrixMode::tfidf), nmf), train.vocab);
  std::cout << "nmf accuracy " << evaluate(nmf_model, label_topics(nmf_model, train), test).accuracy << "\n";
}
