#pragma once

#include "emotopic/config.hpp"
#include "emotopic/corpus.hpp"
#include "emotopic/csv.hpp"
#include "emotopic/error.hpp"
#include "emotopic/experiment.hpp"
#include "emotopic/io.hpp"
#include "emotopic/lda.hpp"
#include "emotopic/metrics.hpp"
#include "emotopic/ml/cross_validation.hpp"
#include "emotopic/ml/features.hpp"
#include "emotopic/ml/naive_bayes.hpp"
#include "emotopic/ml/random_forest.hpp"
#include "emotopic/ml/svm.hpp"
#include "emotopic/nlda.hpp"
#include "emotopic/nmf.hpp"
#include "emotopic/pipeline.hpp"
#include "emotopic/random.hpp"
#include "emotopic/synthetic.hpp"
#include "emotopic/text.hpp"
#include "emotopic/topic_model.hpp"
