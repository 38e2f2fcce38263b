#pragma once

// Umbrella include for the SWB sensing pipeline library.

#include "swb/data/dataset_io.hpp"
#include "swb/data/generator.hpp"
#include "swb/data/records.hpp"
#include "swb/error.hpp"
#include "swb/eval/analysis.hpp"
#include "swb/eval/cross_validation.hpp"
#include "swb/eval/folds.hpp"
#include "swb/eval/stats.hpp"
#include "swb/eval/sweep.hpp"
#include "swb/features/extractors.hpp"
#include "swb/features/feature_matrix.hpp"
#include "swb/features/normalization.hpp"
#include "swb/features/registry.hpp"
#include "swb/lexicon/lexicon.hpp"
#include "swb/lexicon/segmenter.hpp"
#include "swb/numerics/least_squares.hpp"
#include "swb/numerics/matrix.hpp"
#include "swb/numerics/rng.hpp"
#include "swb/numerics/special_functions.hpp"
#include "swb/regress/lasso.hpp"
#include "swb/regress/mars.hpp"
#include "swb/regress/ols.hpp"
#include "swb/regress/problem.hpp"
#include "swb/regress/stepwise.hpp"
#include "swb/regress/svr.hpp"
