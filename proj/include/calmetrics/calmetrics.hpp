#pragma once

#include "calmetrics/calibration.hpp"
#include "calmetrics/core_metrics.hpp"
#include "calmetrics/curves.hpp"
#include "calmetrics/errors.hpp"
#include "calmetrics/evaluate.hpp"
#include "calmetrics/format.hpp"
#include "calmetrics/io.hpp"
#include "calmetrics/mc_oracle.hpp"
#include "calmetrics/random.hpp"
#include "calmetrics/rank_analysis.hpp"
#include "calmetrics/synthetic.hpp"
