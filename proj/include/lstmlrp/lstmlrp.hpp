#pragma once

// Umbrella header: bi-directional LSTM sentence classifier with two input
// attribution methods (squared-gradient sensitivity analysis and layer-wise
// relevance propagation), plus training, evaluation protocols, and IO.

#include "lstmlrp/errors.hpp"
#include "lstmlrp/eval.hpp"
#include "lstmlrp/explain.hpp"
#include "lstmlrp/heatmap.hpp"
#include "lstmlrp/io.hpp"
#include "lstmlrp/model.hpp"
#include "lstmlrp/numerics.hpp"
#include "lstmlrp/synthetic.hpp"
#include "lstmlrp/train.hpp"
