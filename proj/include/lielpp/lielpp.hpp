#pragma once

// Umbrella header.

#include "lielpp/analysis.hpp"
#include "lielpp/descriptors.hpp"
#include "lielpp/errors.hpp"
#include "lielpp/evaluate.hpp"
#include "lielpp/experiment.hpp"
#include "lielpp/generalized_eigen.hpp"
#include "lielpp/graph.hpp"
#include "lielpp/io.hpp"
#include "lielpp/matrix.hpp"
#include "lielpp/matrix_functions.hpp"
#include "lielpp/reducers.hpp"
#include "lielpp/rng.hpp"
#include "lielpp/spd.hpp"
#include "lielpp/sym_eigen.hpp"
#include "lielpp/synthetic.hpp"
#include "lielpp/version.hpp"
