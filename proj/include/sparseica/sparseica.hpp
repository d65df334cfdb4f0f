#pragma once

#include "sparseica/assignment.hpp"
#include "sparseica/causal.hpp"
#include "sparseica/lbfgs.hpp"
#include "sparseica/matrix_io.hpp"
#include "sparseica/metrics.hpp"
#include "sparseica/model.hpp"
#include "sparseica/objective.hpp"
#include "sparseica/simulate.hpp"
#include "sparseica/solver.hpp"
#include "sparseica/structure.hpp"
#include "sparseica/types.hpp"
