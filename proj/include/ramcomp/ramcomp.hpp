#pragma once

#include "ramcomp/bounds.hpp"
#include "ramcomp/errors.hpp"
#include "ramcomp/experiments.hpp"
#include "ramcomp/graphs.hpp"
#include "ramcomp/linalg.hpp"
#include "ramcomp/report.hpp"
#include "ramcomp/rng.hpp"
#include "ramcomp/solver.hpp"
#include "ramcomp/subspace.hpp"
