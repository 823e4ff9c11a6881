#pragma once

#include "frontsolve/analysis.hpp"
#include "frontsolve/cascade.hpp"
#include "frontsolve/compare.hpp"
#include "frontsolve/errors.hpp"
#include "frontsolve/io.hpp"
#include "frontsolve/mms.hpp"
#include "frontsolve/problem.hpp"
#include "frontsolve/solver.hpp"
#include "frontsolve/state.hpp"
#include "frontsolve/transform.hpp"
#include "frontsolve/verify.hpp"
