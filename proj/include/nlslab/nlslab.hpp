#pragma once

#include "nlslab/constants.hpp"
#include "nlslab/context.hpp"
#include "nlslab/criteria.hpp"
#include "nlslab/error.hpp"
#include "nlslab/field.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/io.hpp"
#include "nlslab/params.hpp"
#include "nlslab/solver.hpp"
#include "nlslab/sweep.hpp"
#include "nlslab/tables.hpp"
#include "nlslab/thresholds.hpp"
