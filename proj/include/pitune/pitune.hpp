#pragma once

// Umbrella header: everything needed to tune, simulate and chart PI control
// of a first-order process with dead time.

#include "pitune/charts.hpp"
#include "pitune/emit.hpp"
#include "pitune/errors.hpp"
#include "pitune/model.hpp"
#include "pitune/nodelay.hpp"
#include "pitune/optimize.hpp"
#include "pitune/oracle.hpp"
#include "pitune/parallel.hpp"
#include "pitune/response.hpp"
#include "pitune/roots.hpp"
#include "pitune/rules.hpp"
#include "pitune/stability.hpp"
#include "pitune/steps.hpp"
