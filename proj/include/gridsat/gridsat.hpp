#pragma once

#include "gridsat/backend.hpp"
#include "gridsat/bench.hpp"
#include "gridsat/cdcl.hpp"
#include "gridsat/cnf.hpp"
#include "gridsat/driver.hpp"
#include "gridsat/encoder.hpp"
#include "gridsat/fixtures.hpp"
#include "gridsat/game.hpp"
#include "gridsat/graph.hpp"
#include "gridsat/level.hpp"
#include "gridsat/plan.hpp"
#include "gridsat/reach.hpp"
#include "gridsat/search.hpp"
