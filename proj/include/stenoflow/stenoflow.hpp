#pragma once

#include "config.hpp"
#include "csv.hpp"
#include "diagnostics.hpp"
#include "field.hpp"
#include "forcing.hpp"
#include "geometry.hpp"
#include "oracles.hpp"
#include "params.hpp"
#include "plots.hpp"
#include "runner.hpp"
#include "simulation.hpp"
#include "solver.hpp"
#include "validate.hpp"
