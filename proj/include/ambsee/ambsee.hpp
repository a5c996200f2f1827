#pragma once

#include "ambsee/units.hpp"
#include "ambsee/config.hpp"
#include "ambsee/rng.hpp"
#include "ambsee/scenario.hpp"
#include "ambsee/channel.hpp"
#include "ambsee/secrecy.hpp"
#include "ambsee/power.hpp"
#include "ambsee/dinkelbach.hpp"
#include "ambsee/problem.hpp"
#include "ambsee/reflection.hpp"
#include "ambsee/grid_search.hpp"
#include "ambsee/pso.hpp"
#include "ambsee/closed_form.hpp"
#include "ambsee/solve.hpp"
#include "ambsee/oma.hpp"
#include "ambsee/parallel.hpp"
#include "ambsee/experiments.hpp"
#include "ambsee/dataset.hpp"
#include "ambsee/report.hpp"
