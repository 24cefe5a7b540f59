#pragma once

#include "ops/bench.hpp"
#include "ops/calendar.hpp"
#include "ops/decoder.hpp"
#include "ops/encoding.hpp"
#include "ops/generator.hpp"
#include "ops/instance.hpp"
#include "ops/instance_io.hpp"
#include "ops/local_search.hpp"
#include "ops/metaheuristics.hpp"
#include "ops/rational.hpp"
#include "ops/rng.hpp"
#include "ops/solution_graph.hpp"
