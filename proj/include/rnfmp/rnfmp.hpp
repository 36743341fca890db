#pragma once

// Umbrella header for the rnfmp toolkit.

#include "rnfmp/network.hpp"
#include "rnfmp/instance.hpp"
#include "rnfmp/ingest.hpp"
#include "rnfmp/instance_io.hpp"
#include "rnfmp/solution.hpp"
#include "rnfmp/prune.hpp"
#include "rnfmp/reduce.hpp"
#include "rnfmp/heuristic.hpp"
#include "rnfmp/assignment.hpp"
#include "rnfmp/solver.hpp"
#include "rnfmp/oracle.hpp"
#include "rnfmp/gap.hpp"
#include "rnfmp/model.hpp"
#include "rnfmp/pipeline.hpp"
#include "rnfmp/analysis.hpp"
#include "rnfmp/synthetic.hpp"
#include "rnfmp/cli.hpp"
