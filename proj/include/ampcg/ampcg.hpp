#pragma once

#include "ampcg/analysis.hpp"
#include "ampcg/gaussian.hpp"
#include "ampcg/graph.hpp"
#include "ampcg/graph_io.hpp"
#include "ampcg/learner.hpp"
#include "ampcg/oracle.hpp"
#include "ampcg/separation.hpp"
