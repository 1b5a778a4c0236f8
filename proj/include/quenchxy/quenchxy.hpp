#pragma once

#include "quenchxy/model.hpp"
#include "quenchxy/solver.hpp"
#include "quenchxy/states.hpp"
#include "quenchxy/measures.hpp"
#include "quenchxy/oracle.hpp"
#include "quenchxy/parallel.hpp"
#include "quenchxy/ensemble.hpp"
#include "quenchxy/scores.hpp"
