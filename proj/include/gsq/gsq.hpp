#pragma once

#include "gsq/cascaded.hpp"
#include "gsq/core/evolve.hpp"
#include "gsq/core/matrices.hpp"
#include "gsq/core/operators.hpp"
#include "gsq/core/trajectory.hpp"
#include "gsq/core/types.hpp"
#include "gsq/error.hpp"
#include "gsq/feedback.hpp"
#include "gsq/optimizer.hpp"
#include "gsq/single_mode.hpp"
#include "gsq/sweep_table.hpp"
