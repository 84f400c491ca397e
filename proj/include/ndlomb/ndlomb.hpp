#pragma once

#include "ndlomb/baselines.hpp"
#include "ndlomb/config.hpp"
#include "ndlomb/csv.hpp"
#include "ndlomb/error.hpp"
#include "ndlomb/lsm.hpp"
#include "ndlomb/parallel.hpp"
#include "ndlomb/report.hpp"
#include "ndlomb/stats.hpp"
#include "ndlomb/summation.hpp"
#include "ndlomb/sweep.hpp"
#include "ndlomb/synth.hpp"
#include "ndlomb/types.hpp"
