#pragma once

#include "blockcg/benchmark.hpp"
#include "blockcg/blocks.hpp"
#include "blockcg/errors.hpp"
#include "blockcg/partition.hpp"
#include "blockcg/problem.hpp"
#include "blockcg/solver.hpp"
