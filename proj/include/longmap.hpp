#pragma once

#include "longmap/bench.hpp"
#include "longmap/conformance.hpp"
#include "longmap/fixed_long_map.hpp"
#include "longmap/growable_long_map.hpp"
#include "longmap/hashing.hpp"
#include "longmap/invariant.hpp"
#include "longmap/ordered_list_map.hpp"
#include "longmap/seek.hpp"
#include "longmap/trace_io.hpp"
