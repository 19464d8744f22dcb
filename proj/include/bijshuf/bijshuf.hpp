#pragma once

// Umbrella header: parallel deterministic shuffling via pseudo-random
// bijections with stream compaction, uniformity tests, and benchmarks.

#include "bijshuf/bench.hpp"
#include "bijshuf/bijection.hpp"
#include "bijshuf/parallel.hpp"
#include "bijshuf/permutation.hpp"
#include "bijshuf/shuffle.hpp"
#include "bijshuf/splitmix.hpp"
#include "bijshuf/stats.hpp"
