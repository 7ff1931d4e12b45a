#pragma once

// Umbrella header: the whole document-expansion retrieval toolkit.

#include "expando/bench.hpp"
#include "expando/binio.hpp"
#include "expando/config.hpp"
#include "expando/decoding.hpp"
#include "expando/eval.hpp"
#include "expando/expansion.hpp"
#include "expando/index.hpp"
#include "expando/io.hpp"
#include "expando/pipeline.hpp"
#include "expando/retrieval.hpp"
#include "expando/rng.hpp"
#include "expando/text.hpp"
