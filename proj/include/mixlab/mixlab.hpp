#pragma once

#include "mixlab/bounds.hpp"
#include "mixlab/chain_sequence.hpp"
#include "mixlab/distribution.hpp"
#include "mixlab/envelope.hpp"
#include "mixlab/evolving.hpp"
#include "mixlab/experiments.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/rng.hpp"
#include "mixlab/stochastic_matrix.hpp"
#include "mixlab/subset.hpp"
#include "mixlab/tail_bounds.hpp"
#include "mixlab/target.hpp"
#include "mixlab/types.hpp"
