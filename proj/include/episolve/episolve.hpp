#pragma once

// Umbrella header: epistemic models, chromatic complexes, the equivalence
// between them, update-based protocols, task solvability, and the homology
// obstruction, plus JSON/DOT input-output.

#include "episolve/common.hpp"
#include "episolve/equivalence.hpp"
#include "episolve/io.hpp"
#include "episolve/kripke.hpp"
#include "episolve/logic.hpp"
#include "episolve/protocol.hpp"
#include "episolve/simplicial.hpp"
#include "episolve/tasks.hpp"
#include "episolve/topology.hpp"
