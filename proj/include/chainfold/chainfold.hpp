#ifndef CHAINFOLD_CHAINFOLD_HPP
#define CHAINFOLD_CHAINFOLD_HPP

#include "chainfold/analysis.hpp"
#include "chainfold/bigint.hpp"
#include "chainfold/constructions.hpp"
#include "chainfold/cover.hpp"
#include "chainfold/error.hpp"
#include "chainfold/permutation.hpp"
#include "chainfold/poset.hpp"
#include "chainfold/random.hpp"
#include "chainfold/semiring.hpp"
#include "chainfold/set_system.hpp"
#include "chainfold/solver.hpp"
#include "chainfold/verify.hpp"

#endif  // CHAINFOLD_CHAINFOLD_HPP
