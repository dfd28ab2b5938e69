// Umbrella header.

#pragma once

#include "aaul/bisim.hpp"
#include "aaul/checker.hpp"
#include "aaul/formula.hpp"
#include "aaul/kripke.hpp"
#include "aaul/oracle.hpp"
#include "aaul/sat_search.hpp"
#include "aaul/syntax.hpp"
#include "aaul/tiling.hpp"
#include "aaul/updates.hpp"
