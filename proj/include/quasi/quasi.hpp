#pragma once

#include "automata.hpp"
#include "bits.hpp"
#include "fixpoint.hpp"
#include "grammar.hpp"
#include "inclusion.hpp"
#include "io.hpp"
#include "learn.hpp"
#include "quasiorder.hpp"
#include "regex.hpp"
#include "residual.hpp"
#include "search.hpp"
#include "slp.hpp"
