#pragma once

#include "arith.hpp"
#include "arcs.hpp"
#include "core.hpp"
#include "error_terms.hpp"
#include "expsum.hpp"
#include "repcount.hpp"
#include "singular.hpp"
